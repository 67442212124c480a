#include <catch2/catch_amalgamated.hpp>

#include "pgcl/state_space.hpp"

using namespace pgcl;

static SpacePtr small() {
    return std::make_shared<const StateSpace>(
        std::vector<StateSpace::Var>{{"x", {0, 1}}, {"y", {1, 2, 3}}});
}

TEST_CASE("ranks enumerate the product, first variable most significant") {
    auto sp = small();
    REQUIRE(sp->state_count() == 6);
    CHECK(sp->value_at(0, 0) == 0);
    CHECK(sp->value_at(0, 1) == 1);
    CHECK(sp->value_at(5, 0) == 1);
    CHECK(sp->value_at(5, 1) == 3);
    CHECK(sp->rank_of({1, 2}) == 4);
    CHECK(sp->values_of(4) == std::vector<long>{1, 2});
    CHECK(sp->state_string(4) == "x=1 y=2");
}

TEST_CASE("rebind changes one variable and keeps the rest") {
    auto sp = small();
    const std::size_t r = sp->rank_of({0, 3});
    const std::size_t r2 = sp->rebind(r, 0, 1);  // x -> domain slot 1, value 1
    CHECK(sp->values_of(r2) == std::vector<long>{1, 3});
    CHECK(sp->rebind(r2, 1, 0) == sp->rank_of({1, 1}));
}

TEST_CASE("name and value lookups") {
    auto sp = small();
    CHECK(sp->index_of("y") == 1);
    CHECK_FALSE(sp->index_of("z").has_value());
    CHECK_THROWS_AS(sp->require_var("z"), SemanticError);
    CHECK(sp->value_index(1, 3) == 2);
    CHECK_FALSE(sp->value_index(1, 7).has_value());
    CHECK_THROWS_AS(sp->rank_of({0, 9}), SemanticError);
}

TEST_CASE("construction validates and dedups") {
    CHECK_THROWS_AS(StateSpace(std::vector<StateSpace::Var>{{"x", {}}}), SemanticError);
    CHECK_THROWS_AS(StateSpace(std::vector<StateSpace::Var>{{"x", {0}}, {"x", {1}}}),
                    SemanticError);
    StateSpace dedup(std::vector<StateSpace::Var>{{"x", {1, 1, 2}}});
    CHECK(dedup.state_count() == 2);
}

TEST_CASE("structural equality is order sensitive") {
    auto a = small();
    auto b = small();
    CHECK(*a == *b);
    StateSpace c(std::vector<StateSpace::Var>{{"y", {1, 2, 3}}, {"x", {0, 1}}});
    CHECK(*a != c);
}

TEST_CASE("state wrapper checks its rank") {
    auto sp = small();
    State s(sp, 5);
    CHECK(s.rank() == 5);
    CHECK_THROWS_AS(State(sp, 6), SemanticError);
}
