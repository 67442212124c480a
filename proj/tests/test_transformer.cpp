#include <catch2/catch_amalgamated.hpp>

#include "pgcl/parser.hpp"
#include "pgcl/transformer.hpp"

using namespace pgcl;

static Expectation post_of(const ParsedProgram& p, const char* src) {
    return eval(parse_eexpr(src, p.space), p.space);
}

TEST_CASE("skip, abort and assignment") {
    auto p = parse_program("var x : {0,1,2}; skip");
    auto r = post_of(p, "1/3 * [x = 1]");
    CHECK(wp(p.prog, r) == r);
    CHECK(wlp(p.prog, r) == r);

    auto ab = parse_program("var x : {0,1,2}; abort");
    CHECK(wp(ab.prog, r) == Expectation::zero(p.space));
    // liberal semantics promises nothing beyond the bound
    CHECK(wlp(ab.prog, r) == Expectation::constant(p.space, rat(1, 3)));

    auto asg = parse_program("var x : {0,1,2}; x := 2");
    auto w = wp(asg.prog, post_of(asg, "[x = 2]"));
    for (std::size_t s = 0; s < 3; ++s) CHECK(w.at(s) == 1);
}

TEST_CASE("assignment outside the domain is a semantic error") {
    auto p = parse_program("var x : {0,1}; x := x + 1");
    CHECK_THROWS_AS(wp(p.prog, Expectation::constant(p.space, 1)), SemanticError);
    // the update must be total over the whole space, reachable or not
    auto q = parse_program("var x : {0,1,2}; x := 1; x := x + 1");
    CHECK_THROWS_AS(wp(q.prog, Expectation::constant(q.space, 1)), SemanticError);
}

TEST_CASE("sequence composes backwards") {
    auto p = parse_program("var x : {0,1,2}; x := 1; x := 2 - x");
    auto w = wp(p.prog, post_of(p, "[x = 1]"));
    for (std::size_t s = 0; s < 3; ++s) CHECK(w.at(s) == 1);
}

TEST_CASE("probabilistic choice mixes with the stated weight") {
    auto p = parse_program("var x : {0,1}; x := 0 [1/3] x := 1");
    auto w = wp(p.prog, post_of(p, "[x = 0]"));
    CHECK(w.at(0) == rat(1, 3));
    CHECK(w.at(1) == rat(1, 3));
}

TEST_CASE("state-dependent probabilities are checked per state") {
    // p = x/2 is a probability only while x <= 2
    auto ok = parse_program("var x : {0,1,2}; skip [x * 1/2] x := 0");
    auto w = wp(ok.prog, post_of(ok, "[x = 0]"));
    CHECK(w.at(0) == 1);             // p=0, right branch
    CHECK(w.at(1) == rat(1, 2));     // mix
    CHECK(w.at(2) == 0);             // p=1, left branch keeps x=2
    auto bad = parse_program("var x : {0,1,4}; skip [x * 1/2] x := 0");
    CHECK_THROWS_AS(wp(bad.prog, post_of(bad, "1")), SemanticError);
}

TEST_CASE("demonic choice is the pointwise minimum") {
    auto p = parse_program("var x : {0,1}; x := 0 [] x := 1");
    auto w = wp(p.prog, post_of(p, "[x = 0]"));
    CHECK(w.at(0) == 0);
    CHECK(w.at(1) == 0);
    auto sure = wp(p.prog, post_of(p, "[x = 0] + [x = 1]"));
    CHECK(sure.at(0) == 1);
}

TEST_CASE("set choice minimizes over the evaluated set") {
    auto p = parse_program("var x : {1,2,3}; var y : {1,2,3}; y :: {1,2,3} \\ {x}");
    auto w = wp(p.prog, post_of(p, "[y = 2]"));
    // from x=1 the demon picks y in {2,3}, so [y=2] can be dodged
    CHECK(w.at(p.space->rank_of({1, 1})) == 0);
    auto v = wp(p.prog, post_of(p, "[y != x]"));
    for (std::size_t s = 0; s < 9; ++s) CHECK(v.at(s) == 1);
}

TEST_CASE("empty set choice is a semantic error naming the state") {
    auto p = parse_program("var x : {1,2}; x :: {1,2} \\ {1,2}");
    try {
        wp(p.prog, Expectation::constant(p.space, 1));
        FAIL("expected a semantic error");
    } catch (const SemanticError& e) {
        CHECK(std::string(e.what()).find("empty set choice") != std::string::npos);
    }
}

TEST_CASE("conditionals select by guard") {
    auto p = parse_program("var x : {0,1}; if x = 0 then x := 1 else x := 0 fi");
    auto w = wp(p.prog, post_of(p, "[x = 1]"));
    CHECK(w.at(0) == 1);
    CHECK(w.at(1) == 0);
}

TEST_CASE("three-door game, keeping the first guess, wins one third") {
    auto p = parse_program(
        "var P : {1,2,3}; var G : {1,2,3}; var C : {1,2,3};\n"
        "(P := 1 [] P := 2 [] P := 3);\n"
        "(G := 1 [1/3] (G := 2 [1/2] G := 3));\n"
        "C :: {1,2,3} \\ {P, G}\n");
    auto w = wp(p.prog, post_of(p, "[G = P]"));
    for (std::size_t s = 0; s < 27; ++s) CHECK(w.at(s) == rat(1, 3));
}

TEST_CASE("three-door game, switching, wins exactly two thirds") {
    auto p = parse_program(
        "var P : {1,2,3}; var G : {1,2,3}; var C : {1,2,3};\n"
        "(P := 1 [] P := 2 [] P := 3);\n"
        "(G := 1 [1/3] (G := 2 [1/2] G := 3));\n"
        "C :: {1,2,3} \\ {P, G};\n"
        "G :: {1,2,3} \\ {C, G}\n");
    auto w = wp(p.prog, post_of(p, "[G = P]"));
    for (std::size_t s = 0; s < 27; ++s) CHECK(w.at(s) == rat(2, 3));
}

TEST_CASE("guessing attack succeeds with probability one half") {
    auto p = parse_program(
        "var h : {0,1}; var l : {0,1}; (h := 0 [] h := 1); (l := 0 [1/2] l := 1)");
    auto w = wp(p.prog, post_of(p, "[l = h]"));
    for (std::size_t s = 0; s < 4; ++s) CHECK(w.at(s) == rat(1, 2));
    // the coin gives the adversary nothing either way
    auto leak = wp(p.prog, post_of(p, "[l != h]"));
    for (std::size_t s = 0; s < 4; ++s) CHECK(leak.at(s) == rat(1, 2));

    // with l demonic as well, no post involving l is guaranteed at all
    auto d = parse_program(
        "var h : {0,1}; var l : {0,1}; (h := 0 [] h := 1); (l := 0 [] l := 1)");
    for (const char* post : {"[l = h]", "[l != h]"}) {
        auto g = wp(d.prog, post_of(d, post));
        for (std::size_t s = 0; s < 4; ++s) CHECK(g.at(s) == 0);
    }
}

TEST_CASE("loop iterates approach the fixed point from below") {
    auto p = parse_program("var c : {0,1}; do c = 0 -> (c := 1 [1/2] skip) od");
    auto one = Expectation::constant(p.space, 1);
    for (unsigned k = 1; k <= 20; ++k) {
        FixpointConfig cfg;
        cfg.tolerance = 0;
        cfg.max_iter = k;
        auto r = transform(p.prog, Semantics::Strict, one, cfg);
        REQUIRE(r.loops.size() == 1);
        CHECK(r.loops[0].iterations == k);
        CHECK_FALSE(r.loops[0].converged);
        CHECK(r.loops[0].direction == FixpointResult::Direction::Ascending);
        CHECK(r.value.at(0) == 1 - pow2_inv(k));
        CHECK(r.value.at(1) == 1);
        CHECK(r.loops[0].residual == pow2_inv(k));
    }
    // default tolerance 1/10^9 is passed after 30 doublings
    auto r = transform(p.prog, Semantics::Strict, one, {});
    CHECK(r.loops[0].converged);
    CHECK(r.loops[0].iterations == 30);
    CHECK(r.value.at(0) == 1 - pow2_inv(30));
}

TEST_CASE("exact fixed points solve the loop completely") {
    auto p = parse_program("var c : {0,1}; do c = 0 -> (c := 1 [1/2] skip) od");
    FixpointConfig cfg;
    cfg.exact = true;
    auto r = transform(p.prog, Semantics::Strict, Expectation::constant(p.space, 1), cfg);
    CHECK(r.value.at(0) == 1);
    CHECK(r.value.at(1) == 1);
    CHECK(r.loops[0].converged);
    CHECK(r.loops[0].residual == 0);
}

TEST_CASE("false guard means the loop is a skip") {
    auto p = parse_program("var c : {0,1}; do c = 5 -> abort od");
    auto post = post_of(p, "[c = 1]");
    auto r = transform(p.prog, Semantics::Strict, post, {});
    CHECK(r.value == post);
    CHECK(r.loops[0].iterations == 1);
    CHECK(r.loops[0].converged);
}

TEST_CASE("divergence scores zero strictly and the bound liberally") {
    auto p = parse_program("var c : {0,1}; do c = 0 -> skip od");
    auto post = post_of(p, "3/4 * [c = 1] + 3/4 * [c = 0]");
    auto w = wp(p.prog, post);
    CHECK(w.at(0) == 0);
    CHECK(w.at(1) == rat(3, 4));
    auto l = wlp(p.prog, post);
    CHECK(l.at(0) == rat(3, 4));  // the bound of the post
    CHECK(l.at(1) == rat(3, 4));
    FixpointConfig cfg;
    cfg.exact = true;
    CHECK(wp(p.prog, post, cfg).at(0) == 0);
}

TEST_CASE("exact mode limits") {
    FixpointConfig cfg;
    cfg.exact = true;
    auto nested = parse_program(
        "var c : {0,1}; var d : {0,1};\n"
        "do c = 0 -> do d = 0 -> d := 1 od; (c := 1 [1/2] skip) od");
    CHECK_THROWS_AS(wp(nested.prog, Expectation::constant(nested.space, 1), cfg),
                    UnsupportedError);
    auto p = parse_program("var c : {0,1}; do c = 0 -> c := 1 od");
    CHECK_THROWS_AS(
        transform(p.prog, Semantics::Liberal, Expectation::constant(p.space, 1), cfg),
        UnsupportedError);
}

TEST_CASE("liberal loop on a feasible body stays at the top") {
    auto p = parse_program("var c : {0,1}; do c = 0 -> (c := 1 [1/2] skip) od");
    auto post = post_of(p, "[c = 1]");
    auto r = transform(p.prog, Semantics::Liberal, post, {});
    CHECK(r.value.at(0) == 1);
    CHECK(r.value.at(1) == 1);
    CHECK(r.loops[0].iterations == 1);
    CHECK(r.loops[0].direction == FixpointResult::Direction::Descending);
}

TEST_CASE("exec relation: minimum over successors, failure aborts, both duals") {
    auto sp = parse_program("var x : {0,1,2}; skip").space;
    auto post = eval(parse_eexpr("[x = 2]", sp), sp);

    // 0 -> {1,2}, 1 -> fail, 2 -> {2}
    NondetRelation rel(sp, {{{1, 2}, false}, {{}, true}, {{2}, false}}, "step");
    auto prog = lift_exec(rel);
    auto w = wp(prog, post);
    CHECK(w.at(0) == 0);  // the demon picks the worse of states 1 and 2
    CHECK(w.at(1) == 0);  // failure behaves as abort
    CHECK(w.at(2) == 1);
    auto l = wlp(prog, post);
    CHECK(l.at(0) == 0);
    CHECK(l.at(1) == 1);  // liberal abort promises the bound
    CHECK(l.at(2) == 1);

    // a stuck state (no successors, no failure) yields the bound either way
    NondetRelation stuck(sp, {{{}, false}, {{1}, false}, {{2}, false}}, "stuck");
    auto sprog = lift_exec(stuck);
    CHECK(wp(sprog, post).at(0) == 1);
    CHECK(wlp(sprog, post).at(0) == 1);
}

TEST_CASE("one fixpoint record per loop solved") {
    auto p = parse_program(
        "var c : {0,1}; var d : {0,1};\n"
        "do c = 0 -> c := 1 od; do d = 0 -> d := 1 od");
    auto r = transform(p.prog, Semantics::Strict, Expectation::constant(p.space, 1), {});
    CHECK(r.loops.size() == 2);
}
