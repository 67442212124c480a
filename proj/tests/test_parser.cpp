#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "pgcl/parser.hpp"
#include "support/program_gen.hpp"

using namespace pgcl;

TEST_CASE("declarations build the state space") {
    auto p = parse_program("var a : {1,2}; var b : {0..2}; skip");
    REQUIRE(p.space->var_count() == 2);
    CHECK(p.space->vars()[0].domain == std::vector<long>{1, 2});
    CHECK(p.space->vars()[1].domain == std::vector<long>{0, 1, 2});
    CHECK(p.prog->kind == Program::Kind::Skip);
}

TEST_CASE("declaration errors carry positions") {
    try {
        parse_program("var a : {2..1}; skip");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line == 1);
        CHECK(std::string(e.what()).find("empty range") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_program("var a : {1}; x := 1"), ParseError);   // undeclared
    CHECK_THROWS_AS(parse_program("var a : {1}; skip skip"), ParseError);  // trailing
    CHECK_THROWS_AS(parse_program("var a : {1}; var a : {2}; skip"), SemanticError);
}

TEST_CASE("sequence binds looser than demonic choice") {
    auto p = parse_program("var a : {0,1}; a := 0 [] a := 1 ; skip");
    REQUIRE(p.prog->kind == Program::Kind::Seq);
    CHECK(p.prog->p1->kind == Program::Kind::DC);
    CHECK(p.prog->p2->kind == Program::Kind::Skip);
}

TEST_CASE("probabilistic choice takes atoms and does not chain bare") {
    auto p = parse_program("var a : {0,1,2}; (a := 0 [1/2] a := 1) [1/3] a := 2");
    REQUIRE(p.prog->kind == Program::Kind::PC);
    CHECK(p.prog->p1->kind == Program::Kind::PC);
    CHECK_THROWS_AS(parse_program("var a : {0,1,2}; a := 0 [1/2] a := 1 [1/3] a := 2"),
                    ParseError);
}

TEST_CASE("comments and lexing edge cases") {
    auto p = parse_program("var a : {0,1}; -- pick\na := 0 -- done\n");
    CHECK(p.prog->kind == Program::Kind::Apply);
    // "-" followed by ">" is an arrow, "--" starts a comment
    auto q = parse_program("var a : {0,1}; do a = 0 -> a := 1 od");
    CHECK(q.prog->kind == Program::Kind::Loop);
}

TEST_CASE("negative literals round-trip") {
    auto p = parse_program("var a : {-2,-1,0}; a := -1");
    CHECK(p.prog->aexpr->kind == AExpr::Kind::Lit);
    CHECK(p.prog->aexpr->lit == -1);
    auto text = pretty_file(*p.space, p.prog);
    auto q = parse_program(text);
    CHECK(equal_programs(p.prog, q.prog));
    // subtraction of a negative literal must not print as a comment
    auto r = parse_program("var a : {-2,-1,0}; a := 0 - -1");
    auto rt = parse_program(pretty_file(*r.space, r.prog));
    CHECK(equal_programs(r.prog, rt.prog));
}

TEST_CASE("labels attach to atoms and are findable") {
    auto p = parse_program("var a : {0,1}; label go: (a := 0 [] a := 1); skip");
    auto node = find_labeled(p.prog, "go");
    REQUIRE(node);
    CHECK(node->kind == Program::Kind::DC);
    CHECK_FALSE(find_labeled(p.prog, "gone"));
    auto rt = parse_program(pretty_file(*p.space, p.prog));
    auto node2 = find_labeled(rt.prog, "go");
    REQUIRE(node2);
    CHECK(equal_programs(node, node2));
}

TEST_CASE("loop annotations round-trip") {
    auto p = parse_program(
        "var c : {0,1}; do c = 0 -> (c := 1 [1/2] skip) od @invariant [c = 0] + [c = 1]");
    REQUIRE(p.prog->annot);
    CHECK(p.prog->annot->termination == LoopAnnotation::Termination::Auto);
    auto q = parse_program(pretty_file(*p.space, p.prog));
    CHECK(equal_programs(p.prog, q.prog));

    auto a = parse_program("var c : {0,1}; do c = 0 -> skip od @invariant 1 @termination assumed");
    REQUIRE(a.prog->annot);
    CHECK(a.prog->annot->termination == LoopAnnotation::Termination::Assumed);
    auto art = parse_program(pretty_file(*a.space, a.prog));
    REQUIRE(art.prog->annot);
    CHECK(art.prog->annot->termination == LoopAnnotation::Termination::Assumed);
}

TEST_CASE("expectation expressions parse with precedence") {
    auto sp = parse_program("var a : {0,1}; skip").space;
    auto e = eval(parse_eexpr("1/2 * [a = 0] + 1/4", sp), sp);
    CHECK(e.at(0) == rat(3, 4));
    CHECK(e.at(1) == rat(1, 4));
    CHECK_THROWS_AS(parse_eexpr("[a = 0] +", sp), ParseError);
    CHECK_THROWS_AS(parse_eexpr("[b = 0]", sp), ParseError);  // undeclared
}

TEST_CASE("guards parse booleans with and/or/not") {
    auto sp = parse_program("var a : {0,1}; var b : {0,1}; skip").space;
    auto g = eval_predicate(parse_bexpr("!(a = b) | a < 0 & b = 1", sp), sp);
    CHECK(g.at(sp->rank_of({0, 1})));
    CHECK_FALSE(g.at(sp->rank_of({1, 1})));
}

TEST_CASE("spec files parse entries with optional assume") {
    auto sp = parse_program("var a : {0,1}; label go: a := 0").space;
    auto entries = parse_spec_file(
        "-- contracts\n"
        "spec one: 1 |- go: [a = 0]\n"
        "assume spec two: 1/2 |- go: [a = 1]\n",
        sp);
    REQUIRE(entries.size() == 2);
    CHECK(entries[0].name == "one");
    CHECK_FALSE(entries[0].assumed);
    CHECK(entries[1].assumed);
    CHECK(entries[1].ref == "go");
    CHECK_THROWS_AS(parse_spec_file("spec x: 1 |- go [a = 0]", sp), ParseError);
}

TEST_CASE("exec nodes do not print") {
    auto sp = parse_program("var a : {0,1}; skip").space;
    NondetRelation rel(sp, {{{0}, false}, {{1}, false}}, "id");
    CHECK_THROWS_AS(pretty(lift_exec(rel)), UnsupportedError);
}

TEST_CASE("random programs survive a print and re-parse round trip") {
    std::mt19937_64 rng(20260823);
    for (int i = 0; i < 300; ++i) {
        auto sp = testgen::random_space(rng);
        auto prog = testgen::random_program(rng, sp);
        const std::string text = pretty_file(*sp, prog);
        ParsedProgram back;
        try {
            back = parse_program(text);
        } catch (const ParseError& e) {
            INFO("failed on:\n" << text);
            FAIL(e.what());
        }
        INFO("program:\n" << text);
        CHECK(*back.space == *sp);
        CHECK(equal_programs(back.prog, prog));
    }
}
