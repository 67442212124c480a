#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "pgcl/cli.hpp"

using namespace pgcl;

namespace {

struct RunResult {
    int code;
    std::string out, err;
};

RunResult run(std::vector<std::string> args) {
    args.insert(args.begin(), "pgcl");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string sample(const char* name) { return std::string(PGCL_SAMPLES_DIR) + "/" + name; }

struct TempFile {
    std::string path;
    TempFile(const char* name, const std::string& content) {
        path = std::string("cli_test_") + name;
        std::ofstream f(path);
        f << content;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("wp prints an exact table, one row per state") {
    auto r = run({"wp", sample("monty_noswitch.pgcl"), "--post", "[G = P]"});
    REQUIRE(r.code == 0);
    std::istringstream lines(r.out);
    std::string line;
    int rows = 0;
    while (std::getline(lines, line)) {
        ++rows;
        CHECK(line.find("1/3") != std::string::npos);
    }
    CHECK(rows == 27);
}

TEST_CASE("wp on the switching variant gives two thirds everywhere") {
    auto r = run({"wp", sample("monty_switch.pgcl"), "--post", "[G = P]"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("2/3") != std::string::npos);
    CHECK(r.out.find("1/3") == std::string::npos);
}

TEST_CASE("wp of one over skip is one") {
    auto r = run({"wp", sample("skip.pgcl"), "--post", "1"});
    REQUIRE(r.code == 0);
    CHECK(r.out == "x=0  1\nx=1  1\n");
}

TEST_CASE("check exits zero on success and one with a counterexample") {
    auto holds = run({"check", sample("monty_switch.pgcl"), "--pre", "2/3", "--post", "[G = P]"});
    CHECK(holds.code == 0);
    CHECK(holds.out == "holds\n");
    auto fails = run({"check", sample("monty_switch.pgcl"), "--pre", "2/3 + 1/1000", "--post",
                      "[G = P]"});
    CHECK(fails.code == 1);
    CHECK(fails.out.find("fails at") != std::string::npos);
    CHECK(fails.out.find("2/3") != std::string::npos);
    auto zero = run({"check", sample("monty_switch.pgcl"), "--pre", "0", "--post", "[G = P]"});
    CHECK(zero.code == 0);
}

TEST_CASE("check on the demonic secret guess fails from every state") {
    auto r = run({"check", sample("secret_spec.pgcl"), "--pre", "1", "--post", "[l != h]"});
    CHECK(r.code == 1);
    CHECK(r.out.find("pre 1 > wp 0") != std::string::npos);
}

TEST_CASE("refine verdicts and exit codes") {
    CHECK(run({"refine", sample("attack.pgcl"), sample("attack_refined.pgcl")}).code == 0);
    auto bad = run({"refine", sample("attack.pgcl"), sample("attack_leak.pgcl")});
    CHECK(bad.code == 1);
    CHECK(bad.out.find("witness Q:") != std::string::npos);
    CHECK(run({"refine", sample("attack.pgcl"), sample("attack.pgcl")}).code == 0);
    // falsify agrees here
    CHECK(run({"refine", sample("attack.pgcl"), sample("attack_leak.pgcl"), "--mode", "falsify"})
              .code == 1);
    // loops are out of scope for the exact mode
    CHECK(run({"refine", sample("geometric.pgcl"), sample("geometric.pgcl")}).code == 4);
    // mismatched spaces are a semantic error
    CHECK(run({"refine", sample("attack.pgcl"), sample("geometric.pgcl")}).code == 3);
}

TEST_CASE("health passes on the samples") {
    for (const char* f : {"monty_noswitch.pgcl", "monty_switch.pgcl", "skip.pgcl",
                          "attack.pgcl", "geometric.pgcl"}) {
        auto r = run({"health", sample(f), "--samples", "8"});
        INFO(f << "\n" << r.out);
        CHECK(r.code == 0);
    }
}

TEST_CASE("vcg verifies the three-door chain and reports failures") {
    auto ok = run({"vcg", sample("monty_switch.pgcl"), "--spec", sample("monty_specs.spec"),
                   "--pre", "2/3", "--post", "[G = P]"});
    CHECK(ok.code == 0);
    CHECK(ok.out.rfind("VERIFIED\n", 0) == 0);
    CHECK(ok.out.find("wp_scale c=2/3") != std::string::npos);

    auto bad = run({"vcg", sample("monty_switch.pgcl"), "--spec", sample("monty_specs.spec"),
                    "--pre", "3/4", "--post", "[G = P]"});
    CHECK(bad.code == 1);
    CHECK(bad.out.find("3/4 > rhs 2/3") != std::string::npos);

    // no spec file: exact unfolding still verifies loop-free goals
    auto plain = run({"vcg", sample("monty_switch.pgcl"), "--pre", "2/3", "--post", "[G = P]"});
    CHECK(plain.code == 0);

    // a spec referencing a missing label is a usage error
    TempFile specs("lost.spec", "spec s: 1 |- nowhere: 1\n");
    CHECK(run({"vcg", sample("monty_switch.pgcl"), "--spec", specs.path, "--pre", "1",
               "--post", "1"})
              .code == 2);
}

TEST_CASE("vcg discharges the annotated geometric loop") {
    auto r = run({"vcg", sample("geometric.pgcl"), "--pre", "1", "--post", "[c = 1]",
                  "--exact"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("VERIFIED (1 assumption)", 0) == 0);
}

TEST_CASE("simulate-free prints resolution sets and a minimum") {
    auto r = run({"simulate-free", sample("attack_leak.pgcl"), "--post", "[l != h]"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("total 1") != std::string::npos);
    CHECK(r.out.find("min expectation 0") != std::string::npos);
    auto coin = run({"simulate-free", sample("attack.pgcl"), "--post", "[l != h]"});
    CHECK(coin.out.find("min expectation 1/2") != std::string::npos);
    CHECK(run({"simulate-free", sample("geometric.pgcl")}).code == 4);
}

TEST_CASE("parse errors exit two with a position") {
    TempFile bad("bad.pgcl", "var x : {0,1}; x := ");
    auto r = run({"wp", bad.path, "--post", "1"});
    CHECK(r.code == 2);
    CHECK(r.err.find("parse error at") != std::string::npos);
    auto badpost = run({"wp", sample("skip.pgcl"), "--post", "[x"});
    CHECK(badpost.code == 2);
}

TEST_CASE("semantic errors exit three") {
    TempFile empty_set("empty.pgcl", "var x : {1,2}; x :: {1} \\ {1}");
    CHECK(run({"wp", empty_set.path, "--post", "1"}).code == 3);
    TempFile bad_prob("prob.pgcl", "var x : {0,1}; skip [3/2] x := 0");
    CHECK(run({"wp", bad_prob.path, "--post", "1"}).code == 3);
}

TEST_CASE("usage errors exit two") {
    CHECK(run({}).code == 2);
    CHECK(run({"wp"}).code == 2);  // missing file and post
    CHECK(run({"wp", sample("skip.pgcl"), "--post", "1", "--nope"}).code == 2);
    CHECK(run({"wp", "no_such_file.pgcl", "--post", "1"}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("json output is machine readable and float free") {
    auto r = run({"wp", sample("monty_switch.pgcl"), "--post", "[G = P]", "--output", "json",
                  "--decimal", "3"});
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["command"] == "wp");
    CHECK(j["verdict"] == "computed");
    REQUIRE(j["table"].size() == 27);
    for (const auto& row : j["table"]) {
        CHECK(row["value_num"].is_string());
        CHECK(row["value_den"].is_string());
        CHECK(row["value_num"] == "2");
        CHECK(row["value_den"] == "3");
        CHECK(row["approx"] == "0.667");
    }
    CHECK(j["obligations"].is_array());

    auto v = run({"vcg", sample("geometric.pgcl"), "--pre", "1", "--post", "[c = 1]",
                  "--exact", "--output", "json"});
    auto jv = nlohmann::json::parse(v.out);
    CHECK(jv["verdict"] == "verified");
    CHECK(jv["assumptions"] == 1);
    bool saw_term = false;
    for (const auto& o : jv["obligations"])
        if (o["kind"] == "termination") {
            saw_term = true;
            CHECK(o["status"] == "discharged");
        }
    CHECK(saw_term);

    auto c = run({"check", sample("monty_switch.pgcl"), "--pre", "1", "--post", "[G = P]",
                  "--output", "json"});
    CHECK(c.code == 1);
    auto jc = nlohmann::json::parse(c.out);
    CHECK(jc["verdict"] == "fails");
    CHECK(jc["counterexample"]["pre"]["num"] == "1");
}

TEST_CASE("the decimal column is marked and optional") {
    auto without = run({"wp", sample("skip.pgcl"), "--post", "1/3"});
    CHECK(without.out.find("~") == std::string::npos);
    auto with = run({"wp", sample("skip.pgcl"), "--post", "1/3", "--decimal", "2"});
    CHECK(with.out.find("1/3  ~ 0.33") != std::string::npos);
}

TEST_CASE("loop convergence info is reported") {
    auto r = run({"wp", sample("geometric.pgcl"), "--post", "1"});
    CHECK(r.out.find("loop 1: 30 iterations, converged") != std::string::npos);
    auto e = run({"wp", sample("geometric.pgcl"), "--post", "1", "--exact"});
    CHECK(e.out.find("c=0  1\n") != std::string::npos);
    auto t = run({"wp", sample("geometric.pgcl"), "--post", "1", "--tol", "1/4",
                  "--max-iter", "10"});
    CHECK(t.out.find("c=0  3/4") != std::string::npos);  // stops once the residual is 1/4
    CHECK(t.out.find("loop 1: 2 iterations") != std::string::npos);
}

TEST_CASE("wlp differs from wp on aborting programs") {
    TempFile ab("abort.pgcl", "var x : {0,1}; abort");
    auto w = run({"wp", ab.path, "--post", "[x = 0]"});
    CHECK(w.out == "x=0  0\nx=1  0\n");
    auto l = run({"wlp", ab.path, "--post", "[x = 0]"});
    CHECK(l.out == "x=0  1\nx=1  1\n");
    auto lw = run({"wp", ab.path, "--post", "[x = 0]", "--liberal"});
    CHECK(lw.out == l.out);
}
