#pragma once

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "pgcl/healthiness.hpp"
#include "pgcl/oracle.hpp"
#include "pgcl/refinement.hpp"
#include "pgcl/vcg.hpp"

// Command-line front end. Exit codes are a stable contract:
//   0 success / property holds
//   1 property fails, counterexample printed
//   2 parse or usage error
//   3 semantic error
//   4 unsupported mode
// Rationals are printed in lowest terms and never serialized as floats;
// --decimal N adds a clearly marked approximate column.

namespace pgcl {

inline constexpr int kExitHolds = 0;
inline constexpr int kExitFails = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitSemantic = 3;
inline constexpr int kExitUnsupported = 4;

struct RunConfig {
    Rational tolerance = rat(1, 1000000000);
    std::size_t max_iter = 100000;
    bool exact = false;
    std::uint64_t seed = 0;
    std::size_t samples = 100;
    enum class Output { Text, Json } output = Output::Text;
    int decimal = 0;  // 0 disables the approximate column

    FixpointConfig fixpoint() const { return FixpointConfig{tolerance, max_iter, exact}; }
};

namespace cli_detail {

using nlohmann::json;

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string num_str(const Rational& r) { return r.get_num().get_str(); }
inline std::string den_str(const Rational& r) { return r.get_den().get_str(); }

inline json rational_json(const Rational& r, const RunConfig& cfg) {
    json j;
    j["num"] = num_str(r);
    j["den"] = den_str(r);
    if (cfg.decimal > 0) j["approx"] = decimal_string(r, cfg.decimal);
    return j;
}

inline json table_json(const Expectation& e, const RunConfig& cfg) {
    json rows = json::array();
    const auto& sp = *e.space();
    for (std::size_t s = 0; s < sp.state_count(); ++s) {
        json row;
        row["state"] = sp.state_string(s);
        row["value_num"] = num_str(e.at(s));
        row["value_den"] = den_str(e.at(s));
        if (cfg.decimal > 0) row["approx"] = decimal_string(e.at(s), cfg.decimal);
        rows.push_back(std::move(row));
    }
    return rows;
}

inline void print_table(std::ostream& out, const Expectation& e, const RunConfig& cfg) {
    const auto& sp = *e.space();
    std::size_t w = 0;
    for (std::size_t s = 0; s < sp.state_count(); ++s)
        w = std::max(w, sp.state_string(s).size());
    for (std::size_t s = 0; s < sp.state_count(); ++s) {
        out << std::left << std::setw(static_cast<int>(w)) << sp.state_string(s) << "  "
            << to_string(e.at(s));
        if (cfg.decimal > 0) out << "  ~ " << decimal_string(e.at(s), cfg.decimal);
        out << "\n";
    }
}

inline void print_loops(std::ostream& out, const std::vector<FixpointResult>& loops) {
    for (std::size_t i = 0; i < loops.size(); ++i) {
        const auto& l = loops[i];
        out << "loop " << i + 1 << ": " << l.iterations << " iterations, "
            << (l.converged ? "converged" : "iteration cap reached") << ", residual "
            << to_string(l.residual) << ", "
            << (l.direction == FixpointResult::Direction::Ascending ? "ascending" : "descending")
            << "\n";
    }
}

inline json loops_json(const std::vector<FixpointResult>& loops) {
    json arr = json::array();
    for (const auto& l : loops) {
        json j;
        j["iterations"] = l.iterations;
        j["converged"] = l.converged;
        j["residual_num"] = num_str(l.residual);
        j["residual_den"] = den_str(l.residual);
        j["direction"] =
            l.direction == FixpointResult::Direction::Ascending ? "ascending" : "descending";
        arr.push_back(std::move(j));
    }
    return arr;
}

inline void emit(std::ostream& out, const json& j) { out << j.dump(2) << "\n"; }

inline int cmd_wp(const std::string& file, const std::string& post_src, bool liberal,
                  const RunConfig& cfg, std::ostream& out) {
    ParsedProgram p = parse_program(read_file(file));
    Expectation post = eval(parse_eexpr(post_src, p.space), p.space);
    TransformResult r = transform(p.prog, liberal ? Semantics::Liberal : Semantics::Strict, post,
                                  cfg.fixpoint());
    if (cfg.output == RunConfig::Output::Json) {
        json j;
        j["command"] = liberal ? "wlp" : "wp";
        j["verdict"] = "computed";
        j["table"] = table_json(r.value, cfg);
        j["obligations"] = json::array();
        j["loops"] = loops_json(r.loops);
        emit(out, j);
    } else {
        print_table(out, r.value, cfg);
        print_loops(out, r.loops);
    }
    return kExitHolds;
}

inline int cmd_check(const std::string& file, const std::string& pre_src,
                     const std::string& post_src, const RunConfig& cfg, std::ostream& out) {
    ParsedProgram p = parse_program(read_file(file));
    Expectation pre = eval(parse_eexpr(pre_src, p.space), p.space);
    Expectation post = eval(parse_eexpr(post_src, p.space), p.space);
    Expectation w = wp(p.prog, post, cfg.fixpoint());
    auto bad = entails_witness(pre, w);
    if (cfg.output == RunConfig::Output::Json) {
        json j;
        j["command"] = "check";
        j["verdict"] = bad ? "fails" : "holds";
        j["table"] = table_json(w, cfg);
        j["obligations"] = json::array();
        if (bad) {
            json c;
            c["state"] = p.space->state_string(*bad);
            c["pre"] = rational_json(pre.at(*bad), cfg);
            c["wp"] = rational_json(w.at(*bad), cfg);
            j["counterexample"] = std::move(c);
        }
        emit(out, j);
    } else if (bad) {
        out << "fails at " << p.space->state_string(*bad) << ": pre " << to_string(pre.at(*bad))
            << " > wp " << to_string(w.at(*bad)) << "\n";
    } else {
        out << "holds\n";
    }
    return bad ? kExitFails : kExitHolds;
}

inline int cmd_refine(const std::string& file_a, const std::string& file_b,
                      const std::string& mode, const RunConfig& cfg, std::ostream& out) {
    ParsedProgram a = parse_program(read_file(file_a));
    ParsedProgram b = parse_program(read_file(file_b));
    if (!(*a.space == *b.space))
        throw SemanticError("the two files declare different state spaces");
    RefinementVerdict v = mode == "exact"
                              ? refines_exact(a.prog, b.prog, a.space)
                              : refines_falsify(a.prog, b.prog, a.space, cfg.samples,
                                                static_cast<unsigned long>(cfg.seed),
                                                cfg.fixpoint());
    if (cfg.output == RunConfig::Output::Json) {
        json j;
        j["command"] = "refine";
        j["verdict"] = v.holds ? "holds" : "fails";
        j["mode"] = mode;
        j["table"] = json::array();
        j["obligations"] = json::array();
        if (!v.holds) {
            json c;
            c["state"] = a.space->state_string(*v.state);
            c["witness"] = table_json(*v.witness, cfg);
            c["lhs"] = rational_json(v.lhs, cfg);
            c["rhs"] = rational_json(v.rhs, cfg);
            j["counterexample"] = std::move(c);
        }
        emit(out, j);
    } else if (v.holds) {
        out << "refinement holds (" << mode << ")\n";
    } else {
        out << "refinement fails at " << a.space->state_string(*v.state) << ": wp(A)(Q) = "
            << to_string(v.lhs) << " > wp(B)(Q) = " << to_string(v.rhs) << "\nwitness Q:\n";
        print_table(out, *v.witness, cfg);
    }
    return v.holds ? kExitHolds : kExitFails;
}

inline void print_check(std::ostream& out, const char* name, const CheckResult& r,
                        const StateSpace& sp) {
    out << "  [" << (r.pass ? "pass" : "FAIL") << "] " << name;
    if (!r.pass) {
        out << ": " << r.what;
        if (r.state) out << " at " << sp.state_string(*r.state);
        out << " (lhs " << to_string(r.lhs) << ", rhs " << to_string(r.rhs) << ")";
    }
    out << "\n";
}

inline json check_json(const char* name, const CheckResult& r, const StateSpace& sp,
                       const RunConfig& cfg) {
    json j;
    j["name"] = name;
    j["pass"] = r.pass;
    if (!r.pass) {
        j["what"] = r.what;
        if (r.state) j["state"] = sp.state_string(*r.state);
        j["lhs"] = rational_json(r.lhs, cfg);
        j["rhs"] = rational_json(r.rhs, cfg);
    }
    return j;
}

inline int cmd_health(const std::string& file, const RunConfig& cfg, std::ostream& out) {
    ParsedProgram p = parse_program(read_file(file));
    HealthReport r = check_well_def(p.prog, p.space, cfg.samples,
                                    static_cast<unsigned long>(cfg.seed), cfg.fixpoint());
    if (cfg.output == RunConfig::Output::Json) {
        json j;
        j["command"] = "health";
        j["verdict"] = r.all_pass() ? "healthy" : "unhealthy";
        j["table"] = json::array();
        j["obligations"] = json::array();
        json checks = json::array();
        checks.push_back(check_json("feasibility", r.feasible, *p.space, cfg));
        checks.push_back(check_json("monotonicity", r.monotone, *p.space, cfg));
        checks.push_back(check_json("scaling", r.scaling, *p.space, cfg));
        checks.push_back(check_json("wp-entails-wlp", r.well_def, *p.space, cfg));
        j["checks"] = std::move(checks);
        emit(out, j);
    } else {
        out << (r.all_pass() ? "healthy" : "unhealthy") << "\n";
        print_check(out, "feasibility", r.feasible, *p.space);
        print_check(out, "monotonicity", r.monotone, *p.space);
        print_check(out, "scaling", r.scaling, *p.space);
        print_check(out, "wp-entails-wlp", r.well_def, *p.space);
    }
    return r.all_pass() ? kExitHolds : kExitFails;
}

inline int cmd_vcg(const std::string& file, const std::string& spec_file,
                   const std::string& pre_src, const std::string& post_src, const RunConfig& cfg,
                   std::ostream& out) {
    ParsedProgram p = parse_program(read_file(file));
    std::vector<SpecEntry> entries;
    if (!spec_file.empty()) entries = parse_spec_file(read_file(spec_file), p.space);
    SpecDb db = load_spec_db(entries, p.space, p.prog, cfg.fixpoint());
    Triple goal{eval(parse_eexpr(pre_src, p.space), p.space), p.prog,
                eval(parse_eexpr(post_src, p.space), p.space)};
    VcgResult res = prove_triple(goal, db, cfg.fixpoint());
    if (cfg.output == RunConfig::Output::Json) {
        json j;
        j["command"] = "vcg";
        j["verdict"] = res.verified() ? "verified" : "failed";
        j["assumptions"] = res.assumptions();
        j["table"] = table_json(res.pre, cfg);
        json obs = json::array();
        for (const auto& o : res.obligations) {
            json oj;
            oj["kind"] = o.kind == Obligation::Kind::Entailment ? "entailment"
                         : o.kind == Obligation::Kind::InvariantPreservation
                             ? "invariant-preservation"
                         : o.kind == Obligation::Kind::Termination ? "termination"
                                                                   : "soundness";
            oj["status"] = o.status == Obligation::Status::Discharged ? "discharged"
                           : o.status == Obligation::Status::Open     ? "assumed"
                                                                      : "failed";
            oj["origin"] = o.origin;
            if (o.counterexample) {
                oj["state"] = p.space->state_string(*o.counterexample);
                oj["lhs"] = rational_json(o.lhs_val, cfg);
                oj["rhs"] = rational_json(o.rhs_val, cfg);
            }
            obs.push_back(std::move(oj));
        }
        j["obligations"] = std::move(obs);
        j["trace"] = res.trace;
        emit(out, j);
    } else {
        out << vcg_report(res, *p.space);
    }
    return res.verified() ? kExitHolds : kExitFails;
}

inline int cmd_simulate(const std::string& file, const std::string& post_src,
                        const RunConfig& cfg, std::ostream& out) {
    ParsedProgram p = parse_program(read_file(file));
    Resolver r(p.space);
    std::optional<Expectation> post;
    if (!post_src.empty()) post = eval(parse_eexpr(post_src, p.space), p.space);
    const std::size_t n = p.space->state_count();
    json rows = json::array();
    for (std::size_t s = 0; s < n; ++s) {
        ResolutionSet set = r.at(p.prog, s);
        if (cfg.output == RunConfig::Output::Json) {
            json row;
            row["state"] = p.space->state_string(s);
            json dists = json::array();
            for (const auto& d : set.dists) {
                json dj;
                json pts = json::array();
                for (std::size_t t = 0; t < d.mass.size(); ++t)
                    if (d.mass[t] != 0) {
                        json pt;
                        pt["state"] = p.space->state_string(t);
                        pt["value_num"] = num_str(d.mass[t]);
                        pt["value_den"] = den_str(d.mass[t]);
                        pts.push_back(std::move(pt));
                    }
                dj["points"] = std::move(pts);
                dj["total_num"] = num_str(d.total());
                dj["total_den"] = den_str(d.total());
                dists.push_back(std::move(dj));
            }
            row["resolutions"] = std::move(dists);
            if (post) {
                Rational v = r.wp(p.prog, *post, s);
                row["value_num"] = num_str(v);
                row["value_den"] = den_str(v);
            }
            rows.push_back(std::move(row));
        } else {
            out << p.space->state_string(s) << ":\n";
            for (const auto& d : set.dists) {
                out << "  {";
                bool first = true;
                for (std::size_t t = 0; t < d.mass.size(); ++t)
                    if (d.mass[t] != 0) {
                        if (!first) out << ", ";
                        out << p.space->state_string(t) << ": " << to_string(d.mass[t]);
                        first = false;
                    }
                out << "} total " << to_string(d.total()) << "\n";
            }
            if (post) out << "  min expectation " << to_string(r.wp(p.prog, *post, s)) << "\n";
        }
    }
    if (cfg.output == RunConfig::Output::Json) {
        json j;
        j["command"] = "simulate-free";
        j["verdict"] = "computed";
        j["table"] = std::move(rows);
        j["obligations"] = json::array();
        emit(out, j);
    }
    return kExitHolds;
}

}  // namespace cli_detail

/// Parses argv and dispatches; writes results to out and errors to err.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
    CLI::App app{"exact expectation-transformer toolkit for pGCL over finite state spaces",
                 "pgcl"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string file, file_b, pre_src, post_src, spec_file;
    std::string mode = "exact", output = "text", tol_src;
    bool liberal = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--tol", tol_src, "fixed-point tolerance, a rational or decimal");
        sub->add_option("--max-iter", cfg.max_iter, "fixed-point iteration cap")
            ->check(CLI::PositiveNumber);
        sub->add_flag("--exact", cfg.exact, "solve loop fixed points exactly");
        sub->add_option("--seed", cfg.seed, "seed for randomized checks");
        sub->add_option("--samples", cfg.samples, "random expectations per check");
        sub->add_option("--output", output, "report format")
            ->check(CLI::IsMember({"text", "json"}));
        sub->add_option("--decimal", cfg.decimal, "add approximate column with N digits")
            ->check(CLI::PositiveNumber);
    };
    auto add_file = [&](CLI::App* sub) {
        sub->add_option("file", file, "program file")
            ->required()
            ->check(CLI::ExistingFile);
    };

    CLI::App* wp_cmd = app.add_subcommand("wp", "weakest pre-expectation of a post-expectation");
    add_file(wp_cmd);
    wp_cmd->add_option("--post", post_src, "post-expectation")->required();
    wp_cmd->add_flag("--liberal", liberal, "liberal semantics (partial correctness)");
    add_common(wp_cmd);

    CLI::App* wlp_cmd = app.add_subcommand("wlp", "weakest liberal pre-expectation");
    add_file(wlp_cmd);
    wlp_cmd->add_option("--post", post_src, "post-expectation")->required();
    add_common(wlp_cmd);

    CLI::App* check_cmd = app.add_subcommand("check", "check pre |- wp(program)(post)");
    add_file(check_cmd);
    check_cmd->add_option("--pre", pre_src, "claimed pre-expectation")->required();
    check_cmd->add_option("--post", post_src, "post-expectation")->required();
    add_common(check_cmd);

    CLI::App* refine_cmd = app.add_subcommand("refine", "check that program B refines program A");
    refine_cmd->add_option("fileA", file, "specification program")
        ->required()
        ->check(CLI::ExistingFile);
    refine_cmd->add_option("fileB", file_b, "candidate refinement")
        ->required()
        ->check(CLI::ExistingFile);
    refine_cmd->add_option("--mode", mode, "exact (loop-free) or falsify")
        ->check(CLI::IsMember({"exact", "falsify"}));
    add_common(refine_cmd);

    CLI::App* health_cmd = app.add_subcommand("health", "transformer healthiness checks");
    add_file(health_cmd);
    add_common(health_cmd);

    CLI::App* vcg_cmd = app.add_subcommand("vcg", "verification-condition generation");
    add_file(vcg_cmd);
    vcg_cmd->add_option("--spec", spec_file, "specification file")->check(CLI::ExistingFile);
    vcg_cmd->add_option("--pre", pre_src, "goal pre-expectation")->required();
    vcg_cmd->add_option("--post", post_src, "goal post-expectation")->required();
    add_common(vcg_cmd);

    CLI::App* sim_cmd =
        app.add_subcommand("simulate-free", "forward resolution sets of a loop-free program");
    add_file(sim_cmd);
    sim_cmd->add_option("--post", post_src, "also print the minimal expectation");
    add_common(sim_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitHolds : kExitUsage;
    }

    try {
        if (!tol_src.empty()) cfg.tolerance = parse_rational(tol_src);
        if (cfg.tolerance < 0) throw SemanticError("tolerance must be nonnegative");
        cfg.output = output == "json" ? RunConfig::Output::Json : RunConfig::Output::Text;

        using namespace cli_detail;
        if (wp_cmd->parsed()) return cmd_wp(file, post_src, liberal, cfg, out);
        if (wlp_cmd->parsed()) return cmd_wp(file, post_src, true, cfg, out);
        if (check_cmd->parsed()) return cmd_check(file, pre_src, post_src, cfg, out);
        if (refine_cmd->parsed()) return cmd_refine(file, file_b, mode, cfg, out);
        if (health_cmd->parsed()) return cmd_health(file, cfg, out);
        if (vcg_cmd->parsed()) return cmd_vcg(file, spec_file, pre_src, post_src, cfg, out);
        if (sim_cmd->parsed()) return cmd_simulate(file, post_src, cfg, out);
    } catch (const ParseError& e) {
        err << e.what() << "\n";
        return kExitUsage;
    } catch (const UnsupportedError& e) {
        err << "unsupported: " << e.what() << "\n";
        return kExitUnsupported;
    } catch (const SemanticError& e) {
        err << "error: " << e.what() << "\n";
        return kExitSemantic;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitSemantic;
    }
    return kExitUsage;
}

}  // namespace pgcl
