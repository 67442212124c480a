#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "pgcl/sampling.hpp"
#include "pgcl/transformer.hpp"

// Healthiness checks for a program's transformers: feasibility, monotonicity,
// scaling, and wp entails wlp. Checked by exhaustive small-space enumeration
// plus seeded sampling; a failure here indicates an engine defect, so the
// checks double as the engine's regression net.
//
// Loops are compared at equal iteration counts (zero tolerance, capped step
// budget, early exit only on exact stationarity), which makes monotonicity
// sound and scaling exact even for non-stationary fixed points.

namespace pgcl {

struct CheckResult {
    bool pass = true;
    std::string what;
    std::optional<Expectation> p, q;  // offending inputs, replayable
    std::optional<Rational> factor;
    std::optional<std::size_t> state;
    Rational lhs{0}, rhs{0};
};

struct HealthReport {
    CheckResult feasible, monotone, scaling, well_def;
    bool all_pass() const {
        return feasible.pass && monotone.pass && scaling.pass && well_def.pass;
    }
};

using Transformer = std::function<Expectation(const Expectation&)>;

// Cores take the transformer as a function so defect injection is testable.

inline CheckResult check_feasible_core(const std::vector<Expectation>& suite,
                                       const Transformer& t) {
    for (const auto& p : suite) {
        const Expectation r = t(p);
        const Rational bound = bound_of(p);
        for (std::size_t s = 0; s < r.space()->state_count(); ++s) {
            if (r.at(s) > bound) {
                CheckResult c;
                c.pass = false;
                c.p = p;
                c.state = s;
                c.lhs = r.at(s);
                c.rhs = bound;
                c.what = "feasibility: value " + to_string(c.lhs) + " exceeds bound " +
                         to_string(bound) + " at " + r.space()->state_string(s);
                return c;
            }
        }
    }
    return {};
}

inline CheckResult check_monotone_core(
    const std::vector<std::pair<Expectation, Expectation>>& pairs, const Transformer& t) {
    for (const auto& [p, q] : pairs) {
        const Expectation tp = t(p), tq = t(q);
        if (auto s = entails_witness(tp, tq)) {
            CheckResult c;
            c.pass = false;
            c.p = p;
            c.q = q;
            c.state = *s;
            c.lhs = tp.at(*s);
            c.rhs = tq.at(*s);
            c.what = "monotonicity: transformed " + to_string(c.lhs) + " > " + to_string(c.rhs) +
                     " at " + tp.space()->state_string(*s);
            return c;
        }
    }
    return {};
}

inline CheckResult check_scaling_core(const std::vector<std::pair<Rational, Expectation>>& cases,
                                      const Transformer& t) {
    for (const auto& [c, p] : cases) {
        const Expectation lhs = scale(c, t(p));
        const Expectation rhs = t(scale(c, p));
        for (std::size_t s = 0; s < lhs.space()->state_count(); ++s) {
            if (lhs.at(s) != rhs.at(s)) {
                CheckResult r;
                r.pass = false;
                r.p = p;
                r.factor = c;
                r.state = s;
                r.lhs = lhs.at(s);
                r.rhs = rhs.at(s);
                r.what = "scaling: c*t(P) = " + to_string(r.lhs) + " but t(c*P) = " +
                         to_string(r.rhs) + " for c = " + to_string(c) + " at " +
                         lhs.space()->state_string(s);
                return r;
            }
        }
    }
    return {};
}

inline CheckResult check_wp_wlp_core(const std::vector<Expectation>& suite, const Transformer& twp,
                                     const Transformer& twlp) {
    for (const auto& p : suite) {
        const Expectation a = twp(p), b = twlp(p);
        if (auto s = entails_witness(a, b)) {
            CheckResult c;
            c.pass = false;
            c.p = p;
            c.state = *s;
            c.lhs = a.at(*s);
            c.rhs = b.at(*s);
            c.what = "wp |= wlp: wp " + to_string(c.lhs) + " > wlp " + to_string(c.rhs) + " at " +
                     a.space()->state_string(*s);
            return c;
        }
    }
    return {};
}

namespace detail {

inline FixpointConfig health_cfg(const FixpointConfig& cfg, Semantics flag) {
    FixpointConfig out = cfg;
    if (flag == Semantics::Liberal) out.exact = false;
    if (!out.exact) {
        out.tolerance = 0;
        out.max_iter = std::min<std::size_t>(cfg.max_iter, 256);
    }
    return out;
}

inline Transformer engine(const ProgramPtr& prog, Semantics flag, const FixpointConfig& cfg) {
    const FixpointConfig eff = health_cfg(cfg, flag);
    return [prog, flag, eff](const Expectation& p) { return transform(prog, flag, p, eff).value; };
}

inline std::vector<std::pair<Expectation, Expectation>> entailed_pairs(
    const SpacePtr& space, std::size_t samples, unsigned long seed) {
    std::vector<std::pair<Expectation, Expectation>> pairs;
    for (const auto& q : expectation_suite(space, 0, seed)) {
        pairs.emplace_back(Expectation::zero(space), q);
        pairs.emplace_back(scale(Rational(1, 2), q), q);
        pairs.emplace_back(q, q);
    }
    std::mt19937_64 rng(seed + 1);
    std::uniform_int_distribution<int> quarters(0, 4);
    const std::size_t n = space->state_count();
    for (std::size_t k = 0; k < samples; ++k) {
        std::vector<Rational> qv(n), pv(n);
        for (std::size_t i = 0; i < n; ++i) {
            qv[i] = rat(quarters(rng), 4);
            const Rational noise = rat(quarters(rng), 4);
            pv[i] = qv[i] > noise ? qv[i] - noise : Rational(0);
        }
        pairs.emplace_back(Expectation(space, std::move(pv)), Expectation(space, std::move(qv)));
    }
    return pairs;
}

inline std::vector<std::pair<Rational, Expectation>> scaling_cases(const SpacePtr& space,
                                                                   std::size_t samples,
                                                                   unsigned long seed) {
    static const long cs_num[] = {1, 1, 3, 2, 1, 2, 3};
    static const long cs_den[] = {1, 2, 2, 1, 3, 3, 1};
    std::vector<std::pair<Rational, Expectation>> cases;
    std::size_t i = 0;
    for (const auto& p : expectation_suite(space, samples, seed)) {
        cases.emplace_back(rat(cs_num[i % 7], cs_den[i % 7]), p);
        ++i;
    }
    std::mt19937_64 rng(seed + 2);
    std::uniform_int_distribution<long> small(1, 4);
    std::uniform_int_distribution<int> quarters(0, 4);
    const std::size_t n = space->state_count();
    for (std::size_t k = 0; k < samples; ++k) {
        std::vector<Rational> v(n);
        for (auto& x : v) x = rat(quarters(rng), 4);
        cases.emplace_back(rat(small(rng), small(rng)), Expectation(space, std::move(v)));
    }
    return cases;
}

}  // namespace detail

inline CheckResult check_feasible(const ProgramPtr& prog, const SpacePtr& space, Semantics flag,
                                  std::size_t trials, unsigned long seed,
                                  const FixpointConfig& cfg = {}) {
    return check_feasible_core(expectation_suite(space, trials, seed),
                               detail::engine(prog, flag, cfg));
}

inline CheckResult check_monotone(const ProgramPtr& prog, const SpacePtr& space, Semantics flag,
                                  std::size_t trials, unsigned long seed,
                                  const FixpointConfig& cfg = {}) {
    return check_monotone_core(detail::entailed_pairs(space, trials, seed),
                               detail::engine(prog, flag, cfg));
}

inline CheckResult check_scaling(const ProgramPtr& prog, const SpacePtr& space, Semantics flag,
                                 std::size_t trials, unsigned long seed,
                                 const FixpointConfig& cfg = {}) {
    return check_scaling_core(detail::scaling_cases(space, trials, seed),
                              detail::engine(prog, flag, cfg));
}

/// Runs feasibility, monotonicity and scaling under both semantics plus the
/// wp-entails-wlp comparison; the per-condition result records the first
/// failure found across flags.
inline HealthReport check_well_def(const ProgramPtr& prog, const SpacePtr& space,
                                   std::size_t trials, unsigned long seed,
                                   const FixpointConfig& cfg = {}) {
    HealthReport r;
    for (Semantics flag : {Semantics::Strict, Semantics::Liberal}) {
        if (r.feasible.pass) r.feasible = check_feasible(prog, space, flag, trials, seed, cfg);
        if (r.monotone.pass) r.monotone = check_monotone(prog, space, flag, trials, seed, cfg);
        if (r.scaling.pass) r.scaling = check_scaling(prog, space, flag, trials, seed, cfg);
    }
    r.well_def = check_wp_wlp_core(expectation_suite(space, trials, seed),
                                   detail::engine(prog, Semantics::Strict, cfg),
                                   detail::engine(prog, Semantics::Liberal, cfg));
    return r;
}

}  // namespace pgcl
