#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "pgcl/oracle.hpp"
#include "pgcl/sampling.hpp"
#include "pgcl/simplex.hpp"
#include "pgcl/transformer.hpp"

// Refinement b of a: wp(a)(Q) entails wp(b)(Q) for every sound Q. For
// loop-free programs this is decided exactly through the forward semantics;
// with loops a seeded falsifier searches for counterexamples.

namespace pgcl {

struct RefinementVerdict {
    bool holds = true;
    std::optional<std::size_t> state;    // initial state rank of the violation
    std::optional<Expectation> witness;  // post-expectation Q with wp(a)(Q)(s) > wp(b)(Q)(s)
    Rational lhs{0};                     // wp(a)(witness)(state)
    Rational rhs{0};                     // wp(b)(witness)(state)
};

namespace detail {

/// wp(a)(Q)(s) <= wp(b)(Q)(s) holds for every sound Q at state s iff every
/// resolution q of b lies above some convex combination of the resolutions
/// a_i of a. Deciding one q: the maximum over Q in [0,1]^S of
/// min_i(a_i . Q) - q . Q is positive exactly when no such combination
/// exists (a separating post-expectation), and the maximizer is a witness.
inline std::optional<LpResult> covering_violation(const std::vector<DistVec>& as,
                                                  const DistVec& q) {
    for (const auto& ai : as)
        if (dominates_eq(ai, q)) return std::nullopt;

    const std::size_t n = q.size();
    std::vector<std::vector<Rational>> rows;
    std::vector<Rational> rhs;
    for (const auto& ai : as) {
        std::vector<Rational> row(n + 1);
        for (std::size_t j = 0; j < n; ++j) row[j] = -ai[j];
        row[n] = 1;
        rows.push_back(std::move(row));
        rhs.push_back(Rational(0));
    }
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<Rational> row(n + 1, Rational(0));
        row[j] = 1;
        rows.push_back(std::move(row));
        rhs.push_back(Rational(1));
    }
    std::vector<Rational> obj(n + 1);
    for (std::size_t j = 0; j < n; ++j) obj[j] = -q[j];
    obj[n] = 1;

    LpResult r = simplex_max(rows, rhs, obj);
    if (r.value > 0) return r;
    return std::nullopt;
}

}  // namespace detail

/// Exact refinement check for loop-free programs over a shared space.
inline RefinementVerdict refines_exact(const ProgramPtr& a, const ProgramPtr& b,
                                       const SpacePtr& space) {
    Resolver res(space);
    const std::size_t n = space->state_count();
    for (std::size_t s = 0; s < n; ++s) {
        const auto& as = res.raw(a, s);
        const auto& bs = res.raw(b, s);
        for (const auto& q : bs) {
            auto viol = detail::covering_violation(as, q);
            if (!viol) continue;
            std::vector<Rational> w(viol->x.begin(), viol->x.begin() + n);
            Expectation witness(space, std::move(w));
            RefinementVerdict v;
            v.holds = false;
            v.state = s;
            v.lhs = res.wp(a, witness, s);
            v.rhs = res.wp(b, witness, s);
            v.witness = std::move(witness);
            return v;
        }
    }
    return {};
}

/// Searches for a refinement counterexample over the deterministic suite and
/// seeded random expectations. Programs with loops are compared through
/// exact fixed points where possible, else through sound brackets (strict
/// lower bound of a against liberal upper bound of b), so any reported
/// counterexample is genuine. holds=true only means nothing was found.
inline RefinementVerdict refines_falsify(const ProgramPtr& a, const ProgramPtr& b,
                                         const SpacePtr& space, std::size_t samples,
                                         unsigned long seed, const FixpointConfig& cfg = {}) {
    FixpointConfig exact_cfg = cfg;
    exact_cfg.exact = true;
    bool exact_mode = true;
    for (const Expectation& q : expectation_suite(space, samples, seed)) {
        std::optional<Expectation> la, ub;
        if (exact_mode) {
            try {
                la = wp(a, q, exact_cfg);
                ub = wp(b, q, exact_cfg);
            } catch (const UnsupportedError&) {
                exact_mode = false;
                la.reset();
                ub.reset();
            }
        }
        if (!la) {
            la = wp(a, q, cfg);
            ub = wlp(b, q, cfg);
        }
        for (std::size_t s = 0; s < space->state_count(); ++s) {
            if (la->at(s) > ub->at(s)) {
                RefinementVerdict v;
                v.holds = false;
                v.state = s;
                v.lhs = la->at(s);
                v.rhs = ub->at(s);
                v.witness = q;
                return v;
            }
        }
    }
    return {};
}

}  // namespace pgcl
