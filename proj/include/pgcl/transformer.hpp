#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "pgcl/ast.hpp"
#include "pgcl/expectation.hpp"
#include "pgcl/expr.hpp"
#include "pgcl/linsolve.hpp"
#include "pgcl/oracle.hpp"

// Backward expectation-transformer semantics. Strict (wp) sends failure to 0,
// liberal (wlp) to the bound of the post-expectation. Loops are solved by
// monotone Kleene iteration with exact rational iterates, or exactly by
// policy iteration when requested.

namespace pgcl {

enum class Semantics { Strict, Liberal };

struct FixpointConfig {
    Rational tolerance = Rational(1, 1000000000);
    std::size_t max_iter = 100000;
    bool exact = false;
};

struct FixpointResult {
    enum class Direction { Ascending, Descending };
    Expectation value;
    std::size_t iterations = 0;
    bool converged = false;
    Rational residual{0};
    Direction direction = Direction::Ascending;

    explicit FixpointResult(Expectation v) : value(std::move(v)) {}
};

struct TransformResult {
    Expectation value;
    std::vector<FixpointResult> loops;  // one record per fixed point solved, in completion order
};

namespace detail {

inline Expectation transform_rec(const ProgramPtr& prog, Semantics flag, const Expectation& post,
                                 const FixpointConfig& cfg, std::vector<FixpointResult>& loops);

inline Rational max_abs_diff(const Expectation& a, const Expectation& b) {
    Rational m(0);
    for (std::size_t i = 0; i < a.space()->state_count(); ++i) {
        Rational d = a.at(i) - b.at(i);
        if (d < 0) d = -d;
        if (d > m) m = d;
    }
    return m;
}

inline Expectation apply_update(const ProgramPtr& prog, const Expectation& post) {
    const SpacePtr& sp = post.space();
    const std::size_t var = sp->require_var(prog->var);
    std::vector<Rational> out(sp->state_count());
    for (std::size_t s = 0; s < out.size(); ++s) {
        const long v = eval(*prog->aexpr, *sp, s);
        auto vi = sp->value_index(var, v);
        if (!vi)
            throw SemanticError("assignment out of domain: " + prog->var + " := " +
                                std::to_string(v) + " at state " + sp->state_string(s));
        out[s] = post.at(sp->rebind(s, var, *vi));
    }
    return Expectation(sp, std::move(out));
}

inline Expectation setdc_inf(const ProgramPtr& prog, const Expectation& post) {
    const SpacePtr& sp = post.space();
    const std::size_t var = sp->require_var(prog->var);
    std::vector<Rational> out(sp->state_count());
    for (std::size_t s = 0; s < out.size(); ++s) {
        const std::vector<long> vals = eval(*prog->set, *sp, s);
        if (vals.empty()) throw SemanticError("empty set choice at state " + sp->state_string(s));
        bool have = false;
        for (long v : vals) {
            auto vi = sp->value_index(var, v);
            if (!vi)
                throw SemanticError("set choice out of domain: " + prog->var + " := " +
                                    std::to_string(v) + " at state " + sp->state_string(s));
            const Rational& r = post.at(sp->rebind(s, var, *vi));
            if (!have || r < out[s]) {
                out[s] = r;
                have = true;
            }
        }
    }
    return Expectation(sp, std::move(out));
}

inline Expectation pc_mix(const ProgramPtr& prog, const Expectation& left, const Expectation& right) {
    const SpacePtr& sp = left.space();
    std::vector<Rational> out(sp->state_count());
    for (std::size_t s = 0; s < out.size(); ++s) {
        const Rational p = eval(*prog->prob, *sp, s);
        if (p < 0 || p > 1)
            throw SemanticError("probability " + to_string(p) + " outside [0,1] at state " +
                                sp->state_string(s));
        out[s] = p * left.at(s) + (1 - p) * right.at(s);
    }
    return Expectation(sp, std::move(out));
}

inline Expectation exec_transform(const ProgramPtr& prog, Semantics flag, const Expectation& post) {
    const SpacePtr& sp = post.space();
    const Rational bound = bound_of(post);
    std::vector<Rational> out(sp->state_count());
    for (std::size_t s = 0; s < out.size(); ++s) {
        const auto& entry = prog->rel->entries.at(s);
        if (entry.fail) {
            out[s] = flag == Semantics::Strict ? Rational(0) : bound;
        } else if (entry.succs.empty()) {
            out[s] = bound;
        } else {
            Rational m = post.at(entry.succs[0]);
            for (std::size_t t : entry.succs)
                if (post.at(t) < m) m = post.at(t);
            out[s] = m;
        }
    }
    return Expectation(sp, std::move(out));
}

/// Exact least fixed point of the strict loop functional by policy iteration.
/// The body must be loop-free; its demonic branching is enumerated by the
/// forward resolver. States from which some policy keeps all probability
/// mass away from positive-post exits forever are pinned to zero up front;
/// on the rest every policy's linear system is nonsingular, and switching
/// only on strict improvement terminates at the least fixed point.
inline FixpointResult exact_loop_lfp(const ProgramPtr& loop, const Expectation& post) {
    const SpacePtr& sp = post.space();
    const std::size_t n = sp->state_count();
    const Predicate g = eval_predicate(loop->guard, sp);

    Resolver resolver(sp);
    std::vector<std::vector<DistVec>> actions(n);
    std::vector<std::vector<Rational>> exit_c(n);  // per action: mass into positive post at exits
    for (std::size_t s = 0; s < n; ++s) {
        if (!g.at(s)) continue;
        actions[s] = resolver.raw(loop->p1, s);
        for (const auto& d : actions[s]) {
            Rational c(0);
            for (std::size_t t = 0; t < n; ++t)
                if (!g.at(t) && d[t] != 0) c += d[t] * post.at(t);
            exit_c[s].push_back(c);
        }
    }

    // greatest set of guard states where some action has zero exit value and
    // keeps its guard-state support inside the set
    std::vector<char> inZ(n, 0);
    for (std::size_t s = 0; s < n; ++s) inZ[s] = g.at(s);
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t s = 0; s < n; ++s) {
            if (!inZ[s]) continue;
            bool ok = false;
            for (std::size_t k = 0; k < actions[s].size() && !ok; ++k) {
                if (exit_c[s][k] != 0) continue;
                bool stays = true;
                for (std::size_t t = 0; t < n && stays; ++t)
                    if (g.at(t) && !inZ[t] && actions[s][k][t] != 0) stays = false;
                ok = stays;
            }
            if (!ok) {
                inZ[s] = 0;
                changed = true;
            }
        }
    }

    std::vector<std::size_t> A;  // guard states with provably positive value
    std::vector<std::size_t> idx(n, 0);
    for (std::size_t s = 0; s < n; ++s)
        if (g.at(s) && !inZ[s]) {
            idx[s] = A.size();
            A.push_back(s);
        }

    std::vector<Rational> xa(A.size(), Rational(0));
    std::vector<std::size_t> policy(A.size(), 0);
    std::size_t rounds = 0;
    if (!A.empty()) {
        for (;;) {
            ++rounds;
            std::vector<std::vector<Rational>> m(A.size(),
                                                 std::vector<Rational>(A.size(), Rational(0)));
            std::vector<Rational> rhs(A.size());
            for (std::size_t i = 0; i < A.size(); ++i) {
                const std::size_t s = A[i];
                const auto& d = actions[s][policy[i]];
                m[i][i] = 1;
                for (std::size_t j = 0; j < A.size(); ++j) m[i][j] -= d[A[j]];
                rhs[i] = exit_c[s][policy[i]];
            }
            auto sol = solve_linear(std::move(m), std::move(rhs));
            if (!sol) throw SemanticError("internal: policy system singular");
            xa = std::move(*sol);

            bool improved = false;
            for (std::size_t i = 0; i < A.size(); ++i) {
                const std::size_t s = A[i];
                Rational best = xa[i];
                std::size_t best_k = policy[i];
                for (std::size_t k = 0; k < actions[s].size(); ++k) {
                    Rational v = exit_c[s][k];
                    const auto& d = actions[s][k];
                    for (std::size_t j = 0; j < A.size(); ++j)
                        if (d[A[j]] != 0) v += d[A[j]] * xa[j];
                    if (v < best) {
                        best = v;
                        best_k = k;
                    }
                }
                if (best_k != policy[i]) {
                    policy[i] = best_k;
                    improved = true;
                }
            }
            if (!improved) break;
        }
    }

    std::vector<Rational> out(n, Rational(0));
    for (std::size_t s = 0; s < n; ++s) {
        if (!g.at(s)) out[s] = post.at(s);
        else if (!inZ[s]) out[s] = xa[idx[s]];
    }
    FixpointResult res(Expectation(sp, std::move(out)));
    res.iterations = rounds;
    res.converged = true;
    res.residual = Rational(0);
    res.direction = FixpointResult::Direction::Ascending;
    return res;
}

inline FixpointResult kleene_loop(const ProgramPtr& loop, Semantics flag, const Expectation& post,
                                  const FixpointConfig& cfg, std::vector<FixpointResult>& loops) {
    const SpacePtr& sp = post.space();
    const Predicate g = eval_predicate(loop->guard, sp);
    auto step = [&](const Expectation& x) {
        return select(g, transform_rec(loop->p1, flag, x, cfg, loops), post);
    };
    const bool strict = flag == Semantics::Strict;
    Expectation cur = step(strict ? Expectation::zero(sp)
                                  : Expectation::constant(sp, bound_of(post)));
    FixpointResult res(cur);
    res.direction =
        strict ? FixpointResult::Direction::Ascending : FixpointResult::Direction::Descending;
    while (res.iterations < cfg.max_iter) {
        Expectation nxt = step(cur);
        ++res.iterations;
        res.residual = max_abs_diff(nxt, cur);
        cur = std::move(nxt);
        if (res.residual <= cfg.tolerance) {
            res.converged = true;
            break;
        }
    }
    res.value = std::move(cur);
    return res;
}

inline Expectation transform_rec(const ProgramPtr& prog, Semantics flag, const Expectation& post,
                                 const FixpointConfig& cfg, std::vector<FixpointResult>& loops) {
    using K = Program::Kind;
    const SpacePtr& sp = post.space();
    switch (prog->kind) {
        case K::Abort:
            return flag == Semantics::Strict ? Expectation::zero(sp)
                                             : Expectation::constant(sp, bound_of(post));
        case K::Skip: return post;
        case K::Apply: return apply_update(prog, post);
        case K::Seq:
            return transform_rec(prog->p1, flag, transform_rec(prog->p2, flag, post, cfg, loops),
                                 cfg, loops);
        case K::DC:
            return min_pointwise(transform_rec(prog->p1, flag, post, cfg, loops),
                                 transform_rec(prog->p2, flag, post, cfg, loops));
        case K::PC:
            return pc_mix(prog, transform_rec(prog->p1, flag, post, cfg, loops),
                          transform_rec(prog->p2, flag, post, cfg, loops));
        case K::SetDC: return setdc_inf(prog, post);
        case K::If:
            return select(eval_predicate(prog->guard, sp),
                          transform_rec(prog->p1, flag, post, cfg, loops),
                          transform_rec(prog->p2, flag, post, cfg, loops));
        case K::Exec: return exec_transform(prog, flag, post);
        case K::Loop: {
            if (cfg.exact) {
                if (flag != Semantics::Strict)
                    throw UnsupportedError("exact fixed points support strict semantics only");
                if (contains_loop(prog->p1))
                    throw UnsupportedError("exact fixed points require loop-free loop bodies");
                FixpointResult r = exact_loop_lfp(prog, post);
                Expectation v = r.value;
                loops.push_back(std::move(r));
                return v;
            }
            FixpointResult r = kleene_loop(prog, flag, post, cfg, loops);
            Expectation v = r.value;
            loops.push_back(std::move(r));
            return v;
        }
    }
    throw SemanticError("corrupt program");
}

}  // namespace detail

inline TransformResult transform(const ProgramPtr& prog, Semantics flag, const Expectation& post,
                                 const FixpointConfig& cfg = {}) {
    std::vector<FixpointResult> loops;
    Expectation v = detail::transform_rec(prog, flag, post, cfg, loops);
    return TransformResult{std::move(v), std::move(loops)};
}

inline Expectation wp(const ProgramPtr& prog, const Expectation& post,
                      const FixpointConfig& cfg = {}) {
    return transform(prog, Semantics::Strict, post, cfg).value;
}

inline Expectation wlp(const ProgramPtr& prog, const Expectation& post,
                       const FixpointConfig& cfg = {}) {
    return transform(prog, Semantics::Liberal, post, cfg).value;
}

}  // namespace pgcl
