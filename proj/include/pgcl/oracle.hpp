#pragma once

#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "pgcl/ast.hpp"
#include "pgcl/expectation.hpp"

// Forward operational semantics: a loop-free program maps each initial state
// to a set of sub-distributions over final states, one per demonic policy.
// Missing mass is the probability of abort. Serves as an independent oracle
// for the backward transformer and as the basis of refinement checking.

namespace pgcl {

struct SubDistribution {
    SpacePtr space;
    std::vector<Rational> mass;  // indexed by state rank, nonnegative

    Rational total() const {
        Rational t(0);
        for (const auto& m : mass) t += m;
        return t;
    }
    /// Expected value of f under this (sub-)distribution.
    Rational expect(const Expectation& f) const {
        Rational t(0);
        for (std::size_t i = 0; i < mass.size(); ++i)
            if (mass[i] != 0) t += mass[i] * f.at(i);
        return t;
    }
};

struct ResolutionSet {
    std::vector<SubDistribution> dists;
};

namespace detail {

using DistVec = std::vector<Rational>;

inline bool dominates_eq(const DistVec& lo, const DistVec& hi) {
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (lo[i] > hi[i]) return false;
    return true;
}

/// Keeps only minimal elements under pointwise order, deduplicated. Demonic
/// minima, refinement coverage and convex domination are all preserved by
/// this reduction.
inline void prune_minimal(std::vector<DistVec>& ds) {
    std::vector<DistVec> kept;
    for (auto& d : ds) {
        bool dominated = false;
        for (const auto& k : kept)
            if (dominates_eq(k, d)) {
                dominated = true;
                break;
            }
        if (dominated) continue;
        std::erase_if(kept, [&](const DistVec& k) { return dominates_eq(d, k); });
        kept.push_back(std::move(d));
    }
    ds = std::move(kept);
}

class ResolutionCtx {
  public:
    explicit ResolutionCtx(SpacePtr space) : space_(std::move(space)) {}

    const std::vector<DistVec>& resolve(const ProgramPtr& prog, std::size_t rank) {
        const auto key = std::make_pair(prog.get(), rank);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        std::vector<DistVec> out = compute(prog, rank);
        prune_minimal(out);
        return memo_.emplace(key, std::move(out)).first->second;
    }

    const SpacePtr& space() const { return space_; }

  private:
    SpacePtr space_;
    std::map<std::pair<const Program*, std::size_t>, std::vector<DistVec>> memo_;

    DistVec dirac(std::size_t rank) const {
        DistVec d(space_->state_count(), Rational(0));
        d[rank] = 1;
        return d;
    }

    std::vector<DistVec> compute(const ProgramPtr& prog, std::size_t rank) {
        using K = Program::Kind;
        const StateSpace& sp = *space_;
        switch (prog->kind) {
            case K::Skip: return {dirac(rank)};
            case K::Abort: return {DistVec(sp.state_count(), Rational(0))};
            case K::Apply: {
                const std::size_t var = sp.require_var(prog->var);
                const long v = eval(*prog->aexpr, sp, rank);
                auto vi = sp.value_index(var, v);
                if (!vi)
                    throw SemanticError("assignment out of domain: " + prog->var + " := " +
                                        std::to_string(v) + " at state " + sp.state_string(rank));
                return {dirac(sp.rebind(rank, var, *vi))};
            }
            case K::SetDC: {
                const std::size_t var = sp.require_var(prog->var);
                const std::vector<long> vals = eval(*prog->set, sp, rank);
                if (vals.empty())
                    throw SemanticError("empty set choice at state " + sp.state_string(rank));
                std::vector<DistVec> out;
                for (long v : vals) {
                    auto vi = sp.value_index(var, v);
                    if (!vi)
                        throw SemanticError("set choice out of domain: " + prog->var + " := " +
                                            std::to_string(v) + " at state " + sp.state_string(rank));
                    out.push_back(dirac(sp.rebind(rank, var, *vi)));
                }
                return out;
            }
            case K::DC: {
                std::vector<DistVec> out = resolve(prog->p1, rank);
                const auto& r = resolve(prog->p2, rank);
                out.insert(out.end(), r.begin(), r.end());
                return out;
            }
            case K::PC: {
                const Rational p = eval(*prog->prob, sp, rank);
                if (p < 0 || p > 1)
                    throw SemanticError("probability " + to_string(p) + " outside [0,1] at state " +
                                        sp.state_string(rank));
                const auto& la = resolve(prog->p1, rank);
                const auto& rb = resolve(prog->p2, rank);
                std::vector<DistVec> out;
                for (const auto& a : la)
                    for (const auto& b : rb) {
                        DistVec d(sp.state_count());
                        for (std::size_t i = 0; i < d.size(); ++i)
                            d[i] = p * a[i] + (1 - p) * b[i];
                        out.push_back(std::move(d));
                    }
                return out;
            }
            case K::If: return resolve(eval(*prog->guard, sp, rank) ? prog->p1 : prog->p2, rank);
            case K::Seq: {
                const auto& first = resolve(prog->p1, rank);
                std::vector<DistVec> out;
                for (const auto& d : first) {
                    // extend over intermediate states one at a time; the
                    // demon's second-stage choice may depend on the state
                    std::vector<DistVec> partial = {DistVec(sp.state_count(), Rational(0))};
                    for (std::size_t t = 0; t < d.size(); ++t) {
                        if (d[t] == 0) continue;
                        const auto& second = resolve(prog->p2, t);
                        std::vector<DistVec> next;
                        for (const auto& base : partial)
                            for (const auto& q : second) {
                                DistVec e = base;
                                for (std::size_t i = 0; i < e.size(); ++i)
                                    if (q[i] != 0) e[i] += d[t] * q[i];
                                next.push_back(std::move(e));
                            }
                        prune_minimal(next);
                        partial = std::move(next);
                    }
                    out.insert(out.end(), partial.begin(), partial.end());
                }
                return out;
            }
            case K::Exec: {
                const auto& entry = prog->rel->entries.at(rank);
                if (entry.fail) return {DistVec(sp.state_count(), Rational(0))};
                if (entry.succs.empty())
                    throw UnsupportedError(
                        "stuck Exec state has no distributional semantics (relation '" +
                        prog->rel->name + "' at " + sp.state_string(rank) + ")");
                std::vector<DistVec> out;
                for (std::size_t t : entry.succs) out.push_back(dirac(t));
                return out;
            }
            case K::Loop: throw UnsupportedError("forward resolutions are defined for loop-free programs only");
        }
        throw SemanticError("corrupt program");
    }
};

}  // namespace detail

/// Reusable front end over the memoizing resolver; share one instance when
/// querying many states of the same program.
class Resolver {
  public:
    explicit Resolver(SpacePtr space) : ctx_(std::move(space)) {}

    const std::vector<detail::DistVec>& raw(const ProgramPtr& prog, std::size_t rank) {
        return ctx_.resolve(prog, rank);
    }

    ResolutionSet at(const ProgramPtr& prog, std::size_t rank) {
        ResolutionSet out;
        for (const auto& d : ctx_.resolve(prog, rank))
            out.dists.push_back(SubDistribution{ctx_.space(), d});
        return out;
    }

    Rational wp(const ProgramPtr& prog, const Expectation& post, std::size_t rank) {
        const auto& ds = ctx_.resolve(prog, rank);
        if (ds.empty()) throw SemanticError("empty resolution set");
        Rational best;
        bool have = false;
        for (const auto& d : ds) {
            Rational v(0);
            for (std::size_t i = 0; i < d.size(); ++i)
                if (d[i] != 0) v += d[i] * post.at(i);
            if (!have || v < best) {
                best = v;
                have = true;
            }
        }
        return best;
    }

  private:
    detail::ResolutionCtx ctx_;
};

/// All demonic resolutions of a loop-free program from one initial state,
/// pruned to minimal elements.
inline ResolutionSet resolutions(const ProgramPtr& prog, const State& s) {
    return Resolver(s.space()).at(prog, s.rank());
}

/// Demonic expected value of post from state s, computed forward:
/// min over resolutions of the expected value.
inline Rational oracle_wp(const ProgramPtr& prog, const Expectation& post, const State& s) {
    if (*post.space() != *s.space())
        throw SemanticError("expectation over a different state space");
    return Resolver(s.space()).wp(prog, post, s.rank());
}

}  // namespace pgcl
