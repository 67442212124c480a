#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "pgcl/rational.hpp"
#include "pgcl/state_space.hpp"

namespace pgcl {

/// Boolean predicate as a total map over the state space.
class Predicate {
public:
    Predicate(SpacePtr space, std::vector<char> values) : space_(std::move(space)), v_(std::move(values)) {
        if (v_.size() != space_->state_count()) throw SemanticError("predicate is not total over the space");
    }
    static Predicate constant(SpacePtr space, bool b) {
        std::vector<char> v(space->state_count(), b ? 1 : 0);
        return Predicate(std::move(space), std::move(v));
    }
    template <class Fn>  // Fn: (std::size_t rank) -> bool
    static Predicate from_fn(const SpacePtr& space, Fn&& fn) {
        std::vector<char> v(space->state_count());
        for (std::size_t r = 0; r < v.size(); ++r) v[r] = fn(r) ? 1 : 0;
        return Predicate(space, std::move(v));
    }

    const SpacePtr& space() const { return space_; }
    bool at(std::size_t rank) const { return v_[rank] != 0; }
    std::size_t size() const { return v_.size(); }
    Predicate negate() const {
        std::vector<char> v(v_.size());
        for (std::size_t r = 0; r < v_.size(); ++r) v[r] = v_[r] ? 0 : 1;
        return Predicate(space_, std::move(v));
    }

private:
    SpacePtr space_;
    std::vector<char> v_;
};

/// Nonnegative rational-valued function on states, stored densely by state
/// rank. On a finite space every expectation is bounded; bound_of is the
/// maximum value.
class Expectation {
public:
    Expectation(SpacePtr space, std::vector<Rational> values)
        : space_(std::move(space)), v_(std::move(values)) {
        if (v_.size() != space_->state_count())
            throw SemanticError("expectation is not total over the space");
        for (const auto& x : v_)
            if (sgn(x) < 0) throw SemanticError("expectation has a negative value");
    }

    static Expectation zero(SpacePtr space) { return constant(std::move(space), Rational(0)); }
    static Expectation constant(SpacePtr space, const Rational& c) {
        std::vector<Rational> v(space->state_count(), c);
        return Expectation(std::move(space), std::move(v));
    }
    /// Indicator of a single state.
    static Expectation point(SpacePtr space, std::size_t rank) {
        std::vector<Rational> v(space->state_count(), Rational(0));
        v.at(rank) = 1;
        return Expectation(std::move(space), std::move(v));
    }

    const SpacePtr& space() const { return space_; }
    std::size_t size() const { return v_.size(); }
    const Rational& at(std::size_t rank) const { return v_[rank]; }
    const std::vector<Rational>& values() const { return v_; }

    friend bool operator==(const Expectation& a, const Expectation& b) {
        return *a.space_ == *b.space_ && a.v_ == b.v_;
    }
    friend bool operator!=(const Expectation& a, const Expectation& b) { return !(a == b); }

private:
    SpacePtr space_;
    std::vector<Rational> v_;
};

inline void require_same_space(const Expectation& p, const Expectation& q) {
    if (*p.space() != *q.space()) throw SemanticError("expectations over mismatched state spaces");
}

/// «P»: 1 where the predicate holds, 0 elsewhere.
inline Expectation embed(const Predicate& p) {
    std::vector<Rational> v(p.size());
    for (std::size_t r = 0; r < p.size(); ++r) v[r] = p.at(r) ? 1 : 0;
    return Expectation(p.space(), std::move(v));
}

/// P ⊩ Q: pointwise comparison, exact.
inline bool entails(const Expectation& p, const Expectation& q) {
    require_same_space(p, q);
    for (std::size_t r = 0; r < p.size(); ++r)
        if (p.at(r) > q.at(r)) return false;
    return true;
}

/// First state violating P ⊩ Q, if any.
inline std::optional<std::size_t> entails_witness(const Expectation& p, const Expectation& q) {
    require_same_space(p, q);
    for (std::size_t r = 0; r < p.size(); ++r)
        if (p.at(r) > q.at(r)) return r;
    return std::nullopt;
}

/// Maximum value over the (finite, nonempty) space.
inline Rational bound_of(const Expectation& p) {
    Rational b = p.at(0);
    for (std::size_t r = 1; r < p.size(); ++r)
        if (p.at(r) > b) b = p.at(r);
    return b;
}

/// Probabilistic conjunction: max(P + Q - 1, 0) pointwise.
inline Expectation pconj(const Expectation& p, const Expectation& q) {
    require_same_space(p, q);
    std::vector<Rational> v(p.size());
    for (std::size_t r = 0; r < p.size(); ++r) {
        Rational x = p.at(r) + q.at(r) - 1;
        v[r] = sgn(x) > 0 ? x : Rational(0);
    }
    return Expectation(p.space(), std::move(v));
}

/// c × P for c > 0.
inline Expectation scale(const Rational& c, const Expectation& p) {
    if (sgn(c) <= 0) throw SemanticError("scale factor must be positive");
    std::vector<Rational> v(p.size());
    for (std::size_t r = 0; r < p.size(); ++r) v[r] = c * p.at(r);
    return Expectation(p.space(), std::move(v));
}

inline Expectation min_pointwise(const Expectation& p, const Expectation& q) {
    require_same_space(p, q);
    std::vector<Rational> v(p.size());
    for (std::size_t r = 0; r < p.size(); ++r) v[r] = p.at(r) < q.at(r) ? p.at(r) : q.at(r);
    return Expectation(p.space(), std::move(v));
}

/// «G»·P + «¬G»·Q, i.e. P where the predicate holds and Q elsewhere.
inline Expectation select(const Predicate& g, const Expectation& p, const Expectation& q) {
    require_same_space(p, q);
    std::vector<Rational> v(p.size());
    for (std::size_t r = 0; r < p.size(); ++r) v[r] = g.at(r) ? p.at(r) : q.at(r);
    return Expectation(p.space(), std::move(v));
}

/// «G»·P (zero where the guard fails).
inline Expectation mask(const Predicate& g, const Expectation& p) {
    std::vector<Rational> v(p.size());
    for (std::size_t r = 0; r < p.size(); ++r) v[r] = g.at(r) ? p.at(r) : Rational(0);
    return Expectation(p.space(), std::move(v));
}

}  // namespace pgcl
