#pragma once

#include <algorithm>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pgcl/errors.hpp"

namespace pgcl {

/// A finite variable environment. Each variable ranges over a nonempty finite
/// set of integers; states are enumerated lexicographically by declaration
/// order, then by domain order.
class StateSpace {
public:
    struct Var {
        std::string name;
        std::vector<long> domain;  // declaration order, duplicates removed
    };

    StateSpace() { recompute(); }

    explicit StateSpace(std::vector<Var> vars) : vars_(std::move(vars)) {
        for (auto& v : vars_) {
            if (v.name.empty()) throw SemanticError("variable with empty name");
            std::vector<long> dedup;
            for (long x : v.domain)
                if (std::find(dedup.begin(), dedup.end(), x) == dedup.end()) dedup.push_back(x);
            v.domain = std::move(dedup);
            if (v.domain.empty()) throw SemanticError("variable '" + v.name + "' has an empty domain");
        }
        for (std::size_t i = 0; i < vars_.size(); ++i)
            for (std::size_t j = i + 1; j < vars_.size(); ++j)
                if (vars_[i].name == vars_[j].name)
                    throw SemanticError("duplicate variable '" + vars_[i].name + "'");
        recompute();
    }

    const std::vector<Var>& vars() const { return vars_; }
    std::size_t var_count() const { return vars_.size(); }
    std::size_t state_count() const { return count_; }

    std::optional<std::size_t> index_of(const std::string& name) const {
        for (std::size_t i = 0; i < vars_.size(); ++i)
            if (vars_[i].name == name) return i;
        return std::nullopt;
    }

    std::size_t require_var(const std::string& name) const {
        if (auto i = index_of(name)) return *i;
        throw SemanticError("undeclared variable '" + name + "'");
    }

    /// Position of `value` in the domain of variable `var`, if present.
    std::optional<std::size_t> value_index(std::size_t var, long value) const {
        const auto& d = vars_[var].domain;
        auto it = std::find(d.begin(), d.end(), value);
        if (it == d.end()) return std::nullopt;
        return static_cast<std::size_t>(it - d.begin());
    }

    /// Value of variable `var` in the state with the given rank.
    long value_at(std::size_t rank, std::size_t var) const {
        return vars_[var].domain[(rank / strides_[var]) % vars_[var].domain.size()];
    }

    /// Rank of the state obtained by rebinding `var` to the domain slot
    /// `value_idx`, leaving all other variables unchanged.
    std::size_t rebind(std::size_t rank, std::size_t var, std::size_t value_idx) const {
        const std::size_t old_idx = (rank / strides_[var]) % vars_[var].domain.size();
        return rank + (value_idx - old_idx) * strides_[var];
    }

    std::vector<long> values_of(std::size_t rank) const {
        std::vector<long> out(vars_.size());
        for (std::size_t v = 0; v < vars_.size(); ++v) out[v] = value_at(rank, v);
        return out;
    }

    std::size_t rank_of(const std::vector<long>& values) const {
        if (values.size() != vars_.size()) throw SemanticError("state binds the wrong number of variables");
        std::size_t r = 0;
        for (std::size_t v = 0; v < vars_.size(); ++v) {
            auto idx = value_index(v, values[v]);
            if (!idx)
                throw SemanticError("value " + std::to_string(values[v]) + " not in domain of '" +
                                    vars_[v].name + "'");
            r += *idx * strides_[v];
        }
        return r;
    }

    std::string state_string(std::size_t rank) const {
        if (vars_.empty()) return "{}";
        std::string out;
        for (std::size_t v = 0; v < vars_.size(); ++v) {
            if (v) out += " ";
            out += vars_[v].name + "=" + std::to_string(value_at(rank, v));
        }
        return out;
    }

    friend bool operator==(const StateSpace& a, const StateSpace& b) {
        if (a.vars_.size() != b.vars_.size()) return false;
        for (std::size_t i = 0; i < a.vars_.size(); ++i)
            if (a.vars_[i].name != b.vars_[i].name || a.vars_[i].domain != b.vars_[i].domain) return false;
        return true;
    }
    friend bool operator!=(const StateSpace& a, const StateSpace& b) { return !(a == b); }

private:
    void recompute() {
        strides_.assign(vars_.size(), 1);
        count_ = 1;
        for (std::size_t v = vars_.size(); v-- > 0;) {
            strides_[v] = count_;
            count_ *= vars_[v].domain.size();
        }
    }

    std::vector<Var> vars_;
    std::vector<std::size_t> strides_;  // first declared variable is most significant
    std::size_t count_ = 1;
};

using SpacePtr = std::shared_ptr<const StateSpace>;

/// A concrete assignment of every declared variable to a value in its domain.
class State {
public:
    State(SpacePtr space, std::size_t rank) : space_(std::move(space)), rank_(rank) {
        if (rank_ >= space_->state_count()) throw SemanticError("state rank out of range");
    }
    State(SpacePtr space, const std::vector<long>& values)
        : space_(space), rank_(space->rank_of(values)) {}

    const SpacePtr& space() const { return space_; }
    std::size_t rank() const { return rank_; }
    long value(const std::string& name) const { return space_->value_at(rank_, space_->require_var(name)); }
    std::vector<long> values() const { return space_->values_of(rank_); }
    std::string to_string() const { return space_->state_string(rank_); }

    State with(const std::string& name, long value) const {
        const std::size_t var = space_->require_var(name);
        auto idx = space_->value_index(var, value);
        if (!idx)
            throw SemanticError("value " + std::to_string(value) + " not in domain of '" + name + "'");
        return State(space_, space_->rebind(rank_, var, *idx));
    }

    friend bool operator==(const State& a, const State& b) {
        return *a.space_ == *b.space_ && a.rank_ == b.rank_;
    }

private:
    SpacePtr space_;
    std::size_t rank_;
};

/// Every state of the space exactly once, in enumeration order.
inline std::vector<State> enumerate(const SpacePtr& space) {
    std::vector<State> out;
    out.reserve(space->state_count());
    for (std::size_t r = 0; r < space->state_count(); ++r) out.emplace_back(space, r);
    return out;
}

}  // namespace pgcl
