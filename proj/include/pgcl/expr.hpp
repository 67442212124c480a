#pragma once

#include <algorithm>
#include <memory>
#include <string>
#include <vector>

#include "pgcl/expectation.hpp"
#include "pgcl/rational.hpp"
#include "pgcl/state_space.hpp"

// Expression trees for the five syntactic categories: integer arithmetic,
// boolean guards, finite sets, state-dependent probabilities, and expectation
// expressions. All evaluation is against a state rank of a fixed space.

namespace pgcl {

// ---------------------------------------------------------------- arithmetic

struct AExpr;
using AExprPtr = std::shared_ptr<const AExpr>;

struct AExpr {
    enum class Kind { Lit, Var, Add, Sub, Mul, Neg };
    Kind kind;
    long lit = 0;
    std::string var;
    AExprPtr lhs, rhs;
};

inline AExprPtr aexpr_lit(long v) { return std::make_shared<AExpr>(AExpr{AExpr::Kind::Lit, v, {}, nullptr, nullptr}); }
inline AExprPtr aexpr_var(std::string name) {
    return std::make_shared<AExpr>(AExpr{AExpr::Kind::Var, 0, std::move(name), nullptr, nullptr});
}
inline AExprPtr aexpr_bin(AExpr::Kind k, AExprPtr l, AExprPtr r) {
    return std::make_shared<AExpr>(AExpr{k, 0, {}, std::move(l), std::move(r)});
}
inline AExprPtr aexpr_neg(AExprPtr e) {
    return std::make_shared<AExpr>(AExpr{AExpr::Kind::Neg, 0, {}, std::move(e), nullptr});
}

inline long eval(const AExpr& e, const StateSpace& space, std::size_t rank) {
    switch (e.kind) {
        case AExpr::Kind::Lit: return e.lit;
        case AExpr::Kind::Var: return space.value_at(rank, space.require_var(e.var));
        case AExpr::Kind::Add: return eval(*e.lhs, space, rank) + eval(*e.rhs, space, rank);
        case AExpr::Kind::Sub: return eval(*e.lhs, space, rank) - eval(*e.rhs, space, rank);
        case AExpr::Kind::Mul: return eval(*e.lhs, space, rank) * eval(*e.rhs, space, rank);
        case AExpr::Kind::Neg: return -eval(*e.lhs, space, rank);
    }
    throw SemanticError("corrupt arithmetic expression");
}

inline bool equal(const AExprPtr& a, const AExprPtr& b) {
    if (a == b) return true;
    if (!a || !b || a->kind != b->kind) return false;
    switch (a->kind) {
        case AExpr::Kind::Lit: return a->lit == b->lit;
        case AExpr::Kind::Var: return a->var == b->var;
        case AExpr::Kind::Neg: return equal(a->lhs, b->lhs);
        default: return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
    }
}

// precedence: 0 additive, 1 multiplicative, 2 atom
inline std::string print(const AExprPtr& e, int level = 0) {
    auto paren = [&](const std::string& s, int mine) { return mine < level ? "(" + s + ")" : s; };
    switch (e->kind) {
        case AExpr::Kind::Lit: return std::to_string(e->lit);
        case AExpr::Kind::Var: return e->var;
        case AExpr::Kind::Add: return paren(print(e->lhs, 0) + " + " + print(e->rhs, 1), 0);
        case AExpr::Kind::Sub: {
            // right operand parenthesized one level tighter; "- -x" additionally
            // guarded so the printer never emits the comment token "--"
            std::string r = print(e->rhs, 1);
            if (!r.empty() && r[0] == '-') r = "(" + r + ")";
            return paren(print(e->lhs, 0) + " - " + r, 0);
        }
        case AExpr::Kind::Mul: return paren(print(e->lhs, 1) + " * " + print(e->rhs, 2), 1);
        case AExpr::Kind::Neg: {
            std::string s = print(e->lhs, 2);
            if (!s.empty() && s[0] == '-') s = "(" + s + ")";
            return paren("-" + s, 1);
        }
    }
    throw SemanticError("corrupt arithmetic expression");
}

// ------------------------------------------------------------------- boolean

struct BExpr;
using BExprPtr = std::shared_ptr<const BExpr>;

struct BExpr {
    enum class Kind { True, False, Cmp, Not, And, Or };
    enum class Cmp { Eq, Ne, Lt, Le, Gt, Ge };
    Kind kind;
    Cmp cmp = Cmp::Eq;
    AExprPtr a1, a2;
    BExprPtr b1, b2;
};

inline BExprPtr bexpr_const(bool v) {
    return std::make_shared<BExpr>(
        BExpr{v ? BExpr::Kind::True : BExpr::Kind::False, BExpr::Cmp::Eq, nullptr, nullptr, nullptr, nullptr});
}
inline BExprPtr bexpr_cmp(BExpr::Cmp c, AExprPtr l, AExprPtr r) {
    return std::make_shared<BExpr>(BExpr{BExpr::Kind::Cmp, c, std::move(l), std::move(r), nullptr, nullptr});
}
inline BExprPtr bexpr_not(BExprPtr e) {
    return std::make_shared<BExpr>(BExpr{BExpr::Kind::Not, BExpr::Cmp::Eq, nullptr, nullptr, std::move(e), nullptr});
}
inline BExprPtr bexpr_bin(BExpr::Kind k, BExprPtr l, BExprPtr r) {
    return std::make_shared<BExpr>(BExpr{k, BExpr::Cmp::Eq, nullptr, nullptr, std::move(l), std::move(r)});
}

inline bool eval(const BExpr& e, const StateSpace& space, std::size_t rank) {
    switch (e.kind) {
        case BExpr::Kind::True: return true;
        case BExpr::Kind::False: return false;
        case BExpr::Kind::Not: return !eval(*e.b1, space, rank);
        case BExpr::Kind::And: return eval(*e.b1, space, rank) && eval(*e.b2, space, rank);
        case BExpr::Kind::Or: return eval(*e.b1, space, rank) || eval(*e.b2, space, rank);
        case BExpr::Kind::Cmp: {
            const long l = eval(*e.a1, space, rank), r = eval(*e.a2, space, rank);
            switch (e.cmp) {
                case BExpr::Cmp::Eq: return l == r;
                case BExpr::Cmp::Ne: return l != r;
                case BExpr::Cmp::Lt: return l < r;
                case BExpr::Cmp::Le: return l <= r;
                case BExpr::Cmp::Gt: return l > r;
                case BExpr::Cmp::Ge: return l >= r;
            }
        }
    }
    throw SemanticError("corrupt boolean expression");
}

inline Predicate eval_predicate(const BExprPtr& e, const SpacePtr& space) {
    return Predicate::from_fn(space, [&](std::size_t r) { return eval(*e, *space, r); });
}

inline bool equal(const BExprPtr& a, const BExprPtr& b) {
    if (a == b) return true;
    if (!a || !b || a->kind != b->kind) return false;
    switch (a->kind) {
        case BExpr::Kind::True:
        case BExpr::Kind::False: return true;
        case BExpr::Kind::Cmp: return a->cmp == b->cmp && equal(a->a1, b->a1) && equal(a->a2, b->a2);
        case BExpr::Kind::Not: return equal(a->b1, b->b1);
        default: return equal(a->b1, b->b1) && equal(a->b2, b->b2);
    }
}

inline std::string cmp_string(BExpr::Cmp c) {
    switch (c) {
        case BExpr::Cmp::Eq: return "=";
        case BExpr::Cmp::Ne: return "!=";
        case BExpr::Cmp::Lt: return "<";
        case BExpr::Cmp::Le: return "<=";
        case BExpr::Cmp::Gt: return ">";
        case BExpr::Cmp::Ge: return ">=";
    }
    return "?";
}

// precedence: 0 or, 1 and, 2 atom
inline std::string print(const BExprPtr& e, int level = 0) {
    auto paren = [&](const std::string& s, int mine) { return mine < level ? "(" + s + ")" : s; };
    switch (e->kind) {
        case BExpr::Kind::True: return "true";
        case BExpr::Kind::False: return "false";
        case BExpr::Kind::Cmp:
            return print(e->a1, 0) + " " + cmp_string(e->cmp) + " " + print(e->a2, 0);
        case BExpr::Kind::Not: {
            // comparisons are not atoms, so "!" needs them parenthesized
            std::string inner = e->b1->kind == BExpr::Kind::Cmp || e->b1->kind == BExpr::Kind::And ||
                                        e->b1->kind == BExpr::Kind::Or
                                    ? "(" + print(e->b1, 0) + ")"
                                    : print(e->b1, 2);
            return "!" + inner;
        }
        case BExpr::Kind::And: return paren(print(e->b1, 1) + " & " + print(e->b2, 2), 1);
        case BExpr::Kind::Or: return paren(print(e->b1, 0) + " | " + print(e->b2, 1), 0);
    }
    throw SemanticError("corrupt boolean expression");
}

// ---------------------------------------------------------------------- sets

struct SetExpr;
using SetExprPtr = std::shared_ptr<const SetExpr>;

struct SetExpr {
    enum class Kind { Lit, Diff };
    Kind kind;
    std::vector<AExprPtr> elems;
    SetExprPtr lhs, rhs;
};

inline SetExprPtr setexpr_lit(std::vector<AExprPtr> elems) {
    return std::make_shared<SetExpr>(SetExpr{SetExpr::Kind::Lit, std::move(elems), nullptr, nullptr});
}
inline SetExprPtr setexpr_diff(SetExprPtr l, SetExprPtr r) {
    return std::make_shared<SetExpr>(SetExpr{SetExpr::Kind::Diff, {}, std::move(l), std::move(r)});
}

/// Evaluated set, duplicates removed, in first-appearance order.
inline std::vector<long> eval(const SetExpr& e, const StateSpace& space, std::size_t rank) {
    switch (e.kind) {
        case SetExpr::Kind::Lit: {
            std::vector<long> out;
            for (const auto& el : e.elems) {
                const long v = eval(*el, space, rank);
                if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
            }
            return out;
        }
        case SetExpr::Kind::Diff: {
            std::vector<long> l = eval(*e.lhs, space, rank), r = eval(*e.rhs, space, rank), out;
            for (long v : l)
                if (std::find(r.begin(), r.end(), v) == r.end()) out.push_back(v);
            return out;
        }
    }
    throw SemanticError("corrupt set expression");
}

inline bool equal(const SetExprPtr& a, const SetExprPtr& b) {
    if (a == b) return true;
    if (!a || !b || a->kind != b->kind) return false;
    if (a->kind == SetExpr::Kind::Diff) return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
    if (a->elems.size() != b->elems.size()) return false;
    for (std::size_t i = 0; i < a->elems.size(); ++i)
        if (!equal(a->elems[i], b->elems[i])) return false;
    return true;
}

inline std::string print(const SetExprPtr& e, int level = 0) {
    if (e->kind == SetExpr::Kind::Lit) {
        std::string out = "{";
        for (std::size_t i = 0; i < e->elems.size(); ++i) {
            if (i) out += ", ";
            out += print(e->elems[i], 0);
        }
        return out + "}";
    }
    std::string s = print(e->lhs, 0) + " \\ " + print(e->rhs, 1);
    return level > 0 ? "(" + s + ")" : s;
}

// ------------------------------------------------------------- probabilities

struct PExpr;
using PExprPtr = std::shared_ptr<const PExpr>;

/// State-dependent probability expression. Ranges over rationals; the [0,1]
/// requirement is enforced where the expression is used, per state.
struct PExpr {
    enum class Kind { Lit, Var, Add, Sub, Mul };
    Kind kind;
    Rational lit;
    std::string var;
    PExprPtr lhs, rhs;
};

inline PExprPtr pexpr_lit(Rational v) {
    return std::make_shared<PExpr>(PExpr{PExpr::Kind::Lit, std::move(v), {}, nullptr, nullptr});
}
inline PExprPtr pexpr_var(std::string name) {
    return std::make_shared<PExpr>(PExpr{PExpr::Kind::Var, Rational(0), std::move(name), nullptr, nullptr});
}
inline PExprPtr pexpr_bin(PExpr::Kind k, PExprPtr l, PExprPtr r) {
    return std::make_shared<PExpr>(PExpr{k, Rational(0), {}, std::move(l), std::move(r)});
}

inline Rational eval(const PExpr& e, const StateSpace& space, std::size_t rank) {
    switch (e.kind) {
        case PExpr::Kind::Lit: return e.lit;
        case PExpr::Kind::Var: return Rational(space.value_at(rank, space.require_var(e.var)));
        case PExpr::Kind::Add: return eval(*e.lhs, space, rank) + eval(*e.rhs, space, rank);
        case PExpr::Kind::Sub: return eval(*e.lhs, space, rank) - eval(*e.rhs, space, rank);
        case PExpr::Kind::Mul: return eval(*e.lhs, space, rank) * eval(*e.rhs, space, rank);
    }
    throw SemanticError("corrupt probability expression");
}

inline bool equal(const PExprPtr& a, const PExprPtr& b) {
    if (a == b) return true;
    if (!a || !b || a->kind != b->kind) return false;
    switch (a->kind) {
        case PExpr::Kind::Lit: return a->lit == b->lit;
        case PExpr::Kind::Var: return a->var == b->var;
        default: return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
    }
}

inline std::string print(const PExprPtr& e, int level = 0) {
    auto paren = [&](const std::string& s, int mine) { return mine < level ? "(" + s + ")" : s; };
    switch (e->kind) {
        case PExpr::Kind::Lit: return to_string(e->lit);
        case PExpr::Kind::Var: return e->var;
        case PExpr::Kind::Add: return paren(print(e->lhs, 0) + " + " + print(e->rhs, 1), 0);
        case PExpr::Kind::Sub: {
            std::string r = print(e->rhs, 1);
            if (!r.empty() && r[0] == '-') r = "(" + r + ")";
            return paren(print(e->lhs, 0) + " - " + r, 0);
        }
        case PExpr::Kind::Mul: return paren(print(e->lhs, 1) + " * " + print(e->rhs, 2), 1);
    }
    throw SemanticError("corrupt probability expression");
}

// -------------------------------------------------------------- expectations

struct EExpr;
using EExprPtr = std::shared_ptr<const EExpr>;

/// Expectation expression: rational constants, embedded predicates "[G]",
/// sums and products.
struct EExpr {
    enum class Kind { Lit, Embed, Add, Mul };
    Kind kind;
    Rational lit;
    BExprPtr pred;
    EExprPtr lhs, rhs;
};

inline EExprPtr eexpr_lit(Rational v) {
    return std::make_shared<EExpr>(EExpr{EExpr::Kind::Lit, std::move(v), nullptr, nullptr, nullptr});
}
inline EExprPtr eexpr_embed(BExprPtr p) {
    return std::make_shared<EExpr>(EExpr{EExpr::Kind::Embed, Rational(0), std::move(p), nullptr, nullptr});
}
inline EExprPtr eexpr_bin(EExpr::Kind k, EExprPtr l, EExprPtr r) {
    return std::make_shared<EExpr>(EExpr{k, Rational(0), nullptr, std::move(l), std::move(r)});
}

inline Rational eval_at(const EExpr& e, const StateSpace& space, std::size_t rank) {
    switch (e.kind) {
        case EExpr::Kind::Lit: return e.lit;
        case EExpr::Kind::Embed: return eval(*e.pred, space, rank) ? Rational(1) : Rational(0);
        case EExpr::Kind::Add: return eval_at(*e.lhs, space, rank) + eval_at(*e.rhs, space, rank);
        case EExpr::Kind::Mul: return eval_at(*e.lhs, space, rank) * eval_at(*e.rhs, space, rank);
    }
    throw SemanticError("corrupt expectation expression");
}

/// Evaluates to a dense expectation; fails if any value is negative (only
/// possible through a negative literal).
inline Expectation eval(const EExprPtr& e, const SpacePtr& space) {
    std::vector<Rational> v(space->state_count());
    for (std::size_t r = 0; r < v.size(); ++r) v[r] = eval_at(*e, *space, r);
    return Expectation(space, std::move(v));
}

inline bool equal(const EExprPtr& a, const EExprPtr& b) {
    if (a == b) return true;
    if (!a || !b || a->kind != b->kind) return false;
    switch (a->kind) {
        case EExpr::Kind::Lit: return a->lit == b->lit;
        case EExpr::Kind::Embed: return equal(a->pred, b->pred);
        default: return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
    }
}

inline std::string print(const EExprPtr& e, int level = 0) {
    auto paren = [&](const std::string& s, int mine) { return mine < level ? "(" + s + ")" : s; };
    switch (e->kind) {
        case EExpr::Kind::Lit: return to_string(e->lit);
        case EExpr::Kind::Embed: return "[" + print(e->pred, 0) + "]";
        case EExpr::Kind::Add: return paren(print(e->lhs, 0) + " + " + print(e->rhs, 1), 0);
        case EExpr::Kind::Mul: return paren(print(e->lhs, 1) + " * " + print(e->rhs, 2), 1);
    }
    throw SemanticError("corrupt expectation expression");
}

}  // namespace pgcl
