#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "pgcl/expr.hpp"
#include "pgcl/state_space.hpp"

// Program syntax. Nodes are immutable and shared; structural equality ignores
// source locations but respects labels.

namespace pgcl {

struct SourceLoc {
    int line = 0;
    int col = 0;
};

struct Program;
using ProgramPtr = std::shared_ptr<const Program>;

/// Nondeterministic state relation, total over a fixed space. Each state
/// either fails outright or offers a (possibly empty) successor set.
/// An empty successor set is "stuck".
struct NondetRelation {
    struct Entry {
        std::vector<std::size_t> succs;
        bool fail = false;
    };
    SpacePtr space;
    std::vector<Entry> entries;  // indexed by state rank
    std::string name;            // used in diagnostics and printing

    NondetRelation(SpacePtr sp, std::vector<Entry> es, std::string nm = "rel")
        : space(std::move(sp)), entries(std::move(es)), name(std::move(nm)) {
        if (entries.size() != space->state_count())
            throw SemanticError("relation not total over the state space");
        for (const auto& e : entries)
            for (std::size_t s : e.succs)
                if (s >= space->state_count()) throw SemanticError("relation successor out of range");
    }
};

struct LoopAnnotation {
    EExprPtr invariant;
    enum class Termination { Auto, Assumed };
    Termination termination = Termination::Auto;
};

struct Program {
    enum class Kind { Abort, Skip, Apply, Seq, DC, PC, SetDC, If, Loop, Exec };
    Kind kind = Kind::Skip;

    std::string var;     // Apply, SetDC
    AExprPtr aexpr;      // Apply rhs
    SetExprPtr set;      // SetDC
    PExprPtr prob;       // PC
    BExprPtr guard;      // If, Loop
    ProgramPtr p1, p2;   // Seq/DC/PC children, If then/else, Loop body in p1
    std::shared_ptr<const LoopAnnotation> annot;  // Loop only
    std::shared_ptr<const NondetRelation> rel;    // Exec only

    std::string label;   // optional, from "label NAME:" prefixes
    SourceLoc loc;
};

namespace detail {
inline Program mk(Program::Kind k) {
    Program p;
    p.kind = k;
    return p;
}
}  // namespace detail

inline ProgramPtr prog_abort() {
    return std::make_shared<Program>(detail::mk(Program::Kind::Abort));
}
inline ProgramPtr prog_skip() {
    return std::make_shared<Program>(detail::mk(Program::Kind::Skip));
}
inline ProgramPtr prog_apply(std::string var, AExprPtr rhs) {
    Program p = detail::mk(Program::Kind::Apply);
    p.var = std::move(var);
    p.aexpr = std::move(rhs);
    return std::make_shared<Program>(std::move(p));
}
inline ProgramPtr prog_seq(ProgramPtr a, ProgramPtr b) {
    Program p = detail::mk(Program::Kind::Seq);
    p.p1 = std::move(a);
    p.p2 = std::move(b);
    return std::make_shared<Program>(std::move(p));
}
inline ProgramPtr prog_dc(ProgramPtr a, ProgramPtr b) {
    Program p = detail::mk(Program::Kind::DC);
    p.p1 = std::move(a);
    p.p2 = std::move(b);
    return std::make_shared<Program>(std::move(p));
}
inline ProgramPtr prog_pc(ProgramPtr a, PExprPtr prob, ProgramPtr b) {
    Program p = detail::mk(Program::Kind::PC);
    p.prob = std::move(prob);
    p.p1 = std::move(a);
    p.p2 = std::move(b);
    return std::make_shared<Program>(std::move(p));
}
inline ProgramPtr prog_setdc(std::string var, SetExprPtr set) {
    Program p = detail::mk(Program::Kind::SetDC);
    p.var = std::move(var);
    p.set = std::move(set);
    return std::make_shared<Program>(std::move(p));
}
inline ProgramPtr prog_if(BExprPtr g, ProgramPtr t, ProgramPtr e) {
    Program p = detail::mk(Program::Kind::If);
    p.guard = std::move(g);
    p.p1 = std::move(t);
    p.p2 = std::move(e);
    return std::make_shared<Program>(std::move(p));
}
inline ProgramPtr prog_loop(BExprPtr g, ProgramPtr body,
                            std::shared_ptr<const LoopAnnotation> annot = nullptr) {
    Program p = detail::mk(Program::Kind::Loop);
    p.guard = std::move(g);
    p.p1 = std::move(body);
    p.annot = std::move(annot);
    return std::make_shared<Program>(std::move(p));
}
inline ProgramPtr lift_exec(NondetRelation rel) {
    Program p = detail::mk(Program::Kind::Exec);
    p.rel = std::make_shared<const NondetRelation>(std::move(rel));
    return std::make_shared<Program>(std::move(p));
}
inline ProgramPtr with_label(ProgramPtr p, std::string label, SourceLoc loc = {}) {
    Program q = *p;
    q.label = std::move(label);
    q.loc = loc;
    return std::make_shared<Program>(std::move(q));
}
inline ProgramPtr at_loc(ProgramPtr p, SourceLoc loc) {
    Program q = *p;
    q.loc = loc;
    return std::make_shared<Program>(std::move(q));
}

inline bool equal_programs(const ProgramPtr& a, const ProgramPtr& b) {
    if (a == b) return true;
    if (!a || !b || a->kind != b->kind || a->label != b->label) return false;
    using K = Program::Kind;
    switch (a->kind) {
        case K::Abort:
        case K::Skip: return true;
        case K::Apply: return a->var == b->var && equal(a->aexpr, b->aexpr);
        case K::Seq:
        case K::DC: return equal_programs(a->p1, b->p1) && equal_programs(a->p2, b->p2);
        case K::PC:
            return equal(a->prob, b->prob) && equal_programs(a->p1, b->p1) &&
                   equal_programs(a->p2, b->p2);
        case K::SetDC: return a->var == b->var && equal(a->set, b->set);
        case K::If:
            return equal(a->guard, b->guard) && equal_programs(a->p1, b->p1) &&
                   equal_programs(a->p2, b->p2);
        case K::Loop: {
            if (!equal(a->guard, b->guard) || !equal_programs(a->p1, b->p1)) return false;
            if (!a->annot != !b->annot) return false;
            if (!a->annot) return true;
            return a->annot->termination == b->annot->termination &&
                   equal(a->annot->invariant, b->annot->invariant);
        }
        case K::Exec: return a->rel == b->rel;
    }
    return false;
}

inline bool contains_loop(const ProgramPtr& p) {
    if (!p) return false;
    if (p->kind == Program::Kind::Loop) return true;
    return contains_loop(p->p1) || contains_loop(p->p2);
}

inline bool contains_exec(const ProgramPtr& p) {
    if (!p) return false;
    if (p->kind == Program::Kind::Exec) return true;
    return contains_exec(p->p1) || contains_exec(p->p2);
}

inline ProgramPtr find_labeled(const ProgramPtr& p, const std::string& label) {
    if (!p) return nullptr;
    if (p->label == label) return p;
    if (auto r = find_labeled(p->p1, label)) return r;
    return find_labeled(p->p2, label);
}

}  // namespace pgcl
