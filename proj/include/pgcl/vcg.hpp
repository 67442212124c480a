#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pgcl/parser.hpp"
#include "pgcl/transformer.hpp"

// Hoare-style verification-condition generation. A goal triple is proved by
// walking the program backwards from the post-expectation, preferring user
// specifications over internal rules: a spec matching the subtree and post
// as written, then a spec composed with post-strengthening, then a spec
// matching up to a positive scale factor, then sequential decomposition,
// the annotated-loop rule, and exact unfolding of spec-free loop-free
// subtrees. Every rule application leaves obligations that are discharged
// by the engine or recorded as assumptions.

namespace pgcl {

struct Triple {
    Expectation pre;
    ProgramPtr prog;
    Expectation post;
};

enum class SpecKind { Wp, Health };

struct Spec {
    std::string name;
    ProgramPtr node;
    Expectation pre, post;
    bool assumed = false;
    SpecKind kind = SpecKind::Wp;
    SourceLoc loc;
};

class SpecDb {
  public:
    void add(Spec s) {
        by_node_[s.node.get()].push_back(specs_.size());
        specs_.push_back(std::move(s));
    }
    std::vector<const Spec*> at(const Program* node) const {
        std::vector<const Spec*> out;
        if (auto it = by_node_.find(node); it != by_node_.end())
            for (std::size_t i : it->second) out.push_back(&specs_[i]);
        return out;
    }
    bool any_within(const ProgramPtr& node) const {
        if (!node) return false;
        if (by_node_.count(node.get())) return true;
        return any_within(node->p1) || any_within(node->p2);
    }
    const std::vector<Spec>& all() const { return specs_; }

  private:
    std::vector<Spec> specs_;
    std::map<const Program*, std::vector<std::size_t>> by_node_;
};

struct Obligation {
    enum class Kind { Entailment, InvariantPreservation, Termination, Soundness };
    enum class Status { Discharged, Open, Failed };
    Kind kind = Kind::Entailment;
    Status status = Status::Discharged;
    std::string origin;
    std::optional<Expectation> lhs, rhs;
    std::optional<std::size_t> counterexample;  // state rank
    Rational lhs_val{0}, rhs_val{0};
};

struct VcgResult {
    Expectation pre;  // the internally calculated pre-expectation
    std::vector<Obligation> obligations;
    std::vector<std::string> trace;

    explicit VcgResult(Expectation p) : pre(std::move(p)) {}

    std::size_t assumptions() const {
        std::size_t n = 0;
        for (const auto& o : obligations)
            if (o.status == Obligation::Status::Open) ++n;
        return n;
    }
    bool verified() const {
        for (const auto& o : obligations)
            if (o.status == Obligation::Status::Failed) return false;
        return true;
    }
};

/// Scales both sides of a verified triple; valid by the scaling property of
/// healthy transformers.
inline Triple apply_scale(const Triple& t, const Rational& c) {
    if (c <= 0) throw SemanticError("scale factor must be positive");
    return Triple{scale(c, t.pre), t.prog, scale(c, t.post)};
}

namespace detail {

inline std::string loc_string(const SourceLoc& loc) {
    return std::to_string(loc.line) + ":" + std::to_string(loc.col);
}

/// target = c * base for a single positive c, if any.
inline std::optional<Rational> proportion(const Expectation& target, const Expectation& base) {
    std::optional<Rational> c;
    for (std::size_t s = 0; s < base.space()->state_count(); ++s) {
        const Rational& b = base.at(s);
        const Rational& t = target.at(s);
        if (b == 0) {
            if (t != 0) return std::nullopt;
            continue;
        }
        Rational r = t / b;
        if (!c) c = std::move(r);
        else if (*c != r) return std::nullopt;
    }
    if (!c || *c <= 0) return std::nullopt;
    return c;
}

class Vcg {
  public:
    Vcg(const SpecDb& db, FixpointConfig cfg, VcgResult& out)
        : db_(db), cfg_(std::move(cfg)), out_(out) {}

    Expectation pre_for(const ProgramPtr& node, const Expectation& post) {
        const std::string where = describe(node);

        // user specs first, never bypassed
        const auto specs = db_.at(node.get());
        for (const Spec* s : specs)
            if (s->post == post) {
                out_.trace.push_back("spec " + s->name + " at " + where);
                if (s->assumed) note_assumed_spec(*s);
                return s->pre;
            }
        for (const Spec* s : specs)
            if (entails(s->post, post)) {
                out_.trace.push_back("wp_strengthen_post via spec " + s->name + " at " + where);
                Obligation o;
                o.kind = Obligation::Kind::Entailment;
                o.status = Obligation::Status::Discharged;
                o.origin = "wp_strengthen_post(" + s->name + ")";
                o.lhs = s->post;
                o.rhs = post;
                out_.obligations.push_back(std::move(o));
                if (s->assumed) note_assumed_spec(*s);
                return s->pre;
            }
        for (const Spec* s : specs)
            if (auto c = proportion(post, s->post)) {
                out_.trace.push_back("wp_scale c=" + to_string(*c) + " via spec " + s->name +
                                     " at " + where);
                Triple scaled = apply_scale(Triple{s->pre, node, s->post}, *c);
                Obligation o;
                o.kind = Obligation::Kind::Soundness;
                o.status = Obligation::Status::Discharged;
                o.origin = "wp_scale(" + s->name + ", c=" + to_string(*c) + ")";
                out_.obligations.push_back(std::move(o));
                if (s->assumed) note_assumed_spec(*s);
                return scaled.pre;
            }

        // spec-free loop-free subtrees unfold exactly
        if (!db_.any_within(node) && !contains_loop(node)) {
            out_.trace.push_back("unfold " + where);
            return wp(node, post, cfg_);
        }

        if (node->kind == Program::Kind::Seq) {
            out_.trace.push_back("valid_Seq at " + where);
            return pre_for(node->p1, pre_for(node->p2, post));
        }
        if (node->kind == Program::Kind::Loop) {
            if (!node->annot)
                throw SemanticError("loop without invariant annotation or spec at " +
                                    loc_string(node->loc));
            return loop_rule(node, post);
        }
        throw SemanticError("no applicable rule for " + where +
                            ": subtree contains a loop but is neither a sequence nor an "
                            "annotated loop, and no spec matches");
    }

    /// Annotated-loop rule: from invariant preservation and termination,
    /// conclude pconj(I, wp(loop)(1)) entails wp(loop)(not-guard times I).
    Expectation loop_rule(const ProgramPtr& node, const Expectation& post) {
        const SpacePtr& sp = post.space();
        const std::string where = describe(node);
        out_.trace.push_back("loop_rule at " + where);
        const Expectation inv = eval(node->annot->invariant, sp);
        if (bound_of(inv) > 1)
            throw SemanticError("loop invariant must be bounded by 1 at " +
                                loc_string(node->loc));
        const Predicate g = eval_predicate(node->guard, sp);

        {
            Obligation o;
            o.kind = Obligation::Kind::InvariantPreservation;
            o.origin = "loop_rule(" + where + "): guarded invariant preserved by body";
            o.lhs = mask(g, inv);
            o.rhs = wp(node->p1, inv, cfg_);
            settle_entailment(o);
            out_.obligations.push_back(std::move(o));
        }

        const bool assumed =
            node->annot->termination == LoopAnnotation::Termination::Assumed;
        Expectation term = Expectation::constant(sp, 1);
        if (assumed) {
            Obligation o;
            o.kind = Obligation::Kind::Termination;
            o.status = Obligation::Status::Open;
            o.origin = "loop_rule(" + where + "): termination assumed";
            out_.obligations.push_back(std::move(o));
        } else {
            term = wp(node, Expectation::constant(sp, 1), cfg_);
            Obligation o;
            o.kind = Obligation::Kind::Termination;
            o.origin = "loop_rule(" + where + "): wp(loop)(1) = 1" +
                       (cfg_.exact ? std::string(" (exact)")
                                   : " (within " + to_string(cfg_.tolerance) + ")");
            o.lhs = Expectation::constant(sp, 1);
            o.rhs = term;
            o.status = Obligation::Status::Discharged;
            for (std::size_t s = 0; s < sp->state_count(); ++s) {
                const Rational gap = 1 - term.at(s);
                if (cfg_.exact ? gap != 0 : gap > cfg_.tolerance) {
                    o.status = Obligation::Status::Failed;
                    o.counterexample = s;
                    o.lhs_val = 1;
                    o.rhs_val = term.at(s);
                    break;
                }
            }
            out_.obligations.push_back(std::move(o));
        }

        {
            Obligation o;
            o.kind = Obligation::Kind::Soundness;
            o.status = Obligation::Status::Open;
            o.origin = "loop_rule(" + where + "): sub_distrib assumed";
            out_.obligations.push_back(std::move(o));
        }

        const Expectation concl_post = mask(g.negate(), inv);
        const Expectation pre = pconj(inv, term);
        if (!(concl_post == post)) {
            Obligation o;
            o.kind = Obligation::Kind::Entailment;
            o.origin = "loop_rule(" + where + "): conclusion post strengthens target";
            o.lhs = concl_post;
            o.rhs = post;
            settle_entailment(o);
            out_.obligations.push_back(std::move(o));
        }
        return pre;
    }

  private:
    const SpecDb& db_;
    FixpointConfig cfg_;
    VcgResult& out_;

    void settle_entailment(Obligation& o) {
        if (auto s = entails_witness(*o.lhs, *o.rhs)) {
            o.status = Obligation::Status::Failed;
            o.counterexample = *s;
            o.lhs_val = o.lhs->at(*s);
            o.rhs_val = o.rhs->at(*s);
        } else {
            o.status = Obligation::Status::Discharged;
        }
    }

    void note_assumed_spec(const Spec& s) {
        Obligation o;
        o.kind = Obligation::Kind::Entailment;
        o.status = Obligation::Status::Open;
        o.origin = "spec " + s.name + " is assumed, not verified";
        out_.obligations.push_back(std::move(o));
    }

    static std::string describe(const ProgramPtr& node) {
        if (!node->label.empty()) return "'" + node->label + "'";
        using K = Program::Kind;
        switch (node->kind) {
            case K::Abort: return "abort";
            case K::Skip: return "skip";
            case K::Apply: return node->var + " := ...";
            case K::Seq: return "sequence";
            case K::DC: return "demonic choice";
            case K::PC: return "probabilistic choice";
            case K::SetDC: return node->var + " :: ...";
            case K::If: return "conditional";
            case K::Loop: return "loop";
            case K::Exec: return "exec " + node->rel->name;
        }
        return "?";
    }
};

}  // namespace detail

/// Builds a spec database from parsed entries, resolving each reference to
/// a labeled subtree and verifying every non-assumed triple with the engine.
inline SpecDb load_spec_db(const std::vector<SpecEntry>& entries, const SpacePtr& space,
                           const ProgramPtr& program, const FixpointConfig& cfg = {}) {
    SpecDb db;
    for (const auto& e : entries) {
        ProgramPtr node = find_labeled(program, e.ref);
        if (!node)
            throw ParseError(e.loc.line, e.loc.col,
                             "spec '" + e.name + "' refers to unknown label '" + e.ref + "'");
        Spec s{e.name, node, eval(e.pre, space), eval(e.post, space),
               e.assumed, SpecKind::Wp, e.loc};
        if (!e.assumed) {
            const Expectation w = wp(node, s.post, cfg);
            if (auto bad = entails_witness(s.pre, w))
                throw SemanticError("spec '" + e.name + "' does not hold at state " +
                                    space->state_string(*bad) + ": pre " +
                                    to_string(s.pre.at(*bad)) + " > wp " + to_string(w.at(*bad)));
        }
        db.add(std::move(s));
    }
    return db;
}

/// Proves goal.pre entails wp(goal.prog)(goal.post), returning the internal
/// pre-expectation, all obligations, and the rule trace. The goal holds when
/// no obligation failed; open obligations are reported as assumptions.
inline VcgResult prove_triple(const Triple& goal, const SpecDb& db,
                              const FixpointConfig& cfg = {}) {
    VcgResult out(goal.pre);
    detail::Vcg walker(db, cfg, out);
    out.pre = walker.pre_for(goal.prog, goal.post);
    Obligation o;
    o.kind = Obligation::Kind::Entailment;
    o.origin = "goal: stated pre entails calculated pre";
    o.lhs = goal.pre;
    o.rhs = out.pre;
    if (auto s = entails_witness(goal.pre, out.pre)) {
        o.status = Obligation::Status::Failed;
        o.counterexample = *s;
        o.lhs_val = goal.pre.at(*s);
        o.rhs_val = out.pre.at(*s);
    }
    out.obligations.push_back(std::move(o));
    return out;
}

inline std::string vcg_report(const VcgResult& r, const StateSpace& space) {
    std::string out;
    if (r.verified()) {
        out += "VERIFIED";
        if (r.assumptions()) out += " (" + std::to_string(r.assumptions()) +
                                    (r.assumptions() == 1 ? " assumption)" : " assumptions)");
    } else {
        out += "FAILED";
    }
    out += "\n";
    for (const auto& o : r.obligations) {
        const char* status = o.status == Obligation::Status::Discharged ? "discharged"
                             : o.status == Obligation::Status::Open     ? "assumed"
                                                                        : "FAILED";
        const char* kind = o.kind == Obligation::Kind::Entailment ? "entailment"
                           : o.kind == Obligation::Kind::InvariantPreservation
                               ? "invariant-preservation"
                           : o.kind == Obligation::Kind::Termination ? "termination"
                                                                     : "soundness";
        out += std::string("  [") + status + "] " + kind + ": " + o.origin + "\n";
        if (o.counterexample)
            out += "      at " + space.state_string(*o.counterexample) + ": lhs " +
                   to_string(o.lhs_val) + " > rhs " + to_string(o.rhs_val) + "\n";
    }
    out += "trace:\n";
    for (const auto& t : r.trace) out += "  " + t + "\n";
    return out;
}

}  // namespace pgcl
