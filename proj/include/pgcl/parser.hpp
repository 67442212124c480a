#pragma once

#include <cctype>
#include <cstdlib>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pgcl/ast.hpp"
#include "pgcl/errors.hpp"
#include "pgcl/expr.hpp"

// Lexer, recursive-descent parser and pretty-printer for the surface syntax.
//
//   file    := decl* stmt
//   decl    := "var" IDENT ":" domain ";"
//   domain  := "{" INT ("," INT)* "}" | "{" INT ".." INT "}"
//   stmt    := seq
//   seq     := choice (";" choice)*
//   choice  := pchoice ("[]" pchoice)*
//   pchoice := atom ("[" pexpr "]" atom)?
//   atom    := "abort" | "skip" | IDENT ":=" aexpr | IDENT "::" setexpr
//            | "if" bexpr "then" stmt "else" stmt "fi"
//            | "do" bexpr "->" stmt "od" annot?
//            | "label" IDENT ":" atom
//            | "(" stmt ")"
//   annot   := "@invariant" eexpr ("@termination" ("auto"|"assumed"))?
//
// "--" starts a line comment. Seq and [] associate left. The operands of
// [p] are atoms; parenthesize to nest.

namespace pgcl {

enum class Tok {
    Ident, Int, Decimal,
    KwVar, KwSkip, KwAbort, KwIf, KwThen, KwElse, KwFi, KwDo, KwOd,
    KwTrue, KwFalse, KwLabel, KwSpec, KwAssume,
    AtInvariant, AtTermination,
    Semi, Colon, Assign, SetAssign, Comma,
    LBrace, RBrace, LParen, RParen, LBracket, RBracket, BoxBox,
    Plus, Minus, Star, Slash, Backslash,
    Bang, Amp, Pipe, Turnstile,
    Eq, Ne, Lt, Le, Gt, Ge,
    Arrow, DotDot,
    End,
};

struct Token {
    Tok kind;
    std::string text;
    int line = 1;
    int col = 1;
};

inline std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto peek = [&](std::size_t k = 0) -> char { return i + k < src.size() ? src[i + k] : '\0'; };
    auto push = [&](Tok k, std::string text, int l, int c) {
        out.push_back(Token{k, std::move(text), l, c});
    };
    auto advance = [&](std::size_t n = 1) {
        for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < src.size()) {
        const char c = peek();
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance();
            continue;
        }
        if (c == '-' && peek(1) == '-') {
            while (i < src.size() && peek() != '\n') advance();
            continue;
        }
        const int tl = line, tc = col;
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string num;
            while (std::isdigit(static_cast<unsigned char>(peek()))) {
                num += peek();
                advance();
            }
            if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
                num += '.';
                advance();
                while (std::isdigit(static_cast<unsigned char>(peek()))) {
                    num += peek();
                    advance();
                }
                push(Tok::Decimal, num, tl, tc);
            } else {
                push(Tok::Int, num, tl, tc);
            }
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string id;
            while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') {
                id += peek();
                advance();
            }
            Tok k = Tok::Ident;
            if (id == "var") k = Tok::KwVar;
            else if (id == "skip") k = Tok::KwSkip;
            else if (id == "abort") k = Tok::KwAbort;
            else if (id == "if") k = Tok::KwIf;
            else if (id == "then") k = Tok::KwThen;
            else if (id == "else") k = Tok::KwElse;
            else if (id == "fi") k = Tok::KwFi;
            else if (id == "do") k = Tok::KwDo;
            else if (id == "od") k = Tok::KwOd;
            else if (id == "true") k = Tok::KwTrue;
            else if (id == "false") k = Tok::KwFalse;
            else if (id == "label") k = Tok::KwLabel;
            else if (id == "spec") k = Tok::KwSpec;
            else if (id == "assume") k = Tok::KwAssume;
            push(k, id, tl, tc);
            continue;
        }
        if (c == '@') {
            advance();
            std::string id;
            while (std::isalpha(static_cast<unsigned char>(peek()))) {
                id += peek();
                advance();
            }
            if (id == "invariant") push(Tok::AtInvariant, "@invariant", tl, tc);
            else if (id == "termination") push(Tok::AtTermination, "@termination", tl, tc);
            else throw ParseError(tl, tc, "unknown annotation '@" + id + "'");
            continue;
        }
        auto two = [&](char second, Tok twoTok, Tok oneTok, const char* twoText, const char* oneText) {
            if (peek(1) == second) {
                push(twoTok, twoText, tl, tc);
                advance(2);
            } else {
                push(oneTok, oneText, tl, tc);
                advance();
            }
        };
        switch (c) {
            case ';': push(Tok::Semi, ";", tl, tc); advance(); break;
            case ',': push(Tok::Comma, ",", tl, tc); advance(); break;
            case '{': push(Tok::LBrace, "{", tl, tc); advance(); break;
            case '}': push(Tok::RBrace, "}", tl, tc); advance(); break;
            case '(': push(Tok::LParen, "(", tl, tc); advance(); break;
            case ')': push(Tok::RParen, ")", tl, tc); advance(); break;
            case ']': push(Tok::RBracket, "]", tl, tc); advance(); break;
            case '+': push(Tok::Plus, "+", tl, tc); advance(); break;
            case '*': push(Tok::Star, "*", tl, tc); advance(); break;
            case '/': push(Tok::Slash, "/", tl, tc); advance(); break;
            case '\\': push(Tok::Backslash, "\\", tl, tc); advance(); break;
            case '&': push(Tok::Amp, "&", tl, tc); advance(); break;
            case '=': push(Tok::Eq, "=", tl, tc); advance(); break;
            case '[':
                if (peek(1) == ']') {
                    push(Tok::BoxBox, "[]", tl, tc);
                    advance(2);
                } else {
                    push(Tok::LBracket, "[", tl, tc);
                    advance();
                }
                break;
            case ':':
                if (peek(1) == '=') {
                    push(Tok::Assign, ":=", tl, tc);
                    advance(2);
                } else if (peek(1) == ':') {
                    push(Tok::SetAssign, "::", tl, tc);
                    advance(2);
                } else {
                    push(Tok::Colon, ":", tl, tc);
                    advance();
                }
                break;
            case '|': two('-', Tok::Turnstile, Tok::Pipe, "|-", "|"); break;
            case '-': two('>', Tok::Arrow, Tok::Minus, "->", "-"); break;
            case '!': two('=', Tok::Ne, Tok::Bang, "!=", "!"); break;
            case '<': two('=', Tok::Le, Tok::Lt, "<=", "<"); break;
            case '>': two('=', Tok::Ge, Tok::Gt, ">=", ">"); break;
            case '.':
                if (peek(1) == '.') {
                    push(Tok::DotDot, "..", tl, tc);
                    advance(2);
                } else {
                    throw ParseError(tl, tc, "stray '.'");
                }
                break;
            default:
                throw ParseError(tl, tc, std::string("unexpected character '") + c + "'");
        }
    }
    out.push_back(Token{Tok::End, "", line, col});
    return out;
}

struct ParsedProgram {
    SpacePtr space;
    ProgramPtr prog;
};

struct SpecEntry {
    std::string name;
    EExprPtr pre;
    std::string ref;
    EExprPtr post;
    bool assumed = false;
    SourceLoc loc;
};

class Parser {
  public:
    explicit Parser(std::string_view text) : toks_(lex(text)) {}

    ParsedProgram parse_file() {
        std::vector<StateSpace::Var> vars;
        while (at(Tok::KwVar)) vars.push_back(parse_decl());
        space_ = std::make_shared<const StateSpace>(std::move(vars));
        ProgramPtr prog = parse_stmt();
        expect(Tok::End, "trailing input after program");
        return {space_, prog};
    }

    EExprPtr parse_expectation(const SpacePtr& space) {
        space_ = space;
        EExprPtr e = parse_eexpr();
        expect(Tok::End, "trailing input after expectation");
        return e;
    }

    BExprPtr parse_guard(const SpacePtr& space) {
        space_ = space;
        BExprPtr e = parse_bexpr();
        expect(Tok::End, "trailing input after guard");
        return e;
    }

    std::vector<SpecEntry> parse_specs(const SpacePtr& space) {
        space_ = space;
        std::vector<SpecEntry> out;
        while (!at(Tok::End)) {
            SpecEntry e;
            e.loc = here();
            if (at(Tok::KwAssume)) {
                next();
                e.assumed = true;
            }
            expect(Tok::KwSpec, "expected 'spec'");
            e.name = expect(Tok::Ident, "expected spec name").text;
            expect(Tok::Colon, "expected ':' after spec name");
            e.pre = parse_eexpr();
            expect(Tok::Turnstile, "expected '|-'");
            e.ref = expect(Tok::Ident, "expected program label").text;
            expect(Tok::Colon, "expected ':' after program label");
            e.post = parse_eexpr();
            out.push_back(std::move(e));
        }
        return out;
    }

  private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    SpacePtr space_;

    const Token& cur() const { return toks_[pos_]; }
    bool at(Tok k) const { return cur().kind == k; }
    void next() { if (pos_ + 1 < toks_.size()) ++pos_; }
    SourceLoc here() const { return {cur().line, cur().col}; }
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(cur().line, cur().col, msg);
    }
    Token expect(Tok k, const std::string& msg) {
        if (!at(k)) fail(msg + (cur().kind == Tok::End ? " (at end of input)" : ", got '" + cur().text + "'"));
        Token t = cur();
        next();
        return t;
    }
    bool eat(Tok k) {
        if (!at(k)) return false;
        next();
        return true;
    }

    long parse_int_lit() {
        bool neg = eat(Tok::Minus);
        Token t = expect(Tok::Int, "expected integer");
        long v = std::strtol(t.text.c_str(), nullptr, 10);
        return neg ? -v : v;
    }

    StateSpace::Var parse_decl() {
        expect(Tok::KwVar, "expected 'var'");
        std::string name = expect(Tok::Ident, "expected variable name").text;
        expect(Tok::Colon, "expected ':' after variable name");
        Token open = expect(Tok::LBrace, "expected '{' to open domain");
        std::vector<long> values;
        values.push_back(parse_int_lit());
        if (eat(Tok::DotDot)) {
            long hi = parse_int_lit();
            if (hi < values[0])
                throw ParseError(open.line, open.col, "malformed domain: empty range");
            for (long v = values[0] + 1; v <= hi; ++v) values.push_back(v);
        } else {
            while (eat(Tok::Comma)) values.push_back(parse_int_lit());
        }
        expect(Tok::RBrace, "expected '}' to close domain");
        expect(Tok::Semi, "expected ';' after declaration");
        return {std::move(name), std::move(values)};
    }

    std::string parse_var_ref() {
        Token t = expect(Tok::Ident, "expected variable");
        if (!space_->index_of(t.text))
            throw ParseError(t.line, t.col, "undeclared variable '" + t.text + "'");
        return t.text;
    }

    // ------------------------------------------------------------- programs

    ProgramPtr parse_stmt() { return parse_seq(); }

    ProgramPtr parse_seq() {
        SourceLoc loc = here();
        ProgramPtr p = parse_choice();
        while (eat(Tok::Semi)) p = at_loc(prog_seq(p, parse_choice()), loc);
        return p;
    }

    ProgramPtr parse_choice() {
        SourceLoc loc = here();
        ProgramPtr p = parse_pchoice();
        while (eat(Tok::BoxBox)) p = at_loc(prog_dc(p, parse_pchoice()), loc);
        return p;
    }

    ProgramPtr parse_pchoice() {
        SourceLoc loc = here();
        ProgramPtr p = parse_atom();
        if (eat(Tok::LBracket)) {
            PExprPtr prob = parse_pexpr();
            expect(Tok::RBracket, "expected ']' after probability");
            p = at_loc(prog_pc(p, prob, parse_atom()), loc);
        }
        return p;
    }

    ProgramPtr parse_atom() {
        SourceLoc loc = here();
        if (eat(Tok::KwAbort)) return at_loc(prog_abort(), loc);
        if (eat(Tok::KwSkip)) return at_loc(prog_skip(), loc);
        if (eat(Tok::KwLabel)) {
            std::string name = expect(Tok::Ident, "expected label name").text;
            expect(Tok::Colon, "expected ':' after label");
            return with_label(parse_atom(), name, loc);
        }
        if (eat(Tok::LParen)) {
            ProgramPtr p = parse_stmt();
            expect(Tok::RParen, "expected ')'");
            return p;
        }
        if (eat(Tok::KwIf)) {
            BExprPtr g = parse_bexpr();
            expect(Tok::KwThen, "expected 'then'");
            ProgramPtr t = parse_stmt();
            expect(Tok::KwElse, "expected 'else'");
            ProgramPtr e = parse_stmt();
            expect(Tok::KwFi, "expected 'fi'");
            return at_loc(prog_if(g, t, e), loc);
        }
        if (eat(Tok::KwDo)) {
            BExprPtr g = parse_bexpr();
            expect(Tok::Arrow, "expected '->' after loop guard");
            ProgramPtr body = parse_stmt();
            expect(Tok::KwOd, "expected 'od'");
            std::shared_ptr<const LoopAnnotation> annot;
            if (eat(Tok::AtInvariant)) {
                LoopAnnotation a;
                a.invariant = parse_eexpr();
                if (eat(Tok::AtTermination)) {
                    Token t = expect(Tok::Ident, "expected 'auto' or 'assumed'");
                    if (t.text == "auto") a.termination = LoopAnnotation::Termination::Auto;
                    else if (t.text == "assumed") a.termination = LoopAnnotation::Termination::Assumed;
                    else throw ParseError(t.line, t.col, "expected 'auto' or 'assumed'");
                }
                annot = std::make_shared<const LoopAnnotation>(std::move(a));
            }
            return at_loc(prog_loop(g, body, annot), loc);
        }
        if (at(Tok::Ident)) {
            std::string var = parse_var_ref();
            if (eat(Tok::Assign)) return at_loc(prog_apply(var, parse_aexpr()), loc);
            if (eat(Tok::SetAssign)) return at_loc(prog_setdc(var, parse_setexpr()), loc);
            fail("expected ':=' or '::' after variable");
        }
        fail("expected statement");
    }

    // ---------------------------------------------------------- arithmetic

    AExprPtr parse_aexpr() {
        AExprPtr e = parse_aterm();
        for (;;) {
            if (eat(Tok::Plus)) e = aexpr_bin(AExpr::Kind::Add, e, parse_aterm());
            else if (eat(Tok::Minus)) e = aexpr_bin(AExpr::Kind::Sub, e, parse_aterm());
            else return e;
        }
    }

    AExprPtr parse_aterm() {
        AExprPtr e = parse_afactor();
        while (eat(Tok::Star)) e = aexpr_bin(AExpr::Kind::Mul, e, parse_afactor());
        return e;
    }

    AExprPtr parse_afactor() {
        if (eat(Tok::Minus)) {
            AExprPtr e = parse_afactor();
            // fold so negative literals round-trip
            if (e->kind == AExpr::Kind::Lit) return aexpr_lit(-e->lit);
            return aexpr_neg(e);
        }
        if (at(Tok::Int)) {
            long v = std::strtol(cur().text.c_str(), nullptr, 10);
            next();
            return aexpr_lit(v);
        }
        if (at(Tok::Ident)) return aexpr_var(parse_var_ref());
        if (eat(Tok::LParen)) {
            AExprPtr e = parse_aexpr();
            expect(Tok::RParen, "expected ')'");
            return e;
        }
        fail("expected arithmetic expression");
    }

    // ------------------------------------------------------------- boolean

    BExprPtr parse_bexpr() {
        BExprPtr e = parse_band();
        while (eat(Tok::Pipe)) e = bexpr_bin(BExpr::Kind::Or, e, parse_band());
        return e;
    }

    BExprPtr parse_band() {
        BExprPtr e = parse_batom();
        while (eat(Tok::Amp)) e = bexpr_bin(BExpr::Kind::And, e, parse_batom());
        return e;
    }

    BExprPtr parse_batom() {
        if (eat(Tok::KwTrue)) return bexpr_const(true);
        if (eat(Tok::KwFalse)) return bexpr_const(false);
        if (eat(Tok::Bang)) return bexpr_not(parse_batom());
        if (at(Tok::LParen)) {
            // "(" opens either a nested bexpr or the aexpr of a comparison;
            // try the former, backtrack on failure
            const std::size_t save = pos_;
            next();
            try {
                BExprPtr e = parse_bexpr();
                expect(Tok::RParen, "expected ')'");
                return e;
            } catch (const ParseError&) {
                pos_ = save;
            }
        }
        return parse_cmp();
    }

    BExprPtr parse_cmp() {
        AExprPtr l = parse_aexpr();
        BExpr::Cmp op;
        if (eat(Tok::Eq)) op = BExpr::Cmp::Eq;
        else if (eat(Tok::Ne)) op = BExpr::Cmp::Ne;
        else if (eat(Tok::Le)) op = BExpr::Cmp::Le;
        else if (eat(Tok::Lt)) op = BExpr::Cmp::Lt;
        else if (eat(Tok::Ge)) op = BExpr::Cmp::Ge;
        else if (eat(Tok::Gt)) op = BExpr::Cmp::Gt;
        else fail("expected comparison operator");
        return bexpr_cmp(op, l, parse_aexpr());
    }

    // ---------------------------------------------------------------- sets

    SetExprPtr parse_setexpr() {
        SetExprPtr e = parse_setatom();
        while (eat(Tok::Backslash)) e = setexpr_diff(e, parse_setatom());
        return e;
    }

    SetExprPtr parse_setatom() {
        if (eat(Tok::LBrace)) {
            std::vector<AExprPtr> elems;
            elems.push_back(parse_aexpr());
            while (eat(Tok::Comma)) elems.push_back(parse_aexpr());
            expect(Tok::RBrace, "expected '}'");
            return setexpr_lit(std::move(elems));
        }
        if (eat(Tok::LParen)) {
            SetExprPtr e = parse_setexpr();
            expect(Tok::RParen, "expected ')'");
            return e;
        }
        fail("expected set expression");
    }

    // ------------------------------------------------------- probabilities

    Rational parse_rat_lit() {
        Token t = cur();
        if (eat(Tok::Decimal)) return parse_rational(t.text);
        expect(Tok::Int, "expected number");
        if (eat(Tok::Slash)) {
            Token d = expect(Tok::Int, "expected denominator");
            if (d.text.find_first_not_of('0') == std::string::npos)
                throw ParseError(d.line, d.col, "zero denominator");
            return rat(std::strtol(t.text.c_str(), nullptr, 10),
                       std::strtol(d.text.c_str(), nullptr, 10));
        }
        return Rational(std::strtol(t.text.c_str(), nullptr, 10));
    }

    PExprPtr parse_pexpr() {
        PExprPtr e = parse_pterm();
        for (;;) {
            if (eat(Tok::Plus)) e = pexpr_bin(PExpr::Kind::Add, e, parse_pterm());
            else if (eat(Tok::Minus)) e = pexpr_bin(PExpr::Kind::Sub, e, parse_pterm());
            else return e;
        }
    }

    PExprPtr parse_pterm() {
        PExprPtr e = parse_pfactor();
        while (eat(Tok::Star)) e = pexpr_bin(PExpr::Kind::Mul, e, parse_pfactor());
        return e;
    }

    PExprPtr parse_pfactor() {
        if (at(Tok::Int) || at(Tok::Decimal)) return pexpr_lit(parse_rat_lit());
        if (at(Tok::Ident)) return pexpr_var(parse_var_ref());
        if (eat(Tok::LParen)) {
            PExprPtr e = parse_pexpr();
            expect(Tok::RParen, "expected ')'");
            return e;
        }
        fail("expected probability expression");
    }

    // -------------------------------------------------------- expectations

    EExprPtr parse_eexpr() {
        EExprPtr e = parse_eterm();
        while (eat(Tok::Plus)) e = eexpr_bin(EExpr::Kind::Add, e, parse_eterm());
        return e;
    }

    EExprPtr parse_eterm() {
        EExprPtr e = parse_efactor();
        while (eat(Tok::Star)) e = eexpr_bin(EExpr::Kind::Mul, e, parse_efactor());
        return e;
    }

    EExprPtr parse_efactor() {
        if (at(Tok::Int) || at(Tok::Decimal)) return eexpr_lit(parse_rat_lit());
        if (eat(Tok::LBracket)) {
            BExprPtr g = parse_bexpr();
            expect(Tok::RBracket, "expected ']'");
            return eexpr_embed(g);
        }
        if (eat(Tok::LParen)) {
            EExprPtr e = parse_eexpr();
            expect(Tok::RParen, "expected ')'");
            return e;
        }
        fail("expected expectation expression");
    }
};

inline ParsedProgram parse_program(std::string_view text) { return Parser(text).parse_file(); }

inline EExprPtr parse_eexpr(std::string_view text, const SpacePtr& space) {
    return Parser(text).parse_expectation(space);
}

inline BExprPtr parse_bexpr(std::string_view text, const SpacePtr& space) {
    return Parser(text).parse_guard(space);
}

inline std::vector<SpecEntry> parse_spec_file(std::string_view text, const SpacePtr& space) {
    return Parser(text).parse_specs(space);
}

// ------------------------------------------------------------------ printing

namespace detail {
// precedence: 0 seq, 1 [], 2 [p], 3 atom
inline std::string pretty_at(const ProgramPtr& p, int level);

inline std::string pretty_plain(const ProgramPtr& p, int level) {
    using K = Program::Kind;
    auto paren = [&](const std::string& s, int mine) { return mine < level ? "(" + s + ")" : s; };
    switch (p->kind) {
        case K::Abort: return "abort";
        case K::Skip: return "skip";
        case K::Apply: return p->var + " := " + print(p->aexpr, 0);
        case K::SetDC: return p->var + " :: " + print(p->set, 0);
        case K::Seq: return paren(pretty_at(p->p1, 0) + " ; " + pretty_at(p->p2, 1), 0);
        case K::DC: return paren(pretty_at(p->p1, 1) + " [] " + pretty_at(p->p2, 2), 1);
        case K::PC:
            return paren(pretty_at(p->p1, 3) + " [" + print(p->prob, 0) + "] " + pretty_at(p->p2, 3), 2);
        case K::If:
            return "if " + print(p->guard, 0) + " then " + pretty_at(p->p1, 0) + " else " +
                   pretty_at(p->p2, 0) + " fi";
        case K::Loop: {
            std::string s = "do " + print(p->guard, 0) + " -> " + pretty_at(p->p1, 0) + " od";
            if (p->annot) {
                s += " @invariant " + print(p->annot->invariant, 0);
                if (p->annot->termination == LoopAnnotation::Termination::Assumed)
                    s += " @termination assumed";
            }
            return s;
        }
        case K::Exec:
            throw UnsupportedError("Exec nodes have no concrete syntax");
    }
    throw SemanticError("corrupt program");
}

inline std::string pretty_at(const ProgramPtr& p, int level) {
    if (p->label.empty()) return pretty_plain(p, level);
    // a labeled construct is an atom; non-atom bodies get parenthesized
    return "label " + p->label + ": " + pretty_plain(p, 3);
}
}  // namespace detail

inline std::string pretty(const ProgramPtr& p) { return detail::pretty_at(p, 0); }

/// Renders declarations and program as a reparsable file.
inline std::string pretty_file(const StateSpace& space, const ProgramPtr& prog) {
    std::string out;
    for (const auto& v : space.vars()) {
        out += "var " + v.name + ":{";
        for (std::size_t i = 0; i < v.domain.size(); ++i) {
            if (i) out += ",";
            out += std::to_string(v.domain[i]);
        }
        out += "};\n";
    }
    out += pretty(prog) + "\n";
    return out;
}

}  // namespace pgcl
