#include <cctype>
#include <optional>
#include <sstream>

#include "finord/errors.hpp"
#include "finord/formula.hpp"

namespace finord {

namespace {

using K = Formula::Kind;

enum class Tok {
    End,
    Ident,
    True,
    False,
    Bot,
    Min,
    Max,
    At,
    Sub,
    Ex1,
    Ex2,
    All1,
    All2,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Dot,
    LParen,
    RParen,
    Equals,
    Exle,
    Less,
};

struct Token {
    Tok kind = Tok::End;
    std::string text;
    std::size_t offset = 0;
};

std::optional<Tok> keyword(std::string_view word) {
    if (word == "true") return Tok::True;
    if (word == "false") return Tok::False;
    if (word == "bot") return Tok::Bot;
    if (word == "min") return Tok::Min;
    if (word == "max") return Tok::Max;
    if (word == "at") return Tok::At;
    if (word == "sub") return Tok::Sub;
    if (word == "ex1") return Tok::Ex1;
    if (word == "ex2") return Tok::Ex2;
    if (word == "all1") return Tok::All1;
    if (word == "all2") return Tok::All2;
    return std::nullopt;
}

std::vector<Token> tokenize(std::string_view s) {
    std::vector<Token> out;
    std::size_t i = 0;
    auto push = [&](Tok k, std::size_t len) {
        out.push_back({k, std::string(s.substr(i, len)), i});
        i += len;
    };
    while (i < s.size()) {
        const char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
            const auto word = s.substr(i, j - i);
            push(keyword(word).value_or(Tok::Ident), j - i);
            continue;
        }
        if (s.substr(i, 3) == "<->") {
            push(Tok::Iff, 3);
        } else if (s.substr(i, 2) == "->") {
            push(Tok::Implies, 2);
        } else if (s.substr(i, 2) == "<<") {
            push(Tok::Exle, 2);
        } else {
            switch (c) {
            case '<': push(Tok::Less, 1); break;
            case '~': push(Tok::Not, 1); break;
            case '&': push(Tok::And, 1); break;
            case '|': push(Tok::Or, 1); break;
            case '.': push(Tok::Dot, 1); break;
            case '(': push(Tok::LParen, 1); break;
            case ')': push(Tok::RParen, 1); break;
            case '=': push(Tok::Equals, 1); break;
            default: throw SyntaxError(std::string("unexpected character '") + c + "'", i);
            }
        }
    }
    out.push_back({Tok::End, "", s.size()});
    return out;
}

class Parser {
public:
    explicit Parser(std::string_view text) : tokens_(tokenize(text)) {}

    Formula parse() {
        auto f = formula();
        if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
        return f;
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    const Token& advance() { return tokens_[pos_++]; }
    bool accept(Tok k) {
        if (peek().kind != k) return false;
        ++pos_;
        return true;
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw SyntaxError(peek().kind == Tok::End ? msg + " (end of input)" : msg, peek().offset);
    }
    void close_paren(std::size_t open_offset) {
        if (!accept(Tok::RParen))
            throw SyntaxError("unbalanced '(' opened here; expected ')' but found " +
                                  (peek().kind == Tok::End ? std::string("end of input") : "'" + peek().text + "'"),
                              open_offset);
    }

    Formula formula() {
        auto lhs = implication();
        while (accept(Tok::Iff)) lhs = fm::iff(lhs, implication());
        return lhs;
    }

    Formula implication() {
        auto lhs = disjunction();
        if (accept(Tok::Implies)) return fm::implies(lhs, implication());
        return lhs;
    }

    Formula disjunction() {
        auto lhs = conjunction();
        while (accept(Tok::Or)) lhs = fm::disj(lhs, conjunction());
        return lhs;
    }

    Formula conjunction() {
        auto lhs = unary();
        while (accept(Tok::And)) lhs = fm::conj(lhs, unary());
        return lhs;
    }

    Formula unary() {
        switch (peek().kind) {
        case Tok::Not: advance(); return fm::neg(unary());
        case Tok::Ex1:
        case Tok::Ex2:
        case Tok::All1:
        case Tok::All2: return quantifier();
        default: return primary();
        }
    }

    Formula quantifier() {
        const Tok q = advance().kind;
        const bool set_sorted = q == Tok::Ex2 || q == Tok::All2;
        std::vector<std::string> vars;
        while (peek().kind == Tok::Ident) {
            const auto& tok = advance();
            if ((sort_of_name(tok.text) == Sort::Set) != set_sorted)
                throw SortError("variable '" + tok.text + "' at offset " + std::to_string(tok.offset) +
                                (set_sorted ? " must be set-sorted (uppercase) under ex2/all2"
                                            : " must be atom-sorted (lowercase) under ex1/all1"));
            vars.push_back(tok.text);
        }
        if (vars.empty()) fail("expected a variable after quantifier");
        if (!accept(Tok::Dot)) fail("expected '.' after quantified variables");
        Formula body = formula();
        for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
            switch (q) {
            case Tok::Ex1: body = fm::exists_atom(*it, body); break;
            case Tok::All1: body = fm::forall_atom(*it, body); break;
            case Tok::Ex2: body = fm::exists_set(*it, body); break;
            default: body = fm::forall_set(*it, body); break;
            }
        }
        return body;
    }

    Term term() {
        const auto& tok = advance();
        switch (tok.kind) {
        case Tok::Ident: return Term::var(tok.text);
        case Tok::Bot: return Term::bot();
        case Tok::Min: return Term::min();
        case Tok::Max: return Term::max();
        default: --pos_; fail("expected a term");
        }
    }

    static bool atom_sorted(const Term& t) {
        return t.kind() == Term::Kind::Min || t.kind() == Term::Kind::Max ||
               (t.is_var() && sort_of_name(t.name()) == Sort::Atom);
    }

    Formula primary() {
        switch (peek().kind) {
        case Tok::True: advance(); return fm::truth();
        case Tok::False: advance(); return fm::falsity();
        case Tok::LParen: {
            const auto open = advance().offset;
            auto f = formula();
            close_paren(open);
            return f;
        }
        case Tok::At: {
            advance();
            if (peek().kind != Tok::LParen) fail("expected '(' after at");
            const auto open = advance().offset;
            auto t = term();
            close_paren(open);
            return fm::at(t);
        }
        default: break;
        }

        const auto start = peek().offset;
        auto lhs = term();
        if (peek().kind == Tok::LParen) {
            if (!lhs.is_var() || sort_of_name(lhs.name()) != Sort::Set)
                throw SortError("membership at offset " + std::to_string(start) +
                                ": container must be a set-sorted (uppercase) variable");
            const auto open = advance().offset;
            const auto arg_offset = peek().offset;
            auto arg = term();
            if (!atom_sorted(arg))
                throw SortError("membership at offset " + std::to_string(arg_offset) + ": argument must be atom-sorted");
            close_paren(open);
            return fm::mem(arg, lhs);
        }
        const auto& op = advance();
        switch (op.kind) {
        case Tok::Equals: return fm::eq(lhs, term());
        case Tok::Sub: return fm::subset(lhs, term());
        case Tok::Exle: return fm::exle(lhs, term());
        case Tok::Less: {
            auto rhs = term();
            if (!atom_sorted(lhs) || !atom_sorted(rhs))
                throw SortError("'<' at offset " + std::to_string(op.offset) + " relates atom-sorted terms only");
            return fm::exle(lhs, rhs);
        }
        default: --pos_; fail("expected '=', 'sub', '<<', '<' or '('");
        }
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

// Binding strength; quantifiers are handled separately since their scope
// extends to the right.
int precedence(K k) {
    switch (k) {
    case K::Iff: return 1;
    case K::Implies: return 2;
    case K::Or: return 3;
    case K::And: return 4;
    case K::Not: return 5;
    default: return 6;
    }
}

std::string term_text(const Term& t) {
    switch (t.kind()) {
    case Term::Kind::Var: return t.name();
    case Term::Kind::Bot: return "bot";
    case Term::Kind::Min: return "min";
    default: return "max";
    }
}

void print(const Formula& f, std::ostringstream& out);

void print_operand(const Formula& f, bool parens, std::ostringstream& out) {
    if (parens || f.is_quantifier()) {
        out << '(';
        print(f, out);
        out << ')';
    } else {
        print(f, out);
    }
}

void print(const Formula& f, std::ostringstream& out) {
    switch (f.kind()) {
    case K::True: out << "true"; return;
    case K::False: out << "false"; return;
    case K::Eq: out << term_text(f.lhs()) << " = " << term_text(f.rhs()); return;
    case K::Subset: out << term_text(f.lhs()) << " sub " << term_text(f.rhs()); return;
    case K::Exle: out << term_text(f.lhs()) << " << " << term_text(f.rhs()); return;
    case K::At: out << "at(" << term_text(f.lhs()) << ')'; return;
    case K::Mem: out << term_text(f.rhs()) << '(' << term_text(f.lhs()) << ')'; return;
    case K::Not:
        out << '~';
        print_operand(f.child(0), precedence(f.child(0).kind()) < precedence(K::Not), out);
        return;
    case K::ExistsSet: out << "ex2 " << f.var() << ". "; print(f.child(0), out); return;
    case K::ForallSet: out << "all2 " << f.var() << ". "; print(f.child(0), out); return;
    case K::ExistsAtom: out << "ex1 " << f.var() << ". "; print(f.child(0), out); return;
    case K::ForallAtom: out << "all1 " << f.var() << ". "; print(f.child(0), out); return;
    default: break;
    }
    const int p = precedence(f.kind());
    const bool right_assoc = f.kind() == K::Implies;
    const int lp = precedence(f.child(0).kind());
    const int rp = precedence(f.child(1).kind());
    print_operand(f.child(0), lp < p || (lp == p && right_assoc), out);
    switch (f.kind()) {
    case K::And: out << " & "; break;
    case K::Or: out << " | "; break;
    case K::Implies: out << " -> "; break;
    default: out << " <-> "; break;
    }
    print_operand(f.child(1), rp < p || (rp == p && !right_assoc), out);
}

} // namespace

Formula parse_formula(std::string_view text) { return Parser(text).parse(); }

std::string to_string(const Formula& f) {
    std::ostringstream out;
    print(f, out);
    return out.str();
}

} // namespace finord
