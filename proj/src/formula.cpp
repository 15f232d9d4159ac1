#include "finord/formula.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <optional>

#include "finord/errors.hpp"

namespace finord {

struct Formula::Node {
    Kind kind = Kind::True;
    Term t0 = Term::bot();
    Term t1 = Term::bot();
    std::string var;
    std::vector<Formula> kids;
};

class FormulaFactory {
public:
    static Formula make(Formula::Node node) { return Formula(std::make_shared<const Formula::Node>(std::move(node))); }
};

namespace {

using K = Formula::Kind;

Formula make_atomic(K kind, Term a, Term b) {
    Formula::Node n;
    n.kind = kind;
    n.t0 = std::move(a);
    n.t1 = std::move(b);
    return FormulaFactory::make(std::move(n));
}

Formula make_connective(K kind, std::vector<Formula> kids) {
    Formula::Node n;
    n.kind = kind;
    n.kids = std::move(kids);
    return FormulaFactory::make(std::move(n));
}

Formula make_quantifier(K kind, std::string var, Formula body) {
    if (!is_identifier(var)) throw DomainError("invalid variable name '" + var + "'");
    Formula::Node n;
    n.kind = kind;
    n.var = std::move(var);
    n.kids.push_back(std::move(body));
    return FormulaFactory::make(std::move(n));
}

} // namespace

// ---------------------------------------------------------------- names

bool is_identifier(std::string_view name) {
    if (name.empty() || !std::isalpha(static_cast<unsigned char>(name.front()))) return false;
    return std::all_of(name.begin(), name.end(),
                       [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

Sort sort_of_name(std::string_view name) {
    return (!name.empty() && std::isupper(static_cast<unsigned char>(name.front()))) ? Sort::Set : Sort::Atom;
}

Term Term::var(std::string name) {
    if (!is_identifier(name)) throw DomainError("invalid variable name '" + name + "'");
    return Term(Kind::Var, std::move(name));
}

std::string fresh_name(std::string_view stem, const std::set<std::string>& used) {
    for (std::size_t i = 0;; ++i) {
        std::string candidate = std::string(stem) + std::to_string(i);
        if (!used.contains(candidate)) return candidate;
    }
}

// ---------------------------------------------------------------- accessors

Formula::Formula() : Formula(std::make_shared<const Node>()) {}

Formula::Kind Formula::kind() const noexcept { return node_->kind; }
const Term& Formula::lhs() const { return node_->t0; }
const Term& Formula::rhs() const { return node_->t1; }
const Formula& Formula::child(std::size_t i) const { return node_->kids.at(i); }
std::size_t Formula::arity() const noexcept { return node_->kids.size(); }
const std::string& Formula::var() const { return node_->var; }

bool Formula::is_atomic() const noexcept {
    switch (kind()) {
    case K::Eq:
    case K::Subset:
    case K::Exle:
    case K::At:
    case K::Mem: return true;
    default: return false;
    }
}

bool Formula::is_quantifier() const noexcept {
    switch (kind()) {
    case K::ExistsSet:
    case K::ForallSet:
    case K::ExistsAtom:
    case K::ForallAtom: return true;
    default: return false;
    }
}

bool Formula::is_binary() const noexcept {
    switch (kind()) {
    case K::And:
    case K::Or:
    case K::Implies:
    case K::Iff: return true;
    default: return false;
    }
}

bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    const auto& x = *a.node_;
    const auto& y = *b.node_;
    return x.kind == y.kind && x.t0 == y.t0 && x.t1 == y.t1 && x.var == y.var && x.kids == y.kids;
}

// ---------------------------------------------------------------- constructors

namespace fm {
Formula truth() { return make_connective(K::True, {}); }
Formula falsity() { return make_connective(K::False, {}); }
Formula eq(Term a, Term b) { return make_atomic(K::Eq, std::move(a), std::move(b)); }
Formula subset(Term a, Term b) { return make_atomic(K::Subset, std::move(a), std::move(b)); }
Formula exle(Term a, Term b) { return make_atomic(K::Exle, std::move(a), std::move(b)); }
Formula at(Term a) { return make_atomic(K::At, std::move(a), Term::bot()); }
Formula mem(Term atom, Term set) { return make_atomic(K::Mem, std::move(atom), std::move(set)); }
Formula neg(Formula f) { return make_connective(K::Not, {std::move(f)}); }
Formula conj(Formula a, Formula b) { return make_connective(K::And, {std::move(a), std::move(b)}); }
Formula disj(Formula a, Formula b) { return make_connective(K::Or, {std::move(a), std::move(b)}); }
Formula implies(Formula a, Formula b) { return make_connective(K::Implies, {std::move(a), std::move(b)}); }
Formula iff(Formula a, Formula b) { return make_connective(K::Iff, {std::move(a), std::move(b)}); }
Formula exists_set(std::string var, Formula body) { return make_quantifier(K::ExistsSet, std::move(var), std::move(body)); }
Formula forall_set(std::string var, Formula body) { return make_quantifier(K::ForallSet, std::move(var), std::move(body)); }
Formula exists_atom(std::string var, Formula body) { return make_quantifier(K::ExistsAtom, std::move(var), std::move(body)); }
Formula forall_atom(std::string var, Formula body) { return make_quantifier(K::ForallAtom, std::move(var), std::move(body)); }

Formula requantify(const Formula& q, std::string var, Formula body) {
    if (!q.is_quantifier()) throw DomainError("requantify: not a quantifier");
    return make_quantifier(q.kind(), std::move(var), std::move(body));
}

Formula rebuild(const Formula& f, std::span<const Formula> children) {
    if (f.is_quantifier()) return make_quantifier(f.kind(), f.var(), children[0]);
    return make_connective(f.kind(), std::vector<Formula>(children.begin(), children.end()));
}

Formula conj_all(std::span<const Formula> fs) {
    if (fs.empty()) return truth();
    Formula acc = fs[0];
    for (std::size_t i = 1; i < fs.size(); ++i) acc = conj(acc, fs[i]);
    return acc;
}

Formula disj_all(std::span<const Formula> fs) {
    if (fs.empty()) return falsity();
    Formula acc = fs[0];
    for (std::size_t i = 1; i < fs.size(); ++i) acc = disj(acc, fs[i]);
    return acc;
}

Formula mem(std::string_view atom, std::string_view set) {
    return mem(Term::var(std::string(atom)), Term::var(std::string(set)));
}

Formula less(std::string_view x, std::string_view y) {
    return exle(Term::var(std::string(x)), Term::var(std::string(y)));
}
} // namespace fm

// ---------------------------------------------------------------- analysis

namespace {

void collect_free(const Formula& f, std::vector<std::string>& bound, std::set<std::string>& out) {
    auto term = [&](const Term& t) {
        if (t.is_var() && std::find(bound.begin(), bound.end(), t.name()) == bound.end()) out.insert(t.name());
    };
    if (f.is_atomic()) {
        term(f.lhs());
        if (f.kind() != K::At) term(f.rhs());
        return;
    }
    if (f.is_quantifier()) {
        bound.push_back(f.var());
        collect_free(f.child(0), bound, out);
        bound.pop_back();
        return;
    }
    for (std::size_t i = 0; i < f.arity(); ++i) collect_free(f.child(i), bound, out);
}

bool mentions_extremum(const Term& t) { return t.kind() == Term::Kind::Min || t.kind() == Term::Kind::Max; }

} // namespace

std::set<std::string> free_vars(const Formula& f) {
    std::vector<std::string> bound;
    std::set<std::string> out;
    collect_free(f, bound, out);
    return out;
}

bool is_sentence(const Formula& f) { return free_vars(f).empty(); }

std::set<std::string> all_names(const Formula& f) {
    std::set<std::string> out;
    std::function<void(const Formula&)> walk = [&](const Formula& g) {
        if (g.is_atomic()) {
            if (g.lhs().is_var()) out.insert(g.lhs().name());
            if (g.kind() != K::At && g.rhs().is_var()) out.insert(g.rhs().name());
            return;
        }
        if (g.is_quantifier()) out.insert(g.var());
        for (std::size_t i = 0; i < g.arity(); ++i) walk(g.child(i));
    };
    walk(f);
    return out;
}

int quantifier_rank(const Formula& f) {
    int best = 0;
    for (std::size_t i = 0; i < f.arity(); ++i) best = std::max(best, quantifier_rank(f.child(i)));
    return best + (f.is_quantifier() ? 1 : 0);
}

namespace {

void check_sorts(const Formula& f, std::map<std::string, Sort>& bound) {
    auto sort_of = [&](const Term& t) {
        switch (t.kind()) {
        case Term::Kind::Var: {
            auto it = bound.find(t.name());
            return it != bound.end() ? it->second : sort_of_name(t.name());
        }
        case Term::Kind::Bot: return Sort::Set;
        default: return Sort::Atom;
        }
    };
    if (f.kind() == K::Mem) {
        if (sort_of(f.lhs()) != Sort::Atom)
            throw SortError("membership: '" + f.lhs().name() + "' must be atom-sorted");
        if (!f.rhs().is_var() || sort_of(f.rhs()) != Sort::Set)
            throw SortError("membership: container must be a set-sorted variable");
        return;
    }
    if (f.is_atomic()) return;
    if (f.is_quantifier()) {
        const bool atom = f.kind() == K::ExistsAtom || f.kind() == K::ForallAtom;
        auto inner = bound;
        inner[f.var()] = atom ? Sort::Atom : Sort::Set;
        check_sorts(f.child(0), inner);
        return;
    }
    for (std::size_t i = 0; i < f.arity(); ++i) check_sorts(f.child(i), bound);
}

} // namespace

void sort_check(const Formula& f) {
    std::map<std::string, Sort> bound;
    check_sorts(f, bound);
}

bool is_desugared(const Formula& f) {
    switch (f.kind()) {
    case K::Mem:
    case K::ExistsAtom:
    case K::ForallAtom: return false;
    default: break;
    }
    if (f.is_atomic()) return !mentions_extremum(f.lhs()) && !(f.kind() != K::At && mentions_extremum(f.rhs()));
    for (std::size_t i = 0; i < f.arity(); ++i)
        if (!is_desugared(f.child(i))) return false;
    return true;
}

// ---------------------------------------------------------------- desugar

namespace {

class Desugarer {
public:
    explicit Desugarer(std::set<std::string> used) : used_(std::move(used)) {}

    Formula run(const Formula& f) {
        switch (f.kind()) {
        case K::True:
        case K::False: return f;
        case K::ExistsAtom:
            return fm::exists_set(f.var(), fm::conj(fm::at(Term::var(f.var())), run(f.child(0))));
        case K::ForallAtom:
            return fm::forall_set(f.var(), fm::implies(fm::at(Term::var(f.var())), run(f.child(0))));
        default: break;
        }
        if (f.is_atomic()) return atomic(f);
        std::vector<Formula> kids;
        for (std::size_t i = 0; i < f.arity(); ++i) kids.push_back(run(f.child(i)));
        return fm::rebuild(f, kids);
    }

private:
    std::string fresh(std::string_view stem) {
        auto name = fresh_name(stem, used_);
        used_.insert(name);
        return name;
    }

    Formula extremal(const std::string& m, bool smallest) {
        const auto z = fresh("z");
        auto witness = smallest ? fm::exle(Term::var(z), Term::var(m)) : fm::exle(Term::var(m), Term::var(z));
        return fm::neg(fm::exists_set(z, fm::conj(fm::at(Term::var(z)), witness)));
    }

    Formula atomic(const Formula& f) {
        Term a = f.lhs();
        Term b = f.rhs();
        std::vector<std::pair<std::string, bool>> witnesses;  // (name, smallest)
        auto replace = [&](Term& t) {
            if (!mentions_extremum(t)) return;
            const bool smallest = t.kind() == Term::Kind::Min;
            const auto name = fresh(smallest ? "lo" : "hi");
            witnesses.emplace_back(name, smallest);
            t = Term::var(name);
        };
        replace(a);
        if (f.kind() != K::At) replace(b);

        Formula core;
        switch (f.kind()) {
        case K::Mem: core = fm::conj(fm::at(a), fm::subset(a, b)); break;
        case K::Eq: core = fm::eq(a, b); break;
        case K::Subset: core = fm::subset(a, b); break;
        case K::Exle: core = fm::exle(a, b); break;
        case K::At: core = fm::at(a); break;
        default: throw DomainError("desugar: unexpected atomic kind");
        }
        for (auto it = witnesses.rbegin(); it != witnesses.rend(); ++it) {
            const auto& [name, smallest] = *it;
            core = fm::exists_set(name, fm::conj(fm::conj(fm::at(Term::var(name)), extremal(name, smallest)), core));
        }
        return core;
    }

    std::set<std::string> used_;
};

Formula desugar_avoiding(const Formula& f, std::set<std::string> avoid) {
    auto used = all_names(f);
    used.merge(avoid);
    return Desugarer(std::move(used)).run(f);
}

Formula bound_to(const Formula& f, const std::string& x) {
    if (f.kind() == K::ExistsSet)
        return fm::exists_set(f.var(), fm::conj(fm::subset(Term::var(f.var()), Term::var(x)), bound_to(f.child(0), x)));
    if (f.kind() == K::ForallSet)
        return fm::forall_set(f.var(), fm::implies(fm::subset(Term::var(f.var()), Term::var(x)), bound_to(f.child(0), x)));
    if (f.is_atomic() || f.arity() == 0) return f;
    std::vector<Formula> kids;
    for (std::size_t i = 0; i < f.arity(); ++i) kids.push_back(bound_to(f.child(i), x));
    return fm::rebuild(f, kids);
}

} // namespace

Formula desugar(const Formula& f) { return desugar_avoiding(f, {}); }

Formula relativize(const Formula& f, std::string_view bound, RelativizeMode mode) {
    const std::string x(bound);
    if (!is_identifier(x)) throw DomainError("relativize: invalid bound name '" + x + "'");
    if (all_names(f).contains(x)) throw DomainError("relativize: bound variable '" + x + "' occurs in the formula");

    if (mode == RelativizeMode::ToElement) {
        if (sort_of_name(x) != Sort::Set) throw DomainError("relativize: element bound must be set-sorted");
        return bound_to(desugar_avoiding(f, {x}), x);
    }

    if (sort_of_name(x) != Sort::Atom) throw DomainError("relativize: atom bound must be atom-sorted");
    const auto g = desugar_avoiding(f, {x});
    auto used = all_names(g);
    used.insert(x);
    const auto below = fresh_name("B", used);
    used.insert(below);
    const auto z = fresh_name("z", used);
    // forall z. at(z) -> (z sub B <-> z << x & ~z = x)
    auto segment = fm::forall_set(
        z, fm::implies(fm::at(Term::var(z)),
                       fm::iff(fm::subset(Term::var(z), Term::var(below)),
                               fm::conj(fm::exle(Term::var(z), Term::var(x)), fm::neg(fm::eq(Term::var(z), Term::var(x)))))));
    return fm::exists_set(below, fm::conj(segment, bound_to(g, below)));
}

// ---------------------------------------------------------------- substitution / renaming

Formula substitute(const Formula& f, std::string_view var, const Term& replacement) {
    if (f.is_atomic()) {
        auto swap = [&](const Term& t) { return (t.is_var() && t.name() == var) ? replacement : t; };
        switch (f.kind()) {
        case K::Eq: return fm::eq(swap(f.lhs()), swap(f.rhs()));
        case K::Subset: return fm::subset(swap(f.lhs()), swap(f.rhs()));
        case K::Exle: return fm::exle(swap(f.lhs()), swap(f.rhs()));
        case K::At: return fm::at(swap(f.lhs()));
        default: return fm::mem(swap(f.lhs()), swap(f.rhs()));
        }
    }
    if (f.is_quantifier()) {
        if (f.var() == var) return f;
        if (!free_vars(f.child(0)).contains(std::string(var))) return f;
        if (replacement.is_var() && replacement.name() == f.var()) {
            auto used = all_names(f);
            used.insert(replacement.name());
            const auto renamed = fresh_name(f.var() + "_", used);
            auto body = substitute(f.child(0), f.var(), Term::var(renamed));
            return fm::requantify(f, renamed, substitute(body, var, replacement));
        }
        return fm::requantify(f, f.var(), substitute(f.child(0), var, replacement));
    }
    if (f.arity() == 0) return f;
    std::vector<Formula> kids;
    for (std::size_t i = 0; i < f.arity(); ++i) kids.push_back(substitute(f.child(i), var, replacement));
    return fm::rebuild(f, kids);
}

namespace {

Formula rename_walk(const Formula& f, std::map<std::string, std::string>& scope, std::set<std::string>& used) {
    auto map_term = [&](const Term& t) {
        if (!t.is_var()) return t;
        auto it = scope.find(t.name());
        return it == scope.end() ? t : Term::var(it->second);
    };
    if (f.is_atomic()) {
        switch (f.kind()) {
        case K::Eq: return fm::eq(map_term(f.lhs()), map_term(f.rhs()));
        case K::Subset: return fm::subset(map_term(f.lhs()), map_term(f.rhs()));
        case K::Exle: return fm::exle(map_term(f.lhs()), map_term(f.rhs()));
        case K::At: return fm::at(map_term(f.lhs()));
        default: return fm::mem(map_term(f.lhs()), map_term(f.rhs()));
        }
    }
    if (f.is_quantifier()) {
        std::string name = f.var();
        if (used.contains(name)) name = fresh_name(f.var() + "_", used);
        used.insert(name);
        auto previous = scope.find(f.var()) != scope.end() ? std::optional<std::string>(scope[f.var()]) : std::nullopt;
        scope[f.var()] = name;
        auto body = rename_walk(f.child(0), scope, used);
        if (previous)
            scope[f.var()] = *previous;
        else
            scope.erase(f.var());
        return fm::requantify(f, name, body);
    }
    if (f.arity() == 0) return f;
    std::vector<Formula> kids;
    for (std::size_t i = 0; i < f.arity(); ++i) kids.push_back(rename_walk(f.child(i), scope, used));
    return fm::rebuild(f, kids);
}

} // namespace

Formula alpha_rename(const Formula& f) {
    std::map<std::string, std::string> scope;
    auto used = free_vars(f);
    return rename_walk(f, scope, used);
}

// ---------------------------------------------------------------- miniscoping

namespace {

int cost(const Formula& f) {
    int c = f.is_quantifier() ? 1 : 0;
    for (std::size_t i = 0; i < f.arity(); ++i) c += cost(f.child(i));
    return c;
}

void flatten(const Formula& f, K kind, std::vector<Formula>& out) {
    if (f.kind() == kind) {
        flatten(f.child(0), kind, out);
        flatten(f.child(1), kind, out);
    } else {
        out.push_back(f);
    }
}

void sort_by_cost(std::vector<Formula>& fs) {
    std::stable_sort(fs.begin(), fs.end(), [](const Formula& a, const Formula& b) { return cost(a) < cost(b); });
}

bool mentions(const Formula& f, const std::string& v) { return free_vars(f).contains(v); }

bool is_set_quantifier(K k) { return k == K::ExistsSet || k == K::ForallSet; }

Formula mini(const Formula& f) {
    if (f.is_atomic() || f.arity() == 0) return f;
    if (!f.is_quantifier()) {
        std::vector<Formula> kids;
        for (std::size_t i = 0; i < f.arity(); ++i) kids.push_back(mini(f.child(i)));
        return fm::rebuild(f, kids);
    }

    const auto& v = f.var();
    const auto body = mini(f.child(0));
    const bool existential = f.kind() == K::ExistsSet || f.kind() == K::ExistsAtom;
    // Dropping a vacuous quantifier is only sound when its range is nonempty.
    const bool nonempty_range = is_set_quantifier(f.kind());

    if (existential) {
        std::vector<Formula> parts, outer, inner;
        flatten(body, K::And, parts);
        for (auto& p : parts) (mentions(p, v) ? inner : outer).push_back(p);
        sort_by_cost(outer);
        sort_by_cost(inner);
        if (inner.empty() && nonempty_range) return fm::conj_all(outer);
        outer.push_back(fm::requantify(f, v, fm::conj_all(inner)));
        return fm::conj_all(outer);
    }

    if (body.kind() == K::Or) {
        std::vector<Formula> parts, outer, inner;
        flatten(body, K::Or, parts);
        for (auto& p : parts) (mentions(p, v) ? inner : outer).push_back(p);
        sort_by_cost(outer);
        sort_by_cost(inner);
        if (inner.empty() && nonempty_range) return fm::disj_all(outer);
        outer.push_back(fm::requantify(f, v, fm::disj_all(inner)));
        return fm::disj_all(outer);
    }

    if (body.kind() == K::Implies) {
        std::vector<Formula> premises;
        Formula conclusion = body;
        while (conclusion.kind() == K::Implies) {
            flatten(conclusion.child(0), K::And, premises);
            conclusion = conclusion.child(1);
        }
        std::vector<Formula> outer, inner;
        for (auto& p : premises) (mentions(p, v) ? inner : outer).push_back(p);
        sort_by_cost(outer);
        sort_by_cost(inner);
        Formula scoped;
        if (inner.empty())
            scoped = (nonempty_range && !mentions(conclusion, v)) ? conclusion : fm::requantify(f, v, conclusion);
        else
            scoped = fm::requantify(f, v, fm::implies(fm::conj_all(inner), conclusion));
        return outer.empty() ? scoped : fm::implies(fm::conj_all(outer), scoped);
    }

    if (!mentions(body, v) && nonempty_range) return body;
    return fm::requantify(f, v, body);
}

} // namespace

Formula miniscope(const Formula& f) { return mini(f); }

} // namespace finord
