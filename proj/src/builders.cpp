#include <algorithm>

#include "finord/errors.hpp"
#include "finord/sentences.hpp"

namespace finord {

namespace {

Term var(const std::string& name) { return Term::var(name); }

std::string colour(std::uint64_t i) { return "A" + std::to_string(i); }

} // namespace

Formula build_psi(CountKind kind, std::uint64_t n) {
    if (kind == CountKind::Exactly) {
        if (n == 0) return fm::neg(build_psi(CountKind::Greater, 0));
        return fm::conj(build_psi(CountKind::Greater, n - 1), fm::neg(build_psi(CountKind::Greater, n)));
    }
    std::vector<std::string> names;
    for (std::uint64_t i = 0; i <= n; ++i) names.push_back("x" + std::to_string(i));
    std::vector<Formula> distinct;
    for (std::size_t i = 0; i < names.size(); ++i)
        for (std::size_t j = i + 1; j < names.size(); ++j) distinct.push_back(fm::neg(fm::eq(var(names[i]), var(names[j]))));
    Formula body = fm::conj_all(distinct);
    for (auto it = names.rbegin(); it != names.rend(); ++it) body = fm::exists_atom(*it, body);
    return body;
}

Formula successor_formula(const std::string& x, const std::string& y, const std::set<std::string>& avoid) {
    auto used = avoid;
    used.insert(x);
    used.insert(y);
    const auto z = fresh_name("z", used);
    return fm::conj(fm::less(x, y), fm::neg(fm::exists_atom(z, fm::conj(fm::less(x, z), fm::less(z, y)))));
}

Formula downward_closed(const std::string& set_var, const std::set<std::string>& avoid) {
    auto used = avoid;
    used.insert(set_var);
    const auto x = fresh_name("x", used);
    used.insert(x);
    const auto y = fresh_name("y", used);
    return fm::forall_atom(
        x, fm::forall_atom(y, fm::implies(fm::conj(fm::mem(y, set_var), fm::less(x, y)), fm::mem(x, set_var))));
}

Formula build_rho(std::uint64_t d, std::uint64_t h) {
    if (d == 0 || h == 0 || h > d)
        throw DomainError("build_rho: need 1 <= h <= d, got d=" + std::to_string(d) + ", h=" + std::to_string(h));

    std::vector<Formula> parts;
    for (std::uint64_t i = 1; i <= d; ++i) parts.push_back(fm::neg(fm::eq(var(colour(i)), Term::bot())));
    parts.push_back(fm::mem(Term::min(), var(colour(1))));
    parts.push_back(fm::mem(Term::max(), var(colour(h))));
    for (std::uint64_t i = 1; i <= d; ++i)
        for (std::uint64_t j = i + 1; j <= d; ++j)
            parts.push_back(fm::forall_atom("x", fm::neg(fm::conj(fm::mem("x", colour(i)), fm::mem("x", colour(j))))));

    std::vector<Formula> covering;
    for (std::uint64_t i = 1; i <= d; ++i) covering.push_back(fm::mem("x", colour(i)));
    parts.push_back(fm::forall_atom("x", fm::disj_all(covering)));

    for (std::uint64_t i = 1; i <= d; ++i) {
        const auto next = colour(i % d + 1);
        auto step = fm::implies(fm::conj(fm::mem("x", colour(i)), successor_formula("x", "y")), fm::mem("y", next));
        parts.push_back(fm::forall_atom("x", fm::forall_atom("y", step)));
    }

    Formula body = fm::conj_all(parts);
    for (std::uint64_t i = d; i >= 1; --i) body = fm::exists_set(colour(i), body);
    return body;
}

Formula build_sum(const Formula& f, const Formula& g) {
    if (!is_sentence(f) || !is_sentence(g)) throw DomainError("build_sum: operands must be sentences");
    auto used = all_names(desugar(f));
    used.merge(all_names(desugar(g)));
    const auto left = fresh_name("X", used);
    used.insert(left);
    const auto right = fresh_name("Y", used);
    used.insert(right);
    const auto z = fresh_name("z", used);

    auto partition = fm::forall_atom(
        z, fm::conj(fm::disj(fm::mem(z, left), fm::mem(z, right)), fm::neg(fm::conj(fm::mem(z, left), fm::mem(z, right)))));
    std::vector<Formula> parts{partition, downward_closed(left, used), relativize(f, left, RelativizeMode::ToElement),
                               relativize(g, right, RelativizeMode::ToElement)};
    return fm::exists_set(left, fm::exists_set(right, fm::conj_all(parts)));
}

Formula build_comp(const Formula& eta, const std::string& atom_var, const std::vector<std::string>& params) {
    if (sort_of_name(atom_var) != Sort::Atom) throw DomainError("build_comp: '" + atom_var + "' is not atom-sorted");
    for (const auto& p : params)
        if (sort_of_name(p) != Sort::Set) throw DomainError("build_comp: parameter '" + p + "' is not set-sorted");
    for (const auto& v : free_vars(eta))
        if (v != atom_var && std::find(params.begin(), params.end(), v) == params.end())
            throw DomainError("build_comp: free variable '" + v + "' is not declared");

    auto used = all_names(eta);
    used.insert(atom_var);
    used.insert(params.begin(), params.end());
    const auto witness = fresh_name("S", used);
    Formula body =
        fm::exists_set(witness, fm::forall_atom(atom_var, fm::iff(fm::mem(atom_var, witness), eta)));
    for (auto it = params.rbegin(); it != params.rend(); ++it) body = fm::forall_set(*it, body);
    return body;
}

Formula build_induction(const Formula& phi, const std::string& atom_var) {
    if (sort_of_name(atom_var) != Sort::Atom) throw DomainError("build_induction: '" + atom_var + "' is not atom-sorted");
    for (const auto& v : free_vars(phi))
        if (v != atom_var) throw DomainError("build_induction: unexpected free variable '" + v + "'");

    auto used = all_names(phi);
    used.insert(atom_var);
    const auto next = fresh_name("y", used);
    used.insert(next);

    auto base = substitute(phi, atom_var, Term::min());
    auto step_premise = fm::conj(fm::conj(phi, fm::exle(var(atom_var), Term::max())), successor_formula(atom_var, next, used));
    auto step = fm::forall_atom(
        atom_var, fm::forall_atom(next, fm::implies(step_premise, substitute(phi, atom_var, var(next)))));
    return fm::implies(fm::conj(base, step), fm::forall_atom(atom_var, phi));
}

Formula build_normal_form(const NormalFormDescriptor& nf) {
    std::vector<Formula> parts;
    for (auto i : nf.i_set) parts.push_back(build_psi(CountKind::Exactly, i));
    if (!nf.r_set.empty()) {
        std::vector<Formula> congruences;
        for (auto h : nf.r_set) congruences.push_back(build_rho(nf.period, h));
        parts.push_back(fm::conj(build_psi(CountKind::Greater, nf.threshold), fm::disj_all(congruences)));
    }
    return fm::disj_all(parts);
}

std::vector<NamedSentence> tmfin_axioms() {
    static const std::pair<const char*, const char*> table[] = {
        {"subset-reflexive", "all2 X. X sub X"},
        {"subset-antisymmetric", "all2 X Y. X sub Y & Y sub X -> X = Y"},
        {"subset-transitive", "all2 X Y Z. X sub Y & Y sub Z -> X sub Z"},
        {"bottom-least", "all2 X. bot sub X"},
        {"atoms-minimal", "all2 X. at(X) <-> ~X = bot & (all2 Y. Y sub X -> Y = bot | Y = X)"},
        {"atomic", "all2 X. ~X = bot -> (ex1 x. X(x))"},
        {"subset-by-atoms", "all2 X Y. X sub Y <-> (all1 x. X(x) -> Y(x))"},
        {"extensional", "all2 X Y. (all1 x. X(x) <-> Y(x)) -> X = Y"},
        {"complement", "all2 X. ex2 Y. all1 x. Y(x) <-> ~X(x)"},
        {"meet", "all2 X Y. ex2 Z. all1 x. Z(x) <-> X(x) & Y(x)"},
        {"join", "all2 X Y. ex2 Z. all1 x. Z(x) <-> X(x) | Y(x)"},
        {"order-irreflexive", "all1 x. ~x < x"},
        {"order-transitive", "all1 x y z. x < y & y < z -> x < z"},
        {"order-total", "all1 x y. x < y | x = y | y < x"},
        {"order-lifts-to-sets", "all2 X Y. X << Y <-> (ex1 x y. X(x) & Y(y) & x < y)"},
        {"endpoints", "(ex1 x. true) -> (ex1 x. all1 y. ~y < x) & (ex1 x. all1 y. ~x < y)"},
        {"successors", "all1 x. (ex1 y. x < y) -> (ex1 y. x < y & ~(ex1 z. x < z & z < y))"},
        {"predecessors", "all1 x. (ex1 y. y < x) -> (ex1 y. y < x & ~(ex1 z. y < z & z < x))"},
        {"least-atom", "all2 X. ~X = bot -> (ex1 x. X(x) & (all1 y. y << x -> ~X(y)))"},
        {"greatest-atom", "all2 X. ~X = bot -> (ex1 x. X(x) & (all1 y. x << y -> ~X(y)))"},
    };
    std::vector<NamedSentence> out;
    for (const auto& [name, text] : table) out.push_back({name, parse_formula(text)});
    return out;
}

} // namespace finord
