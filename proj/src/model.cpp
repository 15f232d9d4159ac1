#include "finord/model.hpp"

#include <exception>
#include <functional>
#include <optional>

#include "finord/errors.hpp"

namespace finord {

FiniteModel::FiniteModel(unsigned atoms) : n_(atoms) {
    if (atoms > kMaxAtoms) throw ResourceError("model", "at most " + std::to_string(kMaxAtoms) + " atoms supported");
}

bool ProductStructure::subset(const PairElement& a, const PairElement& b) const noexcept {
    return a.left.subset_of(b.left) && a.right.subset_of(b.right);
}

bool ProductStructure::exle(const PairElement& a, const PairElement& b) const noexcept {
    return (!a.left.empty() && !b.right.empty()) || a.left.exle(b.left) || a.right.exle(b.right);
}

bool ProductStructure::is_atom(const PairElement& a) const noexcept {
    return (a.left.is_atom() && a.right.empty()) || (a.left.empty() && a.right.is_atom());
}

ProductStructure product(const FiniteModel& left, const FiniteModel& right) { return ProductStructure(left, right); }

namespace {

using K = Formula::Kind;

// ------------------------------------------------------------ structure views

struct MsoView {
    using Elem = Subset;
    unsigned n;

    bool subset(Elem a, Elem b) const { return a.subset_of(b); }
    bool exle(Elem a, Elem b) const { return a.exle(b); }
    bool is_atom(Elem a) const { return a.is_atom(); }
    Elem bottom() const { return {}; }
    bool has_atoms() const { return n > 0; }
    Elem min_atom() const { return Subset::atom(0); }
    Elem max_atom() const { return Subset::atom(n - 1); }

    template <class F> bool any_element(F&& f) const {
        const std::uint64_t size = std::uint64_t{1} << n;
        for (std::uint64_t i = 0; i < size; ++i)
            if (f(Subset(i))) return true;
        return false;
    }
    template <class F> bool any_atom(F&& f) const {
        for (unsigned i = 0; i < n; ++i)
            if (f(Subset::atom(i))) return true;
        return false;
    }
    template <class F> bool any_below(Elem bound, F&& f) const {
        const auto b = bound.bits();
        for (std::uint64_t s = b;; s = (s - 1) & b) {
            if (f(Subset(s))) return true;
            if (s == 0) return false;
        }
    }
    template <class F> bool any_atom_in(Elem bound, F&& f) const {
        for (auto b = bound.bits(); b != 0; b &= b - 1)
            if (f(Subset(b & -b))) return true;
        return false;
    }
};

struct PairView {
    using Elem = PairElement;
    const ProductStructure* p;

    bool subset(const Elem& a, const Elem& b) const { return p->subset(a, b); }
    bool exle(const Elem& a, const Elem& b) const { return p->exle(a, b); }
    bool is_atom(const Elem& a) const { return p->is_atom(a); }
    Elem bottom() const { return {}; }
    bool has_atoms() const { return p->left().atoms() + p->right().atoms() > 0; }
    // Extremal atoms are located through the structure's own order.
    Elem min_atom() const { return extremal(true); }
    Elem max_atom() const { return extremal(false); }

    Elem extremal(bool smallest) const {
        std::optional<Elem> found;
        any_atom([&](const Elem& a) {
            const bool beaten = any_atom([&](const Elem& b) { return smallest ? exle(b, a) : exle(a, b); });
            if (!beaten) found = a;
            return !beaten;
        });
        return found.value_or(Elem{});
    }

    template <class F> bool any_element(F&& f) const {
        const auto l = p->left().universe_size();
        const auto r = p->right().universe_size();
        for (std::uint64_t a = 0; a < l; ++a)
            for (std::uint64_t b = 0; b < r; ++b)
                if (f(Elem{Subset(a), Subset(b)})) return true;
        return false;
    }
    template <class F> bool any_atom(F&& f) const {
        for (unsigned i = 0; i < p->left().atoms(); ++i)
            if (f(Elem{Subset::atom(i), {}})) return true;
        for (unsigned i = 0; i < p->right().atoms(); ++i)
            if (f(Elem{{}, Subset::atom(i)})) return true;
        return false;
    }
    template <class F> bool any_below(const Elem& bound, F&& f) const {
        const auto lb = bound.left.bits();
        const auto rb = bound.right.bits();
        for (std::uint64_t a = lb;; a = (a - 1) & lb) {
            for (std::uint64_t b = rb;; b = (b - 1) & rb) {
                if (f(Elem{Subset(a), Subset(b)})) return true;
                if (b == 0) break;
            }
            if (a == 0) return false;
        }
    }
    template <class F> bool any_atom_in(const Elem& bound, F&& f) const {
        for (auto b = bound.left.bits(); b != 0; b &= b - 1)
            if (f(Elem{Subset(b & -b), {}})) return true;
        for (auto b = bound.right.bits(); b != 0; b &= b - 1)
            if (f(Elem{{}, Subset(b & -b)})) return true;
        return false;
    }
};

// ------------------------------------------------------------ slot binding

struct ETerm {
    enum class Kind : std::uint8_t { Slot, Bot, Min, Max } kind = Kind::Bot;
    int slot = -1;
};

enum class Range : std::uint8_t { All, Atoms, Below, AtomsIn };

struct ENode {
    K kind = K::True;
    ETerm a, b;
    int kids[2] = {-1, -1};
    int slot = -1;           // bound variable
    Range range = Range::All;
    int guard = -1;          // slot of the bounding element for Below/AtomsIn
};

struct Program {
    std::vector<ENode> nodes;
    int root = -1;
    int slots = 0;
    int depth = 0;            // set nesting
    bool uses_extrema = false;
};

void flatten(const Formula& f, K kind, std::vector<Formula>& out) {
    if (f.kind() == kind) {
        flatten(f.child(0), kind, out);
        flatten(f.child(1), kind, out);
    } else {
        out.push_back(f);
    }
}

class Binder {
public:
    Binder(Program& prog, std::map<std::string, int> free_slots) : prog_(prog) {
        for (auto& [name, slot] : free_slots) scope_[name].push_back(slot);
        prog_.slots = static_cast<int>(free_slots.size());
    }

    int bind(const Formula& f, int depth) {
        ENode node;
        node.kind = f.kind();
        if (f.is_atomic()) {
            node.a = term(f.lhs());
            if (f.kind() != K::At) node.b = term(f.rhs());
        } else if (f.is_quantifier()) {
            node.slot = prog_.slots++;
            classify(f, node);
            const bool counted = node.range == Range::All || node.range == Range::Below;
            const int inner = depth + (counted ? 1 : 0);
            prog_.depth = std::max(prog_.depth, inner);
            scope_[f.var()].push_back(node.slot);
            node.kids[0] = bind(f.child(0), inner);
            scope_[f.var()].pop_back();
        } else {
            for (std::size_t i = 0; i < f.arity(); ++i) node.kids[i] = bind(f.child(i), depth);
        }
        prog_.nodes.push_back(node);
        return static_cast<int>(prog_.nodes.size()) - 1;
    }

private:
    ETerm term(const Term& t) {
        switch (t.kind()) {
        case Term::Kind::Bot: return {ETerm::Kind::Bot, -1};
        case Term::Kind::Min: prog_.uses_extrema = true; return {ETerm::Kind::Min, -1};
        case Term::Kind::Max: prog_.uses_extrema = true; return {ETerm::Kind::Max, -1};
        default: break;
        }
        auto it = scope_.find(t.name());
        if (it == scope_.end() || it->second.empty()) throw DomainError("evaluate: unbound variable '" + t.name() + "'");
        return {ETerm::Kind::Slot, it->second.back()};
    }

    int lookup(const Term& t) const {
        if (!t.is_var()) return -1;
        auto it = scope_.find(t.name());
        return (it == scope_.end() || it->second.empty()) ? -1 : it->second.back();
    }

    // Guards are conjuncts (for exists) or premises (for forall) that confine
    // the bound variable to atoms and/or below an outer element.
    void classify(const Formula& q, ENode& node) const {
        const bool existential = q.kind() == K::ExistsSet || q.kind() == K::ExistsAtom;
        bool atoms = q.kind() == K::ExistsAtom || q.kind() == K::ForallAtom;
        std::vector<Formula> guards;
        const auto& body = q.child(0);
        if (existential) {
            flatten(body, K::And, guards);
        } else {
            Formula rest = body;
            while (rest.kind() == K::Implies) {
                flatten(rest.child(0), K::And, guards);
                rest = rest.child(1);
            }
        }
        const auto& v = q.var();
        auto is_v = [&](const Term& t) { return t.is_var() && t.name() == v; };
        for (const auto& g : guards) {
            if (g.kind() == K::At && is_v(g.lhs())) atoms = true;
            int outer = -1;
            if (g.kind() == K::Subset && is_v(g.lhs()) && !is_v(g.rhs())) outer = lookup(g.rhs());
            if (g.kind() == K::Mem && is_v(g.lhs()) && !is_v(g.rhs())) {
                outer = lookup(g.rhs());
                atoms = true;
            }
            if (outer >= 0 && node.guard < 0) node.guard = outer;
        }
        if (atoms)
            node.range = node.guard >= 0 ? Range::AtomsIn : Range::Atoms;
        else
            node.range = node.guard >= 0 ? Range::Below : Range::All;
    }

    Program& prog_;
    std::map<std::string, std::vector<int>> scope_;
};

// ------------------------------------------------------------ evaluation

template <class View> class Machine {
public:
    using Elem = typename View::Elem;

    Machine(const View& view, const Program& prog, std::vector<Elem> env)
        : view_(view), prog_(prog), env_(std::move(env)) {
        env_.resize(prog.slots);
        if (prog.uses_extrema && view.has_atoms()) {
            min_ = view.min_atom();
            max_ = view.max_atom();
        }
    }

    bool run() { return eval(prog_.root); }

private:
    const Elem& value(const ETerm& t) const {
        switch (t.kind) {
        case ETerm::Kind::Slot: return env_[t.slot];
        case ETerm::Kind::Min: return min_;
        case ETerm::Kind::Max: return max_;
        default: return bot_;
        }
    }

    bool eval(int idx) {
        const ENode& n = prog_.nodes[idx];
        const bool extremum_missing =
            !view_.has_atoms() && (n.a.kind == ETerm::Kind::Min || n.a.kind == ETerm::Kind::Max ||
                                   n.b.kind == ETerm::Kind::Min || n.b.kind == ETerm::Kind::Max);
        switch (n.kind) {
        case K::True: return true;
        case K::False: return false;
        case K::Eq: return !extremum_missing && value(n.a) == value(n.b);
        case K::Subset: return !extremum_missing && view_.subset(value(n.a), value(n.b));
        case K::Exle: return !extremum_missing && view_.exle(value(n.a), value(n.b));
        case K::At: return !extremum_missing && view_.is_atom(value(n.a));
        case K::Mem:
            return !extremum_missing && view_.is_atom(value(n.a)) && view_.subset(value(n.a), value(n.b));
        case K::Not: return !eval(n.kids[0]);
        case K::And: return eval(n.kids[0]) && eval(n.kids[1]);
        case K::Or: return eval(n.kids[0]) || eval(n.kids[1]);
        case K::Implies: return !eval(n.kids[0]) || eval(n.kids[1]);
        case K::Iff: return eval(n.kids[0]) == eval(n.kids[1]);
        case K::ExistsSet:
        case K::ExistsAtom: return search(n, true);
        case K::ForallSet:
        case K::ForallAtom: return !search(n, false);
        }
        return false;
    }

    // Looks for a witness (existential) or a counterexample (universal).
    bool search(const ENode& n, bool want) {
        auto visit = [&](const Elem& e) {
            env_[n.slot] = e;
            return eval(n.kids[0]) == want;
        };
        switch (n.range) {
        case Range::Atoms: return view_.any_atom(visit);
        case Range::AtomsIn: return view_.any_atom_in(Elem(env_[n.guard]), visit);
        case Range::Below: return view_.any_below(Elem(env_[n.guard]), visit);
        default: return view_.any_element(visit);
        }
    }

    const View& view_;
    const Program& prog_;
    std::vector<Elem> env_;
    Elem min_{}, max_{}, bot_{};
};

template <class Elem>
Program compile_program(const Formula& f, const std::map<std::string, Elem>& env, std::vector<Elem>& values,
                        const std::function<bool(const Elem&)>& is_atom) {
    std::map<std::string, int> slots;
    for (const auto& name : free_vars(f)) {
        auto it = env.find(name);
        if (it == env.end()) throw DomainError("evaluate: unbound variable '" + name + "'");
        if (sort_of_name(name) == Sort::Atom && !is_atom(it->second))
            throw DomainError("evaluate: atom variable '" + name + "' must be assigned an atom");
        slots[name] = static_cast<int>(values.size());
        values.push_back(it->second);
    }
    Program prog;
    Binder binder(prog, slots);
    prog.root = binder.bind(miniscope(f), 0);
    return prog;
}

void check_depth(const Program& prog, const EvalLimits& limits) {
    if (prog.depth > limits.max_set_nesting)
        throw ResourceError("evaluate", "set quantifier nesting " + std::to_string(prog.depth) + " exceeds bound " +
                                            std::to_string(limits.max_set_nesting));
}

} // namespace

int set_nesting(const Formula& f) {
    Program prog;
    std::map<std::string, int> slots;
    for (const auto& name : free_vars(f)) slots.emplace(name, static_cast<int>(slots.size()));
    Binder binder(prog, slots);
    prog.root = binder.bind(miniscope(f), 0);
    return prog.depth;
}

bool evaluate(const FiniteModel& m, const Formula& f, const Assignment& env, const EvalLimits& limits) {
    if (m.atoms() > limits.max_atoms)
        throw ResourceError("evaluate", "model with " + std::to_string(m.atoms()) + " atoms exceeds bound " +
                                            std::to_string(limits.max_atoms));
    for (const auto& [name, value] : env)
        if (!value.subset_of(m.top())) throw DomainError("evaluate: value of '" + name + "' is not an element of the model");
    std::vector<Subset> values;
    auto prog = compile_program<Subset>(f, env, values, [](const Subset& s) { return s.is_atom(); });
    check_depth(prog, limits);
    MsoView view{m.atoms()};
    return Machine<MsoView>(view, prog, std::move(values)).run();
}

bool evaluate(const ProductStructure& p, const Formula& f, const PairAssignment& env, const EvalLimits& limits) {
    if (p.left().atoms() + p.right().atoms() > limits.max_atoms)
        throw ResourceError("evaluate", "product structure exceeds the atom bound " + std::to_string(limits.max_atoms));
    std::vector<PairElement> values;
    auto prog = compile_program<PairElement>(f, env, values, [&](const PairElement& e) { return p.is_atom(e); });
    check_depth(prog, limits);
    PairView view{&p};
    return Machine<PairView>(view, prog, std::move(values)).run();
}

// ------------------------------------------------------------ reference evaluator

namespace {

struct Reference {
    unsigned n;
    Assignment env;

    std::optional<Subset> value(const Term& t) const {
        switch (t.kind()) {
        case Term::Kind::Bot: return Subset{};
        case Term::Kind::Min: return n ? std::optional(Subset::atom(0)) : std::nullopt;
        case Term::Kind::Max: return n ? std::optional(Subset::atom(n - 1)) : std::nullopt;
        default: break;
        }
        auto it = env.find(t.name());
        if (it == env.end()) throw DomainError("evaluate: unbound variable '" + t.name() + "'");
        return it->second;
    }

    bool eval(const Formula& f) {
        if (f.is_atomic()) {
            auto a = value(f.lhs());
            auto b = f.kind() == K::At ? std::optional(Subset{}) : value(f.rhs());
            if (!a || !b) return false;
            switch (f.kind()) {
            case K::Eq: return *a == *b;
            case K::Subset: return a->subset_of(*b);
            case K::Exle: return a->exle(*b);
            case K::At: return a->is_atom();
            default: return a->is_atom() && a->subset_of(*b);
            }
        }
        switch (f.kind()) {
        case K::True: return true;
        case K::False: return false;
        case K::Not: return !eval(f.child(0));
        case K::And: return eval(f.child(0)) && eval(f.child(1));
        case K::Or: return eval(f.child(0)) || eval(f.child(1));
        case K::Implies: return !eval(f.child(0)) || eval(f.child(1));
        case K::Iff: return eval(f.child(0)) == eval(f.child(1));
        default: break;
        }
        const bool atoms = f.kind() == K::ExistsAtom || f.kind() == K::ForallAtom;
        const bool existential = f.kind() == K::ExistsAtom || f.kind() == K::ExistsSet;
        auto saved = env.find(f.var()) != env.end() ? std::optional(env[f.var()]) : std::nullopt;
        bool result = !existential;
        const std::uint64_t size = std::uint64_t{1} << n;
        for (std::uint64_t i = 0; i < size; ++i) {
            Subset s(i);
            if (atoms && !s.is_atom()) continue;
            env[f.var()] = s;
            if (eval(f.child(0)) == existential) {
                result = existential;
                break;
            }
        }
        if (saved)
            env[f.var()] = *saved;
        else
            env.erase(f.var());
        return result;
    }
};

} // namespace

bool evaluate_reference(const FiniteModel& m, const Formula& f, const Assignment& env) {
    for (const auto& name : free_vars(f))
        if (!env.contains(name)) throw DomainError("evaluate: unbound variable '" + name + "'");
    Reference r{m.atoms(), env};
    return r.eval(f);
}

// ------------------------------------------------------------ spectra by enumeration

std::vector<bool> bruteforce_spectrum_serial(const Formula& sentence, unsigned max_n, const EvalLimits& limits) {
    if (!is_sentence(sentence)) throw DomainError("bruteforce_spectrum: formula has free variables");
    std::vector<bool> out(max_n + 1);
    for (unsigned n = 0; n <= max_n; ++n) out[n] = evaluate(FiniteModel(n), sentence, {}, limits);
    return out;
}

std::vector<bool> bruteforce_spectrum(const Formula& sentence, unsigned max_n, const EvalLimits& limits) {
    if (!is_sentence(sentence)) throw DomainError("bruteforce_spectrum: formula has free variables");
    if (max_n > limits.max_atoms)
        throw ResourceError("evaluate", "model with " + std::to_string(max_n) + " atoms exceeds bound " +
                                            std::to_string(limits.max_atoms));
    std::vector<char> member(max_n + 1, 0);
    std::exception_ptr failure;
    const int count = static_cast<int>(max_n) + 1;
    // Larger models dominate; hand them out first.
#pragma omp parallel for schedule(dynamic, 1)
    for (int i = 0; i < count; ++i) {
        const unsigned n = static_cast<unsigned>(count - 1 - i);
        try {
            member[n] = evaluate(FiniteModel(n), sentence, {}, limits) ? 1 : 0;
        } catch (...) {
#pragma omp critical(finord_bruteforce_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return {member.begin(), member.end()};
}

// ------------------------------------------------------------ canonical isomorphism

namespace {

void check_iso_bounds(const ProductStructure& p, const IsoLimits& limits) {
    if (p.left().atoms() + p.right().atoms() > limits.max_total_atoms)
        throw ResourceError("canonical_iso_check", "m+n exceeds bound " + std::to_string(limits.max_total_atoms));
}

PairElement pair_at(const ProductStructure& p, std::uint64_t index) {
    const auto l = p.left().universe_size();
    return {Subset(index % l), Subset(index / l)};
}

Subset image(const ProductStructure& p, const PairElement& e) {
    return Subset(e.left.bits() | (e.right.bits() << p.left().atoms()));
}

bool preserves_from(const ProductStructure& p, std::uint64_t i, std::uint64_t size) {
    const auto a = pair_at(p, i);
    const auto fa = image(p, a);
    if (p.is_atom(a) != fa.is_atom()) return false;
    for (std::uint64_t j = 0; j < size; ++j) {
        const auto b = pair_at(p, j);
        const auto fb = image(p, b);
        if (p.subset(a, b) != fa.subset_of(fb)) return false;
        if (p.exle(a, b) != fa.exle(fb)) return false;
        if ((a == b) != (fa == fb)) return false;
    }
    return true;
}

bool bijective(const ProductStructure& p) {
    const std::uint64_t target = std::uint64_t{1} << (p.left().atoms() + p.right().atoms());
    if (p.universe_size() != target) return false;
    std::vector<char> hit(target, 0);
    for (std::uint64_t i = 0; i < target; ++i) {
        const auto img = image(p, pair_at(p, i)).bits();
        if (img >= target || hit[img]) return false;
        hit[img] = 1;
    }
    return image(p, p.bottom()).empty();
}

} // namespace

bool canonical_iso_check_serial(const ProductStructure& p, const IsoLimits& limits) {
    check_iso_bounds(p, limits);
    if (!bijective(p)) return false;
    const auto size = p.universe_size();
    for (std::uint64_t i = 0; i < size; ++i)
        if (!preserves_from(p, i, size)) return false;
    return true;
}

bool canonical_iso_check(const ProductStructure& p, const IsoLimits& limits) {
    check_iso_bounds(p, limits);
    if (!bijective(p)) return false;
    const auto size = static_cast<std::int64_t>(p.universe_size());
    bool ok = true;
#pragma omp parallel for reduction(&& : ok) schedule(static)
    for (std::int64_t i = 0; i < size; ++i) ok = ok && preserves_from(p, static_cast<std::uint64_t>(i), size);
    return ok;
}

} // namespace finord
