#include "finord/compile.hpp"

#include <algorithm>
#include <exception>
#include <map>

#include "finord/errors.hpp"

namespace finord {

namespace {

using K = Formula::Kind;

// Tiny per-position machines over the bits (x, y) of the two terms.
struct BaseMachine {
    int states;
    int start;
    std::vector<bool> accepting;
    int (*step)(int state, bool x, bool y);
};

const BaseMachine& machine_for(K kind) {
    static const BaseMachine subset{2, 0, {true, false}, [](int s, bool x, bool y) { return (s == 1 || (x && !y)) ? 1 : 0; }};
    static const BaseMachine equal{2, 0, {true, false}, [](int s, bool x, bool y) { return (s == 1 || x != y) ? 1 : 0; }};
    static const BaseMachine atom{3, 0, {false, true, false}, [](int s, bool x, bool) { return std::min(2, s + (x ? 1 : 0)); }};
    // 0: no x-bit yet, 1: x-bit seen, 2: a y-bit strictly after an x-bit.
    static const BaseMachine exle{3, 0, {false, false, true}, [](int s, bool x, bool y) {
                                      if (s == 2 || (s == 1 && y)) return 2;
                                      return (s == 1 || x) ? 1 : 0;
                                  }};
    switch (kind) {
    case K::Subset: return subset;
    case K::Eq: return equal;
    case K::At: return atom;
    case K::Exle: return exle;
    default: throw DomainError("base_automaton: unsupported atomic formula");
    }
}

} // namespace

Dfa base_automaton(const Formula& f) {
    if (!f.is_atomic() || f.kind() == K::Mem || f.kind() == K::True || f.kind() == K::False)
        throw DomainError("base_automaton: expected =, sub, << or at(), got " + to_string(f));
    std::vector<Term> terms{f.lhs()};
    if (f.kind() != K::At) terms.push_back(f.rhs());
    std::vector<std::string> tracks;
    for (const auto& t : terms) {
        if (t.kind() == Term::Kind::Min || t.kind() == Term::Kind::Max)
            throw DomainError("base_automaton: min/max must be desugared first");
        if (t.is_var()) tracks.push_back(t.name());
    }
    std::sort(tracks.begin(), tracks.end());
    tracks.erase(std::unique(tracks.begin(), tracks.end()), tracks.end());

    // Bit of each term in a letter; -1 for bot.
    auto bit_of = [&](const Term& t) {
        return t.is_var() ? static_cast<int>(std::lower_bound(tracks.begin(), tracks.end(), t.name()) - tracks.begin()) : -1;
    };
    const int bx = bit_of(terms[0]);
    const int by = terms.size() > 1 ? bit_of(terms[1]) : -1;
    const auto& m = machine_for(f.kind());
    const std::uint32_t letters = std::uint32_t{1} << tracks.size();
    std::vector<Dfa::State> delta;
    for (int s = 0; s < m.states; ++s)
        for (std::uint32_t l = 0; l < letters; ++l) {
            const bool x = bx >= 0 && ((l >> bx) & 1U);
            const bool y = by >= 0 && ((l >> by) & 1U);
            delta.push_back(static_cast<Dfa::State>(m.step(s, x, y)));
        }
    return minimize(Dfa(std::move(tracks), std::move(delta), static_cast<Dfa::State>(m.start), m.accepting));
}

namespace {

class Compiler {
public:
    explicit Compiler(const AutomataLimits& limits) : limits_(limits) {}

    Dfa run(const Formula& f) {
        switch (f.kind()) {
        case K::True: return Dfa::constant(true);
        case K::False: return Dfa::constant(false);
        case K::Eq:
        case K::Subset:
        case K::Exle:
        case K::At: return base_automaton(f);
        case K::Not: return complement(run(f.child(0)));
        case K::And: return combine(run(f.child(0)), run(f.child(1)), BoolOp::And, limits_);
        case K::Or: return combine(run(f.child(0)), run(f.child(1)), BoolOp::Or, limits_);
        case K::Implies: return combine(run(f.child(0)), run(f.child(1)), BoolOp::Implies, limits_);
        case K::Iff: return combine(run(f.child(0)), run(f.child(1)), BoolOp::Iff, limits_);
        case K::ExistsSet: return exists(f.var(), run(f.child(0)));
        case K::ForallSet: return complement(exists(f.var(), complement(run(f.child(0)))));
        default: throw DomainError("compile: formula is not desugared");
        }
    }

private:
    // The empty set is always a witness candidate, so a quantifier over a
    // variable the body ignores is vacuous.
    Dfa exists(const std::string& var, const Dfa& body) {
        if (body.track_index(var) < 0) return body;
        return project(body, var, limits_);
    }

    const AutomataLimits& limits_;
};

} // namespace

Dfa compile(const Formula& f, const AutomataLimits& limits) {
    sort_check(f);
    auto prepared = miniscope(desugar(alpha_rename(f)));
    auto dfa = Compiler(limits).run(prepared);
    // Free variables the formula ignores still get a (don't-care) track.
    auto free = free_vars(prepared);
    std::vector<std::string> missing;
    for (const auto& v : free)
        if (dfa.track_index(v) < 0) missing.push_back(v);
    if (!missing.empty()) dfa = cylindrify(dfa, missing, limits);
    return dfa;
}

UPSet spectrum(const Formula& sentence, const AutomataLimits& limits) {
    if (!is_sentence(sentence)) throw DomainError("spectrum: formula has free variables");
    return lasso_spectrum(compile(sentence, limits));
}

std::vector<UPSet> spectra(const std::vector<Formula>& sentences, const AutomataLimits& limits) {
    std::vector<UPSet> out(sentences.size());
    std::exception_ptr failure;
    const auto count = static_cast<std::int64_t>(sentences.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < count; ++i) {
        try {
            out[i] = spectrum(sentences[i], limits);
        } catch (...) {
#pragma omp critical(finord_spectra_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

std::vector<Dfa::Letter> encode_assignment(const Dfa& dfa, unsigned n,
                                           const std::vector<std::pair<std::string, std::uint64_t>>& values) {
    std::vector<Dfa::Letter> word(n, 0);
    for (const auto& [name, bits] : values) {
        const int t = dfa.track_index(name);
        if (t < 0) continue;
        for (unsigned i = 0; i < n; ++i)
            if ((bits >> i) & 1U) word[i] |= Dfa::Letter{1} << t;
    }
    return word;
}

} // namespace finord
