#include "corpus.hpp"

#include <random>

#include "finord/sentences.hpp"
#include "random_formula.hpp"

namespace finord::testing {

std::vector<CorpusEntry> counting_sentences() {
    std::vector<CorpusEntry> out;
    for (std::uint64_t i = 0; i <= 4; ++i) {
        out.push_back({"psi=" + std::to_string(i), build_psi(CountKind::Exactly, i)});
        out.push_back({"psi>" + std::to_string(i), build_psi(CountKind::Greater, i)});
    }
    return out;
}

std::vector<CorpusEntry> congruence_sentences() {
    std::vector<CorpusEntry> out;
    for (std::uint64_t d = 1; d <= 3; ++d)
        for (std::uint64_t h = 1; h <= d; ++h)
            out.push_back({"rho(" + std::to_string(d) + "," + std::to_string(h) + ")", build_rho(d, h)});
    return out;
}

std::vector<CorpusEntry> axiom_sentences() {
    std::vector<CorpusEntry> out;
    for (auto& [name, sentence] : tmfin_axioms()) out.push_back({"axiom:" + name, sentence});
    return out;
}

std::vector<CorpusEntry> comprehension_samples() {
    return {
        {"comp:false", build_comp(parse_formula("false"), "x", {})},
        {"comp:true", build_comp(parse_formula("true"), "x", {})},
        {"comp:complement", build_comp(parse_formula("~Y(x)"), "x", {"Y"})},
        {"comp:meet", build_comp(parse_formula("Y(x) & Z(x)"), "x", {"Y", "Z"})},
        {"comp:above-member", build_comp(parse_formula("ex1 y. y < x & Y(y)"), "x", {"Y"})},
    };
}

std::vector<CorpusEntry> induction_samples() {
    return {
        {"induction:below-or-equal-min", build_induction(parse_formula("min = x | min < x"), "x")},
        {"induction:initial-segment",
         build_induction(parse_formula("ex2 Y. all1 z. Y(z) <-> z < x | z = x"), "x")},
        {"induction:predecessor",
         build_induction(parse_formula("x = min | (ex1 y. y < x & ~(ex1 z. y < z & z < x))"), "x")},
    };
}

std::vector<CorpusEntry> random_samples() {
    std::mt19937_64 rng(20240611);
    std::vector<CorpusEntry> out;
    for (int i = 0; i < 10; ++i) out.push_back({"random:" + std::to_string(i), random_sentence(rng)});
    return out;
}

std::vector<CorpusEntry> sum_samples() {
    auto eq = [](std::uint64_t n) { return build_psi(CountKind::Exactly, n); };
    auto gt = [](std::uint64_t n) { return build_psi(CountKind::Greater, n); };
    return {
        {"sum:psi=1+psi=2", build_sum(eq(1), eq(2))},
        {"sum:psi>0+psi>0", build_sum(gt(0), gt(0))},
        {"sum:psi=0+rho(2,2)", build_sum(eq(0), build_rho(2, 2))},
        {"sum:rho(2,1)+psi=1", build_sum(build_rho(2, 1), eq(1))},
        {"sum:psi>1+rho(2,2)", build_sum(gt(1), build_rho(2, 2))},
    };
}

std::vector<CorpusEntry> corpus() {
    std::vector<CorpusEntry> out;
    for (auto part : {counting_sentences(), congruence_sentences(), axiom_sentences(), comprehension_samples(),
                      induction_samples(), random_samples(), sum_samples()})
        out.insert(out.end(), part.begin(), part.end());
    return out;
}

std::vector<std::pair<CorpusEntry, CorpusEntry>> corpus_pairs() {
    auto all = corpus();
    auto find = [&](const std::string& name) {
        for (const auto& e : all)
            if (e.name == name) return e;
        return CorpusEntry{name, fm::falsity()};
    };
    const std::pair<const char*, const char*> names[] = {
        {"psi=1", "psi=2"},
        {"rho(2,1)", "rho(3,1)"},
        {"psi>2", "rho(2,2)"},
        {"rho(3,2)", "psi=0"},
        {"rho(2,1)", "rho(2,2)"},
        {"psi>0", "psi=3"},
        {"rho(3,3)", "psi>1"},
        {"axiom:endpoints", "rho(2,1)"},
        {"psi=4", "rho(3,1)"},
        {"random:0", "random:1"},
    };
    std::vector<std::pair<CorpusEntry, CorpusEntry>> out;
    for (const auto& [a, b] : names) out.emplace_back(find(a), find(b));
    return out;
}

} // namespace finord::testing
