#include <random>

#include "corpus.hpp"
#include "doctest.h"
#include "finord/errors.hpp"
#include "finord/model.hpp"
#include "finord/sentences.hpp"
#include "random_formula.hpp"

using namespace finord;

namespace {

Term v(const char* name) { return Term::var(name); }

} // namespace

TEST_CASE("parse: direct grammar readings") {
    CHECK(parse_formula("ex1 x. true") == fm::exists_atom("x", fm::truth()));
    CHECK(parse_formula("all2 X. bot sub X") == fm::forall_set("X", fm::subset(Term::bot(), v("X"))));
    CHECK(parse_formula("X(x)") == fm::mem(v("x"), v("X")));
    CHECK(parse_formula("x < y") == fm::exle(v("x"), v("y")));
    CHECK(parse_formula("X << Y") == fm::exle(v("X"), v("Y")));
    CHECK(parse_formula("at(min)") == fm::at(Term::min()));
}

TEST_CASE("parse: precedence and associativity") {
    auto a = fm::eq(v("A"), v("B"));
    auto b = fm::eq(v("B"), v("C"));
    auto c = fm::eq(v("C"), v("D"));
    CHECK(parse_formula("A = B -> B = C -> C = D") == fm::implies(a, fm::implies(b, c)));
    CHECK(parse_formula("A = B | B = C & C = D") == fm::disj(a, fm::conj(b, c)));
    CHECK(parse_formula("~A = B & B = C") == fm::conj(fm::neg(a), b));
    CHECK(parse_formula("A = B <-> B = C <-> C = D") == fm::iff(fm::iff(a, b), c));
    // Quantifier scope extends as far right as possible.
    CHECK(parse_formula("ex2 X. A = B & B = C") == fm::exists_set("X", fm::conj(a, b)));
    CHECK(parse_formula("ex2 X Y. true") == fm::exists_set("X", fm::exists_set("Y", fm::truth())));
}

TEST_CASE("parse: syntax errors carry the offset") {
    try {
        parse_formula("ex1 x. X(y");
        FAIL("expected a syntax error");
    } catch (const SyntaxError& e) {
        CHECK(e.offset() == 8);
    }
    CHECK_THROWS_AS(parse_formula("X sub"), SyntaxError);
    CHECK_THROWS_AS(parse_formula("ex2 X true"), SyntaxError);
    CHECK_THROWS_AS(parse_formula("X ? Y"), SyntaxError);
    CHECK_THROWS_AS(parse_formula("(X = Y"), SyntaxError);
    CHECK_THROWS_AS(parse_formula(""), SyntaxError);
}

TEST_CASE("parse: sort errors") {
    CHECK_THROWS_AS(parse_formula("ex1 X. true"), SortError);
    CHECK_THROWS_AS(parse_formula("ex2 x. true"), SortError);
    CHECK_THROWS_AS(parse_formula("x(y)"), SortError);
    CHECK_THROWS_AS(parse_formula("X(Y)"), SortError);
    CHECK_THROWS_AS(parse_formula("X < Y"), SortError);
}

TEST_CASE("print/parse roundtrip on the corpus and random formulas") {
    // Sums come out of relativize() already desugared, with atom-sorted names
    // under set binders, so they are not parser output.
    for (const auto& e : testing::corpus()) {
        if (e.name.starts_with("sum:")) continue;
        INFO(e.name);
        CHECK(parse_formula(to_string(e.sentence)) == e.sentence);
    }
    std::mt19937_64 rng(7);
    for (int i = 0; i < 300; ++i) {
        auto f = testing::random_formula(rng, {"X", "Y", "x"}, {3, 3, true});
        const auto text = to_string(f);
        INFO(text);
        CHECK(parse_formula(text) == f);
        CHECK(to_string(parse_formula(text)) == text);
    }
}

TEST_CASE("print is whitespace-insensitive on reparse") {
    const auto f = parse_formula("  all2   X .  ( bot sub X )&~X=bot->ex1 x.X(x)");
    CHECK(parse_formula(to_string(f)) == f);
}

TEST_CASE("free variables and sentences") {
    auto f = parse_formula("ex2 X. X sub Y & x < y");
    CHECK(free_vars(f) == std::set<std::string>{"Y", "x", "y"});
    CHECK_FALSE(is_sentence(f));
    CHECK(is_sentence(parse_formula("all2 X. bot sub X")));
    CHECK(quantifier_rank(parse_formula("ex1 x. (ex1 y. true) & ex2 X. ex2 Y. true")) == 3);
}

TEST_CASE("desugar: membership and atom quantifiers") {
    CHECK(desugar(fm::mem(v("x"), v("X"))) == fm::conj(fm::at(v("x")), fm::subset(v("x"), v("X"))));
    CHECK(desugar(parse_formula("ex1 x. true")) == fm::exists_set("x", fm::conj(fm::at(v("x")), fm::truth())));
    CHECK(desugar(parse_formula("all1 x. true")) == fm::forall_set("x", fm::implies(fm::at(v("x")), fm::truth())));
}

TEST_CASE("desugar: output is sugar-free, well sorted and idempotent") {
    for (const auto& e : testing::corpus()) {
        INFO(e.name);
        auto d = desugar(e.sentence);
        CHECK(is_desugared(d));
        CHECK_NOTHROW(sort_check(d));
        CHECK(desugar(d) == d);
    }
}

TEST_CASE("desugar: min/max agree with the evaluator") {
    const FiniteModel m3(3);
    for (const char* text : {"x = min", "x = max", "X(min)", "min < x", "x < max", "min = max"}) {
        auto f = parse_formula(text);
        auto d = desugar(f);
        for (unsigned a = 0; a < 3; ++a)
            for (std::uint64_t s = 0; s < 8; ++s) {
                Assignment env{{"x", Subset::atom(a)}, {"X", Subset(s)}};
                INFO(text << " x=" << a << " X=" << s);
                CHECK(evaluate(m3, f, env) == evaluate(m3, d, env));
            }
    }
    // Independent reading: min is atom 0, max is atom n-1.
    for (unsigned a = 0; a < 3; ++a) {
        CHECK(evaluate(m3, desugar(parse_formula("x = min")), {{"x", Subset::atom(a)}}) == (a == 0));
        CHECK(evaluate(m3, desugar(parse_formula("x = max")), {{"x", Subset::atom(a)}}) == (a == 2));
    }
    // No atoms: every atomic formula mentioning min is false.
    CHECK_FALSE(evaluate(FiniteModel(0), desugar(parse_formula("min = min"))));
    CHECK(evaluate(FiniteModel(0), desugar(parse_formula("~min = min"))));
}

TEST_CASE("relativize: examples") {
    auto some_atom = parse_formula("ex1 x. true");
    auto rel = relativize(some_atom, "A", RelativizeMode::ToElement);
    CHECK_FALSE(evaluate(FiniteModel(3), rel, {{"A", Subset{}}}));
    CHECK(evaluate(FiniteModel(3), rel, {{"A", Subset(0b100)}}));

    auto two = build_psi(CountKind::Exactly, 2);
    auto below = relativize(two, "a", RelativizeMode::BelowAtom);
    CHECK(evaluate(FiniteModel(5), below, {{"a", Subset::atom(2)}}));
    CHECK_FALSE(evaluate(FiniteModel(5), below, {{"a", Subset::atom(3)}}));

    CHECK(relativize(fm::truth(), "A", RelativizeMode::ToElement) == fm::truth());
}

TEST_CASE("relativize: errors") {
    CHECK_THROWS_AS(relativize(parse_formula("ex2 A. true"), "A", RelativizeMode::ToElement), DomainError);
    CHECK_THROWS_AS(relativize(parse_formula("true"), "a", RelativizeMode::ToElement), DomainError);
    CHECK_THROWS_AS(relativize(parse_formula("true"), "A", RelativizeMode::BelowAtom), DomainError);
}

TEST_CASE("relativize: agrees with the restricted model") {
    // The restriction of MSO(n) to A is MSO(|A|) via the order isomorphism.
    std::vector<testing::CorpusEntry> sample;
    for (auto part : {testing::counting_sentences(), testing::congruence_sentences(), testing::axiom_sentences(),
                      testing::induction_samples(), testing::random_samples()})
        sample.insert(sample.end(), part.begin(), part.end());
    for (const auto& e : sample) {
        INFO(e.name);
        auto to_set = relativize(e.sentence, "B", RelativizeMode::ToElement);
        auto below = relativize(e.sentence, "b", RelativizeMode::BelowAtom);
        std::vector<bool> truth(7);
        for (unsigned k = 0; k <= 6; ++k) truth[k] = evaluate(FiniteModel(k), e.sentence);
        for (unsigned n = 0; n <= 5; ++n) {
            const FiniteModel m(n);
            for (std::uint64_t a = 0; a < m.universe_size(); ++a)
                CHECK(evaluate(m, to_set, {{"B", Subset(a)}}) == truth[Subset(a).size()]);
            for (unsigned a = 0; a < n; ++a) CHECK(evaluate(m, below, {{"b", Subset::atom(a)}}) == truth[a]);
        }
    }
}

TEST_CASE("build_rho: examples and closed form") {
    CHECK(evaluate(FiniteModel(8), build_rho(3, 2)));
    CHECK_FALSE(evaluate(FiniteModel(2), build_rho(3, 2)));
    CHECK(evaluate(FiniteModel(3), build_rho(3, 3)));
    CHECK_THROWS_AS(build_rho(3, 0), DomainError);
    CHECK_THROWS_AS(build_rho(3, 4), DomainError);
    CHECK_THROWS_AS(build_rho(0, 0), DomainError);
    for (std::uint64_t d = 1; d <= 3; ++d)
        for (std::uint64_t h = 1; h <= d; ++h) {
            auto spec = bruteforce_spectrum(build_rho(d, h), 8);
            for (std::uint64_t n = 0; n <= 8; ++n) CHECK(spec[n] == (n >= d && n % d == h % d));
        }
}

TEST_CASE("build_rho: exactly one residue class per size") {
    EvalLimits limits;
    limits.max_atoms = 9;
    for (std::uint64_t d = 1; d <= 3; ++d)
        for (std::uint64_t n = d; n <= 9; ++n) {
            int hits = 0;
            for (std::uint64_t h = 1; h <= d; ++h) hits += evaluate(FiniteModel(static_cast<unsigned>(n)), build_rho(d, h), {}, limits);
            CHECK(hits == 1);
        }
}

TEST_CASE("build_psi: atom counting") {
    CHECK(evaluate(FiniteModel(3), build_psi(CountKind::Exactly, 3)));
    CHECK_FALSE(evaluate(FiniteModel(3), build_psi(CountKind::Greater, 3)));
    CHECK(evaluate(FiniteModel(0), build_psi(CountKind::Exactly, 0)));
    for (unsigned n = 0; n <= 6; ++n)
        for (std::uint64_t i = 0; i <= 4; ++i) {
            CHECK(evaluate(FiniteModel(n), build_psi(CountKind::Exactly, i)) == (n == i));
            CHECK(evaluate(FiniteModel(n), build_psi(CountKind::Greater, i)) == (n > i));
        }
}

namespace {
const EvalLimits kSumLimits{10, 6};
}

TEST_CASE("build_sum: examples") {
    auto eq = [](std::uint64_t n) { return build_psi(CountKind::Exactly, n); };
    auto spec = bruteforce_spectrum(build_sum(eq(1), eq(2)), 6, kSumLimits);
    for (unsigned n = 0; n <= 6; ++n) CHECK(spec[n] == (n == 3));
    CHECK(evaluate(FiniteModel(2), build_sum(eq(1), eq(1)), {}, kSumLimits));
    CHECK_THROWS_AS(build_sum(parse_formula("X = X"), eq(1)), DomainError);

    // The left part is an initial segment: psi=0 on the left leaves g unchanged.
    for (const auto& e : testing::congruence_sentences()) {
        auto lhs = bruteforce_spectrum(build_sum(eq(0), e.sentence), 6, kSumLimits);
        auto rhs = bruteforce_spectrum(e.sentence, 6);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("build_sum: spectrum is the sumset") {
    auto at_least_one = build_psi(CountKind::Greater, 0);
    auto spec = bruteforce_spectrum(build_sum(at_least_one, at_least_one), 6, kSumLimits);
    for (unsigned n = 0; n <= 6; ++n) CHECK(spec[n] == (n >= 2));
    // Odd sizes >= 3 plus one atom.
    auto g = build_sum(build_rho(2, 1), build_psi(CountKind::Exactly, 1));
    auto gs = bruteforce_spectrum(g, 7, kSumLimits);
    for (unsigned n = 0; n <= 7; ++n) CHECK(gs[n] == (n >= 4 && n % 2 == 0));
}

TEST_CASE("build_comp: instances hold in standard models") {
    for (const auto& e : testing::comprehension_samples()) {
        INFO(e.name);
        for (unsigned n = 0; n <= 6; ++n) CHECK(evaluate(FiniteModel(n), e.sentence));
    }
    CHECK_THROWS_AS(build_comp(parse_formula("Z(x)"), "x", {"Y"}), DomainError);
    CHECK_THROWS_AS(build_comp(parse_formula("true"), "X", {}), DomainError);
    CHECK_THROWS_AS(build_comp(parse_formula("true"), "x", {"y"}), DomainError);
}

TEST_CASE("build_induction: instances hold in standard models") {
    for (const auto& e : testing::induction_samples()) {
        INFO(e.name);
        for (unsigned n = 0; n <= 6; ++n) CHECK(evaluate(FiniteModel(n), e.sentence));
    }
    // Does not propagate, so the premise fails for n >= 2.
    auto only_min = build_induction(parse_formula("x = min"), "x");
    for (unsigned n = 0; n <= 6; ++n) CHECK(evaluate(FiniteModel(n), only_min));
    CHECK_THROWS_AS(build_induction(parse_formula("x = y"), "x"), DomainError);
}

TEST_CASE("axioms hold in every small model") {
    for (const auto& e : testing::axiom_sentences()) {
        INFO(e.name);
        for (unsigned n = 0; n <= 6; ++n) CHECK(evaluate(FiniteModel(n), e.sentence));
    }
}

TEST_CASE("substitute avoids capture") {
    auto f = parse_formula("ex1 y. x < y");
    auto g = substitute(f, "x", Term::var("y"));
    CHECK(free_vars(g) == std::set<std::string>{"y"});
    for (unsigned a = 0; a < 4; ++a) {
        const bool expected = a < 3;
        CHECK(evaluate(FiniteModel(4), g, {{"y", Subset::atom(a)}}) == expected);
    }
}

TEST_CASE("alpha_rename and miniscope preserve truth") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 150; ++i) {
        auto f = testing::random_formula(rng, {"X", "x"}, {3, 2, true});
        auto renamed = alpha_rename(f);
        auto scoped = miniscope(f);
        INFO(to_string(f));
        CHECK(free_vars(renamed) == free_vars(f));
        for (unsigned n = 1; n <= 3; ++n) {
            const FiniteModel m(n);
            for (unsigned a = 0; a < n; ++a)
                for (std::uint64_t s = 0; s < m.universe_size(); ++s) {
                    Assignment env{{"X", Subset(s)}, {"x", Subset::atom(a)}};
                    const bool truth = evaluate_reference(m, f, env);
                    CHECK(evaluate_reference(m, renamed, env) == truth);
                    CHECK(evaluate_reference(m, scoped, env) == truth);
                }
        }
    }
}

TEST_CASE("fresh names are deterministic") {
    CHECK(fresh_name("X", {"X0", "X1"}) == "X2");
    CHECK(fresh_name("z", {}) == "z0");
    CHECK(to_string(build_sum(build_psi(CountKind::Exactly, 1), build_psi(CountKind::Exactly, 1))) ==
          to_string(build_sum(build_psi(CountKind::Exactly, 1), build_psi(CountKind::Exactly, 1))));
}
