#include <random>

#include "corpus.hpp"
#include "doctest.h"
#include "finord/errors.hpp"
#include "finord/model.hpp"
#include "finord/sentences.hpp"
#include "random_formula.hpp"

using namespace finord;

namespace {

// Some member of a below some member of b, by scanning pairs of atoms.
bool exle_by_pairs(Subset a, Subset b) {
    for (unsigned i = 0; i < 64; ++i)
        for (unsigned j = i + 1; j < 64; ++j)
            if (a.contains(i) && b.contains(j)) return true;
    return false;
}

PairElement pair(std::uint64_t a, std::uint64_t b) { return {Subset(a), Subset(b)}; }

// The element of MSO(m+n) a pair is sent to.
Subset glue(const PairElement& p, unsigned m) { return Subset(p.left.bits() | (p.right.bits() << m)); }

} // namespace

TEST_CASE("subset order on atoms") {
    CHECK(Subset(0b001).exle(Subset(0b100)));
    CHECK_FALSE(Subset(0b100).exle(Subset(0b001)));
    CHECK_FALSE(Subset(0b010).exle(Subset(0b010)));
    CHECK(Subset(0b011).exle(Subset(0b010)));
    CHECK_FALSE(Subset{}.exle(Subset(0b1)));
    for (std::uint64_t a = 0; a < 32; ++a)
        for (std::uint64_t b = 0; b < 32; ++b) CHECK(Subset(a).exle(Subset(b)) == exle_by_pairs(Subset(a), Subset(b)));
}

TEST_CASE("evaluate: small examples") {
    const FiniteModel m3(3);
    CHECK(evaluate(m3, parse_formula("ex2 X. at(X)")));
    CHECK_FALSE(evaluate(FiniteModel(0), parse_formula("ex2 X. at(X)")));
    CHECK(evaluate(m3, parse_formula("all2 X. bot sub X")));
    CHECK(evaluate(m3, parse_formula("ex1 x y. x < y")));
    CHECK_FALSE(evaluate(FiniteModel(1), parse_formula("ex1 x y. x < y")));
    CHECK(evaluate(m3, parse_formula("X << Y"), {{"X", Subset(0b011)}, {"Y", Subset(0b010)}}));
    CHECK_FALSE(evaluate(m3, parse_formula("X << Y"), {{"X", Subset(0b110)}, {"Y", Subset(0b001)}}));
    CHECK(evaluate(m3, parse_formula("X(min) & ~X(max)"), {{"X", Subset(0b001)}}));
    CHECK(evaluate(m3, parse_formula("all1 x. x = min | min < x")));
    CHECK(evaluate(FiniteModel(0), parse_formula("all2 X. X = bot")));
}

TEST_CASE("evaluate: errors") {
    const FiniteModel m3(3);
    CHECK_THROWS_AS(evaluate(m3, parse_formula("X = bot")), DomainError);
    CHECK_THROWS_AS(evaluate(m3, parse_formula("X(x)"), {{"X", Subset(1)}, {"x", Subset(0b011)}}), DomainError);
    CHECK_THROWS_AS(evaluate(m3, parse_formula("X = bot"), {{"X", Subset(0b1000)}}), DomainError);
    CHECK_THROWS_AS(evaluate(FiniteModel(11), parse_formula("true")), ResourceError);
    CHECK_THROWS_AS(FiniteModel(63), ResourceError);
    const auto deep = parse_formula("ex2 A B C D E. A sub B & B sub C & C sub D & D sub E");
    CHECK(set_nesting(deep) == 5);
    try {
        evaluate(m3, deep);
        FAIL("expected a resource error");
    } catch (const ResourceError& e) {
        CHECK(e.stage() == "evaluate");
    }
    CHECK(evaluate(m3, deep, {}, {10, 5}));
    // Atom quantifiers are cheap and not counted.
    CHECK(set_nesting(parse_formula("ex1 a b c d e f. true")) == 0);
}

TEST_CASE("evaluate agrees with the plain recursive reference") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        auto f = testing::random_formula(rng, {"X", "y"}, {3, 2, true});
        INFO(to_string(f));
        for (unsigned n = 0; n <= 4; ++n) {
            const FiniteModel m(n);
            for (std::uint64_t s = 0; s < m.universe_size(); ++s)
                for (unsigned a = 0; a < std::max(n, 1U); ++a) {
                    if (n == 0) continue;
                    Assignment env{{"X", Subset(s)}, {"y", Subset::atom(a)}};
                    CHECK(evaluate(m, f, env) == evaluate_reference(m, f, env));
                }
        }
    }
}

TEST_CASE("comprehension holds in MSO(n)") {
    for (const auto& e : testing::comprehension_samples()) {
        INFO(e.name);
        for (unsigned n = 0; n <= 6; ++n) CHECK(evaluate(FiniteModel(n), e.sentence));
    }
}

TEST_CASE("bruteforce spectrum: parallel equals serial") {
    for (const auto& e : testing::corpus()) {
        if (e.name.starts_with("sum:")) continue;
        INFO(e.name);
        CHECK(bruteforce_spectrum(e.sentence, 6) == bruteforce_spectrum_serial(e.sentence, 6));
    }
    CHECK_THROWS_AS(bruteforce_spectrum(parse_formula("X = X"), 3), DomainError);
}

TEST_CASE("product: relations") {
    const auto p = product(FiniteModel(2), FiniteModel(2));
    CHECK(p.universe_size() == 16);
    CHECK(p.is_atom(pair(0b01, 0)));
    CHECK(p.is_atom(pair(0, 0b10)));
    CHECK_FALSE(p.is_atom(pair(0b01, 0b01)));
    CHECK_FALSE(p.is_atom(pair(0, 0)));
    // Anything with a left part is below anything with a right part.
    CHECK(p.exle(pair(0b10, 0), pair(0, 0b01)));
    CHECK_FALSE(p.exle(pair(0, 0b01), pair(0b10, 0)));
    CHECK(p.exle(pair(0b01, 0), pair(0b10, 0)));
    CHECK(p.exle(pair(0, 0b01), pair(0, 0b10)));
    CHECK_FALSE(p.exle(pair(0, 0b10), pair(0, 0b01)));
    CHECK(p.subset(pair(0b01, 0b10), pair(0b11, 0b10)));
    CHECK_FALSE(p.subset(pair(0b01, 0b10), pair(0b11, 0b01)));
}

TEST_CASE("product: relations match the glued model") {
    // Independent oracle: glue both sides into one bitmask and compare directly.
    for (unsigned m = 0; m <= 3; ++m)
        for (unsigned n = 0; n <= 3; ++n) {
            const auto p = product(FiniteModel(m), FiniteModel(n));
            const std::uint64_t lu = std::uint64_t{1} << m, ru = std::uint64_t{1} << n;
            std::vector<PairElement> all;
            for (std::uint64_t a = 0; a < lu; ++a)
                for (std::uint64_t b = 0; b < ru; ++b) all.push_back(pair(a, b));
            for (const auto& x : all) {
                CHECK(p.is_atom(x) == glue(x, m).is_atom());
                for (const auto& y : all) {
                    CHECK(p.subset(x, y) == glue(x, m).subset_of(glue(y, m)));
                    CHECK(p.exle(x, y) == exle_by_pairs(glue(x, m), glue(y, m)));
                }
            }
        }
}

TEST_CASE("product: canonical iso check") {
    for (unsigned m = 0; m <= 4; ++m)
        for (unsigned n = 0; n <= 4; ++n) {
            const auto p = product(FiniteModel(m), FiniteModel(n));
            CHECK(canonical_iso_check(p));
            CHECK(canonical_iso_check_serial(p));
        }
    CHECK_THROWS_AS(canonical_iso_check(product(FiniteModel(5), FiniteModel(4))), ResourceError);
    CHECK(canonical_iso_check(product(FiniteModel(5), FiniteModel(4)), {9}));
}

TEST_CASE("product: evaluation agrees with MSO(m+n)") {
    std::mt19937_64 rng(5);
    std::vector<Formula> sentences;
    for (const auto& e : testing::counting_sentences()) sentences.push_back(e.sentence);
    for (const auto& e : testing::congruence_sentences()) sentences.push_back(e.sentence);
    for (const auto& e : testing::axiom_sentences()) sentences.push_back(e.sentence);
    for (int i = 0; i < 30; ++i) sentences.push_back(testing::random_sentence(rng, {2, 2, true}));
    for (const auto& f : sentences) {
        INFO(to_string(f));
        for (unsigned m = 0; m <= 3; ++m)
            for (unsigned n = 0; n <= 3; ++n)
                CHECK(evaluate(product(FiniteModel(m), FiniteModel(n)), f) == evaluate(FiniteModel(m + n), f));
    }
    // With free variables, through the canonical map.
    const auto p = product(FiniteModel(2), FiniteModel(2));
    const auto f = parse_formula("X << Y & ~Y sub X & at(Z)");
    for (std::uint64_t a = 0; a < 16; ++a)
        for (std::uint64_t b = 0; b < 16; ++b) {
            const auto pa = pair(a & 3, a >> 2), pb = pair(b & 3, b >> 2), pz = pair(0, 0b01);
            const bool lhs = evaluate(p, f, {{"X", pa}, {"Y", pb}, {"Z", pz}});
            const bool rhs = evaluate(FiniteModel(4), f, {{"X", glue(pa, 2)}, {"Y", glue(pb, 2)}, {"Z", glue(pz, 2)}});
            CHECK(lhs == rhs);
        }
}
