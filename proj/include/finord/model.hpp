#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "finord/formula.hpp"

namespace finord {

/// A subset of the atoms {0, ..., n-1} of a finite model; bit i is atom i,
/// atom 0 is the smallest.
class Subset {
public:
    constexpr Subset() = default;
    constexpr explicit Subset(std::uint64_t bits) : bits_(bits) {}

    static constexpr Subset atom(unsigned i) { return Subset(std::uint64_t{1} << i); }
    /// {0, ..., k-1}
    static constexpr Subset prefix(unsigned k) { return Subset(k >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1); }

    constexpr std::uint64_t bits() const noexcept { return bits_; }
    constexpr bool empty() const noexcept { return bits_ == 0; }
    constexpr int size() const noexcept { return std::popcount(bits_); }
    constexpr bool is_atom() const noexcept { return std::has_single_bit(bits_); }
    constexpr bool contains(unsigned i) const noexcept { return (bits_ >> i) & 1U; }
    constexpr bool subset_of(Subset o) const noexcept { return (bits_ & ~o.bits_) == 0; }
    /// Lowest / highest member; undefined on the empty set.
    constexpr int lowest() const noexcept { return std::countr_zero(bits_); }
    constexpr int highest() const noexcept { return 63 - std::countl_zero(bits_); }

    /// Some member of *this lies strictly below some member of o.
    constexpr bool exle(Subset o) const noexcept { return !empty() && !o.empty() && lowest() < o.highest(); }

    friend constexpr Subset operator|(Subset a, Subset b) { return Subset(a.bits_ | b.bits_); }
    friend constexpr Subset operator&(Subset a, Subset b) { return Subset(a.bits_ & b.bits_); }
    friend constexpr bool operator==(Subset, Subset) = default;
    friend constexpr auto operator<=>(Subset, Subset) = default;

private:
    std::uint64_t bits_ = 0;
};

/// MSO(n): the powerset of an n-element linear order.
class FiniteModel {
public:
    static constexpr unsigned kMaxAtoms = 62;

    explicit FiniteModel(unsigned atoms);

    unsigned atoms() const noexcept { return n_; }
    std::uint64_t universe_size() const noexcept { return std::uint64_t{1} << n_; }
    Subset top() const noexcept { return Subset::prefix(n_); }

private:
    unsigned n_;
};

/// An element (A, B) of the product structure M (x) N.
struct PairElement {
    Subset left;
    Subset right;

    friend constexpr bool operator==(const PairElement&, const PairElement&) = default;
};

/// M (x) N: pair universe, componentwise inclusion, atoms of the product
/// Boolean algebra, and the concatenated order on atoms.
class ProductStructure {
public:
    ProductStructure(FiniteModel left, FiniteModel right) : left_(left), right_(right) {}

    const FiniteModel& left() const noexcept { return left_; }
    const FiniteModel& right() const noexcept { return right_; }
    std::uint64_t universe_size() const noexcept { return left_.universe_size() * right_.universe_size(); }

    bool subset(const PairElement& a, const PairElement& b) const noexcept;
    bool exle(const PairElement& a, const PairElement& b) const noexcept;
    bool is_atom(const PairElement& a) const noexcept;
    PairElement bottom() const noexcept { return {}; }

private:
    FiniteModel left_;
    FiniteModel right_;
};

ProductStructure product(const FiniteModel& left, const FiniteModel& right);

struct EvalLimits {
    unsigned max_atoms = 10;
    /// Nesting depth of quantifiers that range over the whole universe (or a
    /// principal ideal of it). Quantifiers confined to atoms are not counted.
    int max_set_nesting = 4;
};

using Assignment = std::map<std::string, Subset>;
using PairAssignment = std::map<std::string, PairElement>;

/// Tarskian truth in MSO(n). Atom variables must be assigned singletons.
/// Atomic formulas mentioning min/max are false in MSO(0).
/// Throws ResourceError past `limits`, DomainError on unbound variables.
bool evaluate(const FiniteModel& m, const Formula& f, const Assignment& env = {}, const EvalLimits& limits = {});

/// Truth in the product structure using its own relations (no isomorphism).
bool evaluate(const ProductStructure& p, const Formula& f, const PairAssignment& env = {}, const EvalLimits& limits = {});

/// Plain recursive evaluation: no miniscoping, every quantifier enumerates the
/// full universe. Serial reference for evaluate(); small models only.
bool evaluate_reference(const FiniteModel& m, const Formula& f, const Assignment& env = {});

/// Depth of nested quantifiers that evaluate() enumerates over the universe.
int set_nesting(const Formula& f);

/// {n <= max_n : MSO(n) |= f} as a membership vector, one model per OpenMP task.
std::vector<bool> bruteforce_spectrum(const Formula& sentence, unsigned max_n, const EvalLimits& limits = {});
/// Same, one model after another.
std::vector<bool> bruteforce_spectrum_serial(const Formula& sentence, unsigned max_n, const EvalLimits& limits = {});

struct IsoLimits {
    unsigned max_total_atoms = 8;
};

/// Checks that (A, B) -> A u (B shifted by m) is a bijection onto MSO(m+n)
/// preserving and reflecting sub, <<, at and bot. Parallel over elements.
bool canonical_iso_check(const ProductStructure& p, const IsoLimits& limits = {});
bool canonical_iso_check_serial(const ProductStructure& p, const IsoLimits& limits = {});

} // namespace finord
