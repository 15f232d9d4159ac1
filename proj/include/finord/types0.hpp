#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "finord/automata.hpp"
#include "finord/formula.hpp"

namespace finord {

/// The unique x below the product of the moduli with x = r_i (mod m_i).
/// Throws DomainError for zero, non-coprime, or overflowing moduli.
std::uint64_t crt_solve(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& congruences);

/// Residues modulo prime powers, possibly partial. A Table maps moduli p^j to
/// residues; ZeroShift(c) is the total function d -> c mod d.
class ResidueSpec {
public:
    enum class Kind { Table, ZeroShift };

    static ResidueSpec table(std::map<std::uint64_t, std::uint64_t> entries);
    static ResidueSpec zero_shift(std::uint64_t c);

    Kind kind() const noexcept { return kind_; }
    const std::map<std::uint64_t, std::uint64_t>& entries() const noexcept { return entries_; }
    std::uint64_t shift() const noexcept { return shift_; }

    friend bool operator==(const ResidueSpec&, const ResidueSpec&) = default;

private:
    Kind kind_ = Kind::Table;
    std::map<std::uint64_t, std::uint64_t> entries_;
    std::uint64_t shift_ = 0;
};

/// Empty on success; otherwise one message per violated condition.
std::vector<std::string> validate(const ResidueSpec& spec);

/// Keeps only the largest stored power of each prime. Requires a valid spec.
ResidueSpec normalized(const ResidueSpec& spec);

/// The residue of the extension at d > 1, or nullopt when some maximal prime
/// power dividing d is not covered by the table.
std::optional<std::uint64_t> residue_extend(const ResidueSpec& spec, std::uint64_t d);

/// Index h in 1..d of residue class v (0 -> d).
std::uint64_t rep(std::uint64_t v, std::uint64_t d);

/// A completion: the theory of MSO(n), or an infinite one given by residues.
class TypePoint {
public:
    static TypePoint fin(std::uint64_t n);
    /// Validates (DomainError) and normalizes the spec.
    static TypePoint inf(const ResidueSpec& spec);

    bool is_finite() const noexcept { return !spec_.has_value(); }
    std::uint64_t size() const;
    const ResidueSpec& spec() const;

    friend bool operator==(const TypePoint&, const TypePoint&) = default;

private:
    std::uint64_t n_ = 0;
    std::optional<ResidueSpec> spec_;
};

enum class Truth { True, False, Undetermined };

std::string to_string(Truth t);

Truth point_models(const TypePoint& p, const Formula& sentence, const AutomataLimits& limits = {});
/// Same decision from an already computed spectrum.
Truth point_models(const TypePoint& p, const UPSet& spectrum);

TypePoint point_mul(const TypePoint& p, const TypePoint& q);

bool pseudofinite_valid(const Formula& sentence, const AutomataLimits& limits = {});
std::optional<std::uint64_t> satisfiable_witness(const Formula& sentence, const AutomataLimits& limits = {});

/// fin:<n> | inf:zero+<c> | inf:<p>^<j>=<r>;...
std::string to_string(const TypePoint& p);
TypePoint parse_point(std::string_view text);

bool is_prime(std::uint64_t n);
/// (p, j) with p^j = q, or nullopt if q is not a prime power (q >= 2).
std::optional<std::pair<std::uint64_t, unsigned>> prime_power(std::uint64_t q);

} // namespace finord
