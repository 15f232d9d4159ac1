#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "finord/sentences.hpp"

namespace finord {

struct AutomataLimits;

/// Ultimately periodic subset of N:
///   init  u  { n >= N : n mod d in residues }
/// with init below N and residues below d. Operations return canonical
/// values (minimal period, then minimal threshold; d = 1 when no residues).
class UPSet {
public:
    /// The empty set.
    UPSet() = default;
    /// Throws DomainError unless d >= 1, init < N and residues < d. The
    /// result is not canonicalized.
    UPSet(std::set<std::uint64_t> init, std::uint64_t threshold, std::uint64_t period, std::set<std::uint64_t> residues);

    static UPSet empty() { return {}; }
    static UPSet naturals() { return UPSet({}, 0, 1, {0}); }
    static UPSet singleton(std::uint64_t n);
    /// {n >= from : n = r mod d}
    static UPSet progression(std::uint64_t from, std::uint64_t d, std::uint64_t r);

    const std::set<std::uint64_t>& init() const noexcept { return init_; }
    std::uint64_t threshold() const noexcept { return threshold_; }
    std::uint64_t period() const noexcept { return period_; }
    const std::set<std::uint64_t>& residues() const noexcept { return residues_; }

    bool member(std::uint64_t n) const;
    bool is_empty() const;
    bool is_canonical() const;
    std::optional<std::uint64_t> min_element() const;

    /// Structural equality; denotational equality for canonical values.
    friend bool operator==(const UPSet&, const UPSet&) = default;

private:
    std::set<std::uint64_t> init_;
    std::uint64_t threshold_ = 0;
    std::uint64_t period_ = 1;
    std::set<std::uint64_t> residues_;
};

UPSet canonicalize(const UPSet& s);

enum class SetOp { Union, Intersection, Difference };

UPSet boolean_op(const UPSet& a, const UPSet& b, SetOp op);
UPSet complement(const UPSet& a);

/// {x + y : x in a, y in b}, by concatenating unary automata.
UPSet minkowski_sum(const UPSet& a, const UPSet& b);
UPSet minkowski_sum(const UPSet& a, const UPSet& b, const AutomataLimits& limits);

/// The direct double loop over members below N_a + N_b + 4 d_a d_b. Test oracle.
std::set<std::uint64_t> brute_force_oracle(const UPSet& a, const UPSet& b);
std::uint64_t brute_force_bound(const UPSet& a, const UPSet& b);

/// Threshold max(N, d) of the canonical form; exact members up to it, and the
/// residue classes (indexed 1..d, d standing for 0) taken beyond it.
NormalFormDescriptor to_normal_form(const UPSet& s);

/// UP(init={a,b};N=n;d=p;res={r}) with no whitespace.
std::string to_string(const UPSet& s);
/// Accepts surrounding and inner whitespace. With require_canonical, rejects
/// non-canonical values with a DomainError.
UPSet parse_upset(std::string_view text, bool require_canonical = false);

} // namespace finord
