#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "finord/formula.hpp"

namespace finord {

/// Read-off of an ultimately periodic spectrum as a Boolean combination of
/// atom-counting sentences: exactly-i for i in i_set, or more-than-N together
/// with the congruence sentences rho(d,h) for h in r_set.
struct NormalFormDescriptor {
    std::uint64_t threshold = 0;           // N, always >= period
    std::uint64_t period = 1;              // d
    std::vector<std::uint64_t> i_set;      // subset of [0, N]
    std::vector<std::uint64_t> r_set;      // subset of [1, d]

    friend bool operator==(const NormalFormDescriptor&, const NormalFormDescriptor&) = default;
};

enum class CountKind { Greater, Exactly };

/// At least n+1 distinct atoms (Greater) or exactly n atoms (Exactly).
Formula build_psi(CountKind kind, std::uint64_t n);

/// d nonempty sets partitioning the atoms, coloured cyclically along the
/// successor relation starting with colour 1 at the smallest atom and ending
/// with colour h at the largest. Requires 1 <= h <= d.
Formula build_rho(std::uint64_t d, std::uint64_t h);

/// Splits the atoms into a downward closed part satisfying f and the rest
/// satisfying g. f and g must be sentences.
Formula build_sum(const Formula& f, const Formula& g);

/// forall params exists X forall atom_var (X(atom_var) <-> eta).
Formula build_comp(const Formula& eta, const std::string& atom_var, const std::vector<std::string>& params);

/// (phi(min) & all x,y. (phi(x) & y = succ(x) & x < max) -> phi(y)) -> all x. phi(x)
Formula build_induction(const Formula& phi, const std::string& atom_var);

/// Sentence whose spectrum is described by `nf`.
Formula build_normal_form(const NormalFormDescriptor& nf);

/// y is the immediate successor of x among the atoms.
Formula successor_formula(const std::string& x, const std::string& y, const std::set<std::string>& avoid = {});

/// Downward closure of X with respect to the atom order.
Formula downward_closed(const std::string& set_var, const std::set<std::string>& avoid = {});

struct NamedSentence {
    std::string name;
    Formula sentence;
};

/// The axioms of the pseudofinite theory that are single sentences: atomic
/// Boolean algebra with linearly ordered atoms, the lifting of << to sets,
/// a discrete order with endpoints, and least atoms of nonempty elements.
std::vector<NamedSentence> tmfin_axioms();

} // namespace finord
