#pragma once

#include <vector>

#include "finord/automata.hpp"
#include "finord/formula.hpp"
#include "finord/upset.hpp"

namespace finord {

/// Minimal automaton for one set-sorted atomic formula (=, sub, <<, at) whose
/// terms are variables or bot. One track per distinct variable.
Dfa base_automaton(const Formula& atomic);

/// Automaton over the free variables of f (one track each, sorted by name).
/// Sugar is removed, bound variables renamed apart and quantifiers pushed
/// inwards first. A word is accepted iff the structure it encodes satisfies f.
Dfa compile(const Formula& f, const AutomataLimits& limits = {});

/// {n : MSO(n) |= f} for a sentence f.
UPSet spectrum(const Formula& sentence, const AutomataLimits& limits = {});

/// spectrum() of each sentence, parallel over the list, results in order.
std::vector<UPSet> spectra(const std::vector<Formula>& sentences, const AutomataLimits& limits = {});

/// The word over `dfa.tracks()` describing an assignment in MSO(n).
std::vector<Dfa::Letter> encode_assignment(const Dfa& dfa, unsigned n, const std::vector<std::pair<std::string, std::uint64_t>>& values);

} // namespace finord
