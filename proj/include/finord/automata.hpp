#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "finord/upset.hpp"

namespace finord {

struct AutomataLimits {
    std::size_t state_cap = 100000;
    /// Letters are 2^width bit rows; wider alphabets are refused.
    unsigned max_width = 16;
};

/// Complete DFA over the alphabet {0,1}^w. Bit i of a letter is the value of
/// tracks()[i] at that position; track names are kept sorted. A word of
/// length n describes n atoms and one subset of them per track.
class Dfa {
public:
    using State = std::uint32_t;
    using Letter = std::uint32_t;

    /// `delta` is row-major: delta[s * 2^w + letter]. Throws DomainError if
    /// tracks are unsorted/duplicated or delta is not total.
    Dfa(std::vector<std::string> tracks, std::vector<State> delta, State initial, std::vector<bool> accepting);

    /// One state over no tracks accepting everything or nothing.
    static Dfa constant(bool accept);

    const std::vector<std::string>& tracks() const noexcept { return tracks_; }
    unsigned width() const noexcept { return static_cast<unsigned>(tracks_.size()); }
    std::uint32_t letters() const noexcept { return std::uint32_t{1} << tracks_.size(); }
    std::size_t states() const noexcept { return accepting_.size(); }
    State initial() const noexcept { return initial_; }
    bool accepting(State s) const { return accepting_[s]; }
    State next(State s, Letter l) const { return delta_[static_cast<std::size_t>(s) * letters() + l]; }
    const std::vector<State>& transitions() const noexcept { return delta_; }

    bool accepts(const std::vector<Letter>& word) const;
    /// Index of a track name, or -1.
    int track_index(const std::string& name) const;

    friend bool operator==(const Dfa&, const Dfa&) = default;

private:
    std::vector<std::string> tracks_;
    std::vector<State> delta_;
    State initial_ = 0;
    std::vector<bool> accepting_;
};

enum class BoolOp { And, Or, Implies, Iff };

/// Product over the union of both track lists; missing tracks are don't-care.
/// The result is minimized.
Dfa combine(const Dfa& a, const Dfa& b, BoolOp op, const AutomataLimits& limits = {});
Dfa complement(const Dfa& a);
/// Erases `track` (existential quantification) by subset construction, then minimizes.
Dfa project(const Dfa& a, const std::string& track, const AutomataLimits& limits = {});
/// Same language over the track list extended with `extra` (sorted union).
Dfa cylindrify(const Dfa& a, const std::vector<std::string>& extra, const AutomataLimits& limits = {});

/// Minimal DFA with states numbered breadth-first from the initial state,
/// letters in increasing order. Moore refinement, parallel over states.
Dfa minimize(const Dfa& a);
/// Hopcroft's algorithm, same canonical numbering. Serial reference.
Dfa minimize_reference(const Dfa& a);

/// Every state reachable from the initial one.
bool all_reachable(const Dfa& a);

/// Language equality over the unified track list.
bool equivalent(const Dfa& a, const Dfa& b, const AutomataLimits& limits = {});
bool is_empty(const Dfa& a);

/// Lengths accepted by a zero-track automaton, read off its lasso.
UPSet lasso_spectrum(const Dfa& a);
/// Zero-track automaton accepting exactly the lengths in s.
Dfa unary_dfa(const UPSet& s);
/// Zero-track automaton for {x + y : x accepted by a, y accepted by b}.
Dfa concatenate_unary(const Dfa& a, const Dfa& b, const AutomataLimits& limits = {});

/// Graphviz text. Edge labels are cubes over the tracks, '·' for don't-care.
std::string to_dot(const Dfa& a);

} // namespace finord
