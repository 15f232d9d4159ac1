#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "finord/model.hpp"

namespace finord {

enum class Player { Spoiler, Duplicator };

std::string to_string(Player p);

/// Position in the unnested game: chosen elements so far and the rounds left.
struct GameState {
    std::vector<Subset> left_tuple;
    std::vector<Subset> right_tuple;
    unsigned rounds_remaining = 0;
};

struct EfLimits {
    /// ef_winner: total number of tuples (both models, all lengths up to k)
    /// that get a type. ef_winner_minimax: (2^m * 2^n)^k memo states.
    std::uint64_t state_budget = std::uint64_t{1} << 26;
};

/// Both tuples satisfy the same unnested atomic formulas over their entries
/// and bot: equality, sub, << between any two terms, and at() of each term.
bool atomic_agreement(const FiniteModel& left, const std::vector<Subset>& a, const FiniteModel& right,
                      const std::vector<Subset>& b);

/// Winner of the k-round unnested game from the empty position. Computed by
/// back-and-forth refinement of tuple types shared between the two models,
/// parallel over tuples. Throws ResourceError past the budget.
Player ef_winner(const FiniteModel& left, const FiniteModel& right, unsigned k, const EfLimits& limits = {});

/// Memoized minimax over game states, Spoiler moves in the left model first.
/// Serial reference for ef_winner; usable from any state.
Player ef_winner_minimax(const FiniteModel& left, const FiniteModel& right, const GameState& start,
                         const EfLimits& limits = {});
Player ef_winner_minimax(const FiniteModel& left, const FiniteModel& right, unsigned k, const EfLimits& limits = {});

/// MSO(m) and MSO(n) are k-equivalent.
bool ef_equiv(unsigned m, unsigned n, unsigned k, const EfLimits& limits = {});

} // namespace finord
