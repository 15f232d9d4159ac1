#pragma once

#include <random>
#include <string>
#include <vector>

#include "finord/formula.hpp"

namespace finord::testing {

struct RandomFormulaOptions {
    int max_rank = 3;
    /// Depth budget for connectives between quantifiers.
    int max_connective_depth = 2;
    bool use_extrema = true;
};

/// Well-sorted formula whose free variables are among `free` (names decide
/// the sort). Quantified variables are fresh.
Formula random_formula(std::mt19937_64& rng, const std::vector<std::string>& free, const RandomFormulaOptions& options = {});

/// Random sentence of quantifier rank at most options.max_rank that mentions
/// at least one quantifier.
Formula random_sentence(std::mt19937_64& rng, const RandomFormulaOptions& options = {});

} // namespace finord::testing
