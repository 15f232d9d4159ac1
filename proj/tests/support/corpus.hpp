#pragma once

#include <string>
#include <utility>
#include <vector>

#include "finord/formula.hpp"

namespace finord::testing {

struct CorpusEntry {
    std::string name;
    Formula sentence;
};

/// Counting sentences (exactly/more than i, i <= 4).
std::vector<CorpusEntry> counting_sentences();
/// rho(d,h) for d <= 3.
std::vector<CorpusEntry> congruence_sentences();
std::vector<CorpusEntry> axiom_sentences();
/// Five comprehension instances.
std::vector<CorpusEntry> comprehension_samples();
/// Three restricted induction instances.
std::vector<CorpusEntry> induction_samples();
/// Ten random rank <= 3 sentences from a fixed seed.
std::vector<CorpusEntry> random_samples();
/// Five sums of light sentences.
std::vector<CorpusEntry> sum_samples();

/// Everything above, in that order.
std::vector<CorpusEntry> corpus();

/// Ten pairs of corpus sentences for the spectrum homomorphism checks.
std::vector<std::pair<CorpusEntry, CorpusEntry>> corpus_pairs();

} // namespace finord::testing
