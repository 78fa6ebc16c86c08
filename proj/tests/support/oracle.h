#pragma once

// Exhaustive reference for the attack: expands every substitution sequence
// level by level and applies the same stopping rule as the beam search.
// Replaceability and candidate scoring are re-derived here from the token
// annotations and raw LM distributions rather than taken from the library.

#include <cstddef>
#include <set>
#include <vector>

#include "sharedword/corpus.h"
#include "sharedword/maskedlm.h"
#include "sharedword/target.h"

namespace sharedword::testing {

struct OracleOutcome {
  double best_gold_score = 1.0;
  std::size_t levels = 0;
};

OracleOutcome brute_force_attack(const PairExample& example,
                                 const TargetModel& model,
                                 const MaskedLanguageModel& lm,
                                 std::size_t step_limit, std::size_t k,
                                 const Tagger& tagger = Tagger::builtin());

// Pairs the oracle considers replaceable, for cross-checking the library.
std::vector<PositionPair> oracle_pairs(const AnnotatedSentence& p,
                                       const AnnotatedSentence& q, Label label,
                                       const std::set<std::size_t>& frozen_p,
                                       const std::set<std::size_t>& frozen_q);

}  // namespace sharedword::testing
