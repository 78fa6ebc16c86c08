#pragma once

// Randomized tiny attack instances for property and oracle tests.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "sharedword/corpus.h"
#include "sharedword/target.h"
#include "support/toy_models.h"

namespace sharedword::testing {

struct TinyInstance {
  PairExample example;
  std::unique_ptr<PairwiseModel> model;
  std::unique_ptr<HashedLm> lm;
  std::size_t pair_count = 0;
};

// Sentences of 3-7 tokens over a small mixed pool (nouns, verbs, adjectives,
// adverbs, stopwords, punctuation). Redraws until the example has between 1
// and max_pairs replaceable pairs. The LM vocabulary has at most
// lm_vocab_size words and includes distractors the candidate filter must
// reject.
TinyInstance random_tiny_instance(std::uint64_t seed, std::size_t max_pairs,
                                  std::size_t lm_vocab_size);

}  // namespace sharedword::testing
