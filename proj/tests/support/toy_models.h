#pragma once

// Small deterministic models and LMs for tests.

#include <cstdint>
#include <string>
#include <vector>

#include "sharedword/maskedlm.h"
#include "sharedword/rng.h"
#include "sharedword/target.h"

namespace sharedword::testing {

// Masked LM whose distribution over a fixed vocabulary is a hash of the
// masked context. Roughly one word in five gets probability zero.
class HashedLm : public MaskedLanguageModel {
 public:
  HashedLm(std::vector<std::string> vocabulary, std::uint64_t seed)
      : vocabulary_(std::move(vocabulary)), seed_(seed) {}

  std::vector<MaskedDistribution> mask_distributions(
      std::span<const MaskQuery> queries) const override {
    std::vector<MaskedDistribution> out;
    for (const MaskQuery& query : queries) {
      const std::string context = context_key(*query.sentence, query.index);
      std::vector<double> weights;
      double total = 0.0;
      for (const std::string& word : vocabulary_) {
        const std::uint64_t h =
            fnv1a64(std::to_string(seed_) + "|" + context + "|" + word);
        const double w = h % 5 == 0 ? 0.0 : static_cast<double>(1 + h % 13);
        weights.push_back(w);
        total += w;
      }
      std::vector<MaskedDistribution::Entry> entries;
      for (std::size_t k = 0; k < vocabulary_.size(); ++k) {
        const double prob = total > 0.0
                                ? weights[k] / total
                                : 1.0 / static_cast<double>(vocabulary_.size());
        entries.emplace_back(vocabulary_[k], prob);
      }
      out.emplace_back(std::move(entries));
    }
    return out;
  }
  bool concurrent_safe() const override { return true; }

 private:
  std::vector<std::string> vocabulary_;
  std::uint64_t seed_;
};

// Returns the same distribution for every pair.
class FixedModel : public PairwiseModel {
 public:
  explicit FixedModel(double p_positive) : p_positive_(p_positive) {}
  ClassDistribution score_pair(const AnnotatedSentence&,
                               const AnnotatedSentence&) const override {
    return {p_positive_, 1.0 - p_positive_};
  }
  std::string describe() const override { return "fixed"; }

 private:
  double p_positive_;
};

// Bag-of-words logistic model with random weights on the features of every
// word in `words`, giving irregular but deterministic score landscapes.
inline BowLogisticModel random_bow_model(const std::vector<std::string>& words,
                                         std::uint64_t seed) {
  Rng rng = Rng::stream(seed, "random-bow");
  BowLogisticParams params;
  params.weights["bias"] = rng.uniform01() * 2.0 - 1.0;
  for (const std::string& w : words) {
    params.weights["both:" + w] = rng.uniform01() * 4.0 - 1.0;
    params.weights["one:" + w] = rng.uniform01() * 2.0 - 1.5;
  }
  return BowLogisticModel(std::move(params));
}

}  // namespace sharedword::testing
