#pragma once

// Masked language model contract and joint substitution candidates.
//
// A candidate w for position pair (i, j) is scored by
//   log P(w | P with p_i masked) + log P(w | Q with q_j masked),
// i.e. the product of the two masked conditionals, accumulated in log space.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sharedword/linguistics.h"

namespace sharedword {

inline constexpr std::string_view kMaskToken = "<MASK>";
inline constexpr double kDistributionTolerance = 1e-6;

// Normalized distribution over a vocabulary, stored sorted by word.
class MaskedDistribution {
 public:
  using Entry = std::pair<std::string, double>;

  MaskedDistribution() = default;
  // Throws InvalidInputError on negative or non-finite probabilities,
  // duplicate words, or a total outside 1 +- kDistributionTolerance.
  explicit MaskedDistribution(std::vector<Entry> entries);

  static MaskedDistribution uniform(std::span<const std::string> vocabulary);

  double probability(std::string_view word) const;
  std::span<const Entry> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  double total() const;

  bool operator==(const MaskedDistribution&) const = default;

 private:
  std::vector<Entry> entries_;
};

struct MaskQuery {
  const AnnotatedSentence* sentence = nullptr;
  std::size_t index = 0;
};

class MaskedLanguageModel {
 public:
  virtual ~MaskedLanguageModel() = default;

  // One distribution per query, order-aligned. Each query masks exactly one
  // position; all other tokens are taken as they currently are.
  virtual std::vector<MaskedDistribution> mask_distributions(
      std::span<const MaskQuery> queries) const = 0;

  // Whether mask_distributions may be called from several threads at once.
  virtual bool concurrent_safe() const = 0;

  // Throws InvalidInputError when index is out of range.
  MaskedDistribution mask_distribution(const AnnotatedSentence& sentence,
                                       std::size_t index) const;
};

// Lookup key for a masked context: folded tokens with the masked slot
// replaced by <MASK>, joined by single spaces.
std::string context_key(const AnnotatedSentence& sentence,
                        std::size_t masked_index);
std::string context_key(std::span<const std::string> context_tokens);

// Table-driven LM: explicit (context -> distribution) records with a uniform
// fallback over the union of all record vocabularies. Immutable after loading,
// hence safe for concurrent use.
class TableLm : public MaskedLanguageModel {
 public:
  TableLm() = default;
  // Extra words that join the fallback vocabulary without a stored context.
  explicit TableLm(std::vector<std::string> extra_vocabulary);

  // JSON Lines: {"context": [tokens with "<MASK>"], "dist": {word: prob}}.
  static TableLm load(const std::filesystem::path& path);
  static TableLm parse(std::istream& in, std::string_view source_name);

  // Context tokens are case-folded; exactly one must be <MASK>.
  void add_context(std::span<const std::string> context,
                   MaskedDistribution distribution);

  std::vector<MaskedDistribution> mask_distributions(
      std::span<const MaskQuery> queries) const override;
  bool concurrent_safe() const override { return true; }

  std::span<const std::string> vocabulary() const { return vocabulary_; }
  std::size_t context_count() const { return table_.size(); }

 private:
  void extend_vocabulary(std::span<const std::string> words);

  std::map<std::string, MaskedDistribution, std::less<>> table_;
  std::vector<std::string> vocabulary_;  // sorted, unique
  MaskedDistribution fallback_;
};

struct CandidateWord {
  std::string word;
  double log_joint = 0.0;

  bool operator==(const CandidateWord&) const = default;
};

// Joint top-k from two masked distributions. Words must be alphabetic, not
// stopwords, and differ (case-folded) from both originals. Sorted by
// descending log_joint, ties by ascending word.
std::vector<CandidateWord> joint_candidates_from(
    const MaskedDistribution& p_dist, const MaskedDistribution& q_dist,
    std::string_view original_p, std::string_view original_q, std::size_t k,
    const Tagger& tagger = Tagger::builtin());

// Queries the LM with p_i and q_j masked in a single batched call.
std::vector<CandidateWord> joint_candidates(
    const MaskedLanguageModel& lm, const AnnotatedSentence& p,
    const AnnotatedSentence& q, PositionPair pair, std::size_t k,
    const Tagger& tagger = Tagger::builtin());

}  // namespace sharedword
