#pragma once

// Two-stage beam search over shared-word substitutions.
//
// Each step first ranks replaceable position pairs by writing [PAD] at both
// positions and keeping the B probes with the lowest gold-label score, then
// fills each surviving probe with its top-K joint LM candidates and keeps the
// B fully substituted successors with the lowest gold-label score. The search
// stops as soon as the best state of a step is misclassified, or after S
// steps; the best state evaluated anywhere in the search is returned.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sharedword/corpus.h"
#include "sharedword/maskedlm.h"
#include "sharedword/target.h"

namespace sharedword {

enum class Profile { kQqp, kMrpc, kCustom };

Profile parse_profile(std::string_view name);
std::string_view to_string(Profile profile);

struct AttackConfig {
  std::size_t step_limit = 5;           // S
  std::size_t candidates_per_pair = 25;  // K
  std::size_t beam_width = 25;           // B
  std::uint64_t rng_seed = 0;
  Profile profile = Profile::kQqp;

  // qqp: (S, K, B) = (5, 25, 25); mrpc doubles all three.
  static AttackConfig for_profile(Profile profile);

  // Throws ConfigError on zero S/K/B or a named profile whose values differ
  // from its fixed triple.
  void validate() const;
};

struct Edit {
  std::size_t step = 0;
  PositionPair pair;
  std::string old_p;
  std::string old_q;
  std::string new_word;

  bool operator==(const Edit&) const = default;
};

struct BeamState {
  // Current sentences. They never contain [PAD]: a probe keeps its parent's
  // sentences and records the probed positions in pending_pad.
  AnnotatedSentence p;
  AnnotatedSentence q;
  std::vector<Edit> history;
  FrozenPositions frozen;
  // Gold-label probability of (p, q), or of the padded probe when
  // pending_pad is set.
  double gold_score = 1.0;
  Label predicted = Label::kPositive;
  std::optional<PositionPair> pending_pad;
  // Rank inside the beam the state belongs to; breaks remaining ties.
  std::size_t order = 0;

  // Copies of p and q with [PAD] at the pending positions.
  std::pair<AnnotatedSentence, AnnotatedSentence> probe_sentences() const;
};

struct AttackResult {
  bool success = false;
  PairExample original_example;
  PairExample final_example;
  std::size_t steps_used = 0;
  std::size_t model_queries = 0;
  double best_gold_score = 1.0;
  std::vector<Edit> history;
};

class AttackEngine {
 public:
  AttackEngine(const TargetModel& model, const MaskedLanguageModel& lm,
               AttackConfig config, const Tagger& tagger = Tagger::builtin());

  // Probes every replaceable pair of every state and keeps the global top-B
  // by (gold score, i, j, parent order). Empty when no state has a pair.
  std::vector<BeamState> stage1_positions(std::span<const BeamState> beam,
                                          Label gold);

  // Substitutes the top-K joint candidates into each probe's pending pair and
  // keeps the global top-B by (gold score, i, j, word, parent order), with
  // identical sentence pairs collapsed to their first occurrence.
  std::vector<BeamState> stage2_words(std::span<const BeamState> probes,
                                      Label gold);

  AttackResult attack(const PairExample& example);

  // Pairs sent to the target model since construction.
  std::size_t model_queries() const { return queries_; }
  const AttackConfig& config() const { return config_; }

 private:
  std::vector<ClassDistribution> query(std::span<const PairView> views);
  std::vector<BeamState> expand(std::span<const BeamState> probes, Label gold);

  const TargetModel& model_;
  const MaskedLanguageModel& lm_;
  AttackConfig config_;
  const Tagger& tagger_;
  std::size_t queries_ = 0;
};

AttackResult attack_example(const PairExample& example,
                            const TargetModel& model,
                            const MaskedLanguageModel& lm,
                            const AttackConfig& config);

// Attacks every example, spreading examples over `workers` OpenMP threads
// when both the model and the LM are concurrent-safe. Output order matches
// input order and is identical to attack_all_serial.
std::vector<AttackResult> attack_all(std::span<const PairExample> examples,
                                     const TargetModel& model,
                                     const MaskedLanguageModel& lm,
                                     const AttackConfig& config, int workers);
std::vector<AttackResult> attack_all_serial(
    std::span<const PairExample> examples, const TargetModel& model,
    const MaskedLanguageModel& lm, const AttackConfig& config);

}  // namespace sharedword
