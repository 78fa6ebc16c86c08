#pragma once

// Adversarial fine-tuning of the trainable toy model: every batch replaces a
// fixed fraction of its examples with modifications generated against the
// model as it currently stands.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sharedword/attack.h"
#include "sharedword/corpus.h"
#include "sharedword/evalreport.h"
#include "sharedword/maskedlm.h"
#include "sharedword/rng.h"
#include "sharedword/target.h"

namespace sharedword {

struct TrainConfig {
  std::size_t epochs = 5;
  std::size_t batch_size = 32;
  double learning_rate = 0.5;
  double l2 = 1e-4;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

struct AdvTrainConfig {
  // 0 disables modification and reduces to plain training.
  double adv_fraction = 0.10;
  std::size_t epochs = 5;
  std::size_t batch_size = 32;
  double learning_rate = 0.5;
  double l2 = 1e-4;
  // Generation settings; beam_width must be 1.
  AttackConfig attack_cfg = beam_one(AttackConfig::for_profile(Profile::kQqp));
  // Settings for the per-epoch modified-accuracy probe.
  AttackConfig probe_attack_cfg = AttackConfig::for_profile(Profile::kQqp);
  std::uint64_t rng_seed = 0;
  int workers = 1;

  // Throws ConfigError unless 0 <= adv_fraction < 1, beam width is 1 and the
  // sizes are positive.
  void validate() const;
  TrainConfig train_config() const;

  static AttackConfig beam_one(AttackConfig config);
};

// round(batch_size * fraction), halves rounded away from zero.
std::size_t modified_count(std::size_t batch_size, double fraction);

// Replaces modified_count(batch.size(), adv_fraction) randomly chosen slots of
// `batch` with the best modification found against `model`, keeping the gold
// label. Slots whose attack fails still take the best-found modification.
std::vector<PairExample> make_adv_batch(const TargetModel& model,
                                        const MaskedLanguageModel& lm,
                                        std::span<const PairExample> batch,
                                        const AdvTrainConfig& cfg, Rng& rng);

struct EpochMetrics {
  std::size_t epoch = 0;
  std::string split;  // "original" or "modified"
  Accuracy accuracy;
};

struct TrainingRun {
  std::vector<double> batch_losses;
  std::vector<EpochMetrics> metrics;
};

// Shuffled mini-batch gradient descent on the clean training data.
TrainingRun train_plain(BowLogisticModel& model,
                        std::span<const PairExample> train_data,
                        const TrainConfig& cfg);

// Same batching and shuffling as train_plain, with make_adv_batch applied to
// every batch. After each epoch, when `probe` is non-empty, records original
// accuracy on `probe` and accuracy on its modifications against the current
// model. Throws TrainingError on a non-finite loss.
TrainingRun adversarial_finetune(BowLogisticModel& model,
                                 const MaskedLanguageModel& lm,
                                 std::span<const PairExample> train_data,
                                 std::span<const PairExample> probe,
                                 const AdvTrainConfig& cfg);

// Final (best-found) modification of every attack result.
std::vector<PairExample> modified_set(std::span<const AttackResult> results);

// `epoch,split,acc_pos,acc_neg,acc_all` with one-decimal percentages.
void write_metrics_csv(std::ostream& out, std::span<const EpochMetrics> rows);
void write_metrics_csv(const std::filesystem::path& path,
                       std::span<const EpochMetrics> rows);

}  // namespace sharedword
