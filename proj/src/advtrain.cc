#include "sharedword/advtrain.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>

#include "sharedword/errors.h"
#include "sharedword/rng.h"

namespace sharedword {

namespace {

void check_sizes(std::size_t epochs, std::size_t batch_size,
                 double learning_rate, double l2) {
  if (epochs == 0 || batch_size == 0) {
    throw ConfigError("epochs and batch size must be positive");
  }
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("learning rate must be positive and finite");
  }
  if (!(l2 >= 0.0) || !std::isfinite(l2)) {
    throw ConfigError("l2 penalty must be non-negative and finite");
  }
}

std::vector<std::size_t> shuffled_order(std::size_t n, Rng& rng) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(std::span(order));
  return order;
}

std::vector<PairExample> gather(std::span<const PairExample> data,
                                std::span<const std::size_t> indices) {
  std::vector<PairExample> out;
  out.reserve(indices.size());
  for (std::size_t k : indices) out.push_back(data[k]);
  return out;
}

double checked_step(BowLogisticModel& model, std::span<const PairExample> batch,
                    double learning_rate, double l2, std::size_t epoch,
                    std::size_t batch_index) {
  try {
    return model.train_step(batch, learning_rate, l2);
  } catch (const TrainingError& e) {
    throw TrainingError(std::string(e.what()) + " (epoch " +
                        std::to_string(epoch) + ", batch " +
                        std::to_string(batch_index) + ")");
  }
}

}  // namespace

void TrainConfig::validate() const {
  check_sizes(epochs, batch_size, learning_rate, l2);
}

AttackConfig AdvTrainConfig::beam_one(AttackConfig config) {
  config.beam_width = 1;
  config.profile = Profile::kCustom;
  return config;
}

void AdvTrainConfig::validate() const {
  check_sizes(epochs, batch_size, learning_rate, l2);
  if (!(adv_fraction >= 0.0 && adv_fraction < 1.0)) {
    throw ConfigError("adv_fraction must lie in [0, 1)");
  }
  if (attack_cfg.beam_width != 1) {
    throw ConfigError("adversarial generation uses beam width 1");
  }
  attack_cfg.validate();
  probe_attack_cfg.validate();
  if (workers < 1) throw ConfigError("workers must be at least 1");
}

TrainConfig AdvTrainConfig::train_config() const {
  return TrainConfig{epochs, batch_size, learning_rate, l2, rng_seed};
}

std::size_t modified_count(std::size_t batch_size, double fraction) {
  return static_cast<std::size_t>(
      std::llround(static_cast<double>(batch_size) * fraction));
}

std::vector<PairExample> make_adv_batch(const TargetModel& model,
                                        const MaskedLanguageModel& lm,
                                        std::span<const PairExample> batch,
                                        const AdvTrainConfig& cfg, Rng& rng) {
  if (batch.empty()) throw InvalidInputError("cannot build an empty batch");
  std::vector<PairExample> out(batch.begin(), batch.end());
  const std::size_t m = modified_count(batch.size(), cfg.adv_fraction);
  if (m == 0) return out;

  auto slots = shuffled_order(batch.size(), rng);
  slots.resize(m);
  std::sort(slots.begin(), slots.end());
  const auto originals = gather(batch, slots);
  const auto results =
      attack_all(originals, model, lm, cfg.attack_cfg, cfg.workers);
  for (std::size_t k = 0; k < m; ++k) {
    out[slots[k]] = results[k].final_example;
  }
  return out;
}

std::vector<PairExample> modified_set(std::span<const AttackResult> results) {
  std::vector<PairExample> out;
  out.reserve(results.size());
  for (const AttackResult& r : results) out.push_back(r.final_example);
  return out;
}

TrainingRun train_plain(BowLogisticModel& model,
                        std::span<const PairExample> train_data,
                        const TrainConfig& cfg) {
  cfg.validate();
  if (train_data.empty()) throw InvalidInputError("training data is empty");
  Rng rng = Rng::stream(cfg.rng_seed, "training");
  TrainingRun run;
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const auto order = shuffled_order(train_data.size(), rng);
    std::size_t batch_index = 0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), start + cfg.batch_size);
      const auto batch =
          gather(train_data, std::span(order).subspan(start, end - start));
      run.batch_losses.push_back(checked_step(model, batch, cfg.learning_rate,
                                              cfg.l2, epoch, batch_index++));
    }
  }
  return run;
}

TrainingRun adversarial_finetune(BowLogisticModel& model,
                                 const MaskedLanguageModel& lm,
                                 std::span<const PairExample> train_data,
                                 std::span<const PairExample> probe,
                                 const AdvTrainConfig& cfg) {
  cfg.validate();
  if (train_data.empty()) throw InvalidInputError("training data is empty");
  // Shares the stream with train_plain; make_adv_batch draws from it only
  // when a batch actually gets modified slots.
  Rng rng = Rng::stream(cfg.rng_seed, "training");
  TrainingRun run;
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const auto order = shuffled_order(train_data.size(), rng);
    std::size_t batch_index = 0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), start + cfg.batch_size);
      const auto clean =
          gather(train_data, std::span(order).subspan(start, end - start));
      const auto batch = make_adv_batch(model, lm, clean, cfg, rng);
      run.batch_losses.push_back(checked_step(model, batch, cfg.learning_rate,
                                              cfg.l2, epoch, batch_index++));
    }
    if (!probe.empty()) {
      run.metrics.push_back({epoch, "original", evaluate_accuracy(model, probe)});
      const auto attacked =
          attack_all(probe, model, lm, cfg.probe_attack_cfg, cfg.workers);
      const auto modified = modified_set(attacked);
      run.metrics.push_back(
          {epoch, "modified", evaluate_accuracy(model, modified)});
    }
  }
  return run;
}

void write_metrics_csv(std::ostream& out, std::span<const EpochMetrics> rows) {
  out << "epoch,split,acc_pos,acc_neg,acc_all\n";
  for (const EpochMetrics& row : rows) {
    const Accuracy& a = row.accuracy;
    out << row.epoch << ',' << row.split << ','
        << format_percent(a.correct_pos, a.total_pos) << ','
        << format_percent(a.correct_neg, a.total_neg) << ','
        << format_percent(a.correct_pos + a.correct_neg,
                          a.total_pos + a.total_neg)
        << '\n';
  }
}

void write_metrics_csv(const std::filesystem::path& path,
                       std::span<const EpochMetrics> rows) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write metrics file " + path.string());
  write_metrics_csv(out, rows);
}

}  // namespace sharedword
