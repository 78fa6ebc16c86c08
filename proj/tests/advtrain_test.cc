#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "sharedword/advtrain.h"
#include "sharedword/errors.h"
#include "support/synthetic.h"
#include "support/toy_models.h"

namespace sharedword {
namespace {

std::vector<PairExample> direct_examples(std::span<const RawPair> pairs) {
  std::vector<PairExample> out;
  for (const RawPair& pair : pairs) out.push_back(make_direct_example(pair));
  return out;
}

AdvTrainConfig small_config() {
  AdvTrainConfig cfg;
  cfg.epochs = 2;
  cfg.batch_size = 20;
  cfg.rng_seed = 4;
  return cfg;
}

TEST(ModifiedCount, RoundsHalfAwayFromZero) {
  EXPECT_EQ(modified_count(32, 0.10), 3u);
  EXPECT_EQ(modified_count(35, 0.10), 4u);  // 3.5
  EXPECT_EQ(modified_count(4, 0.10), 0u);
  EXPECT_EQ(modified_count(10, 0.0), 0u);
  EXPECT_EQ(modified_count(10, 0.95), 10u);
}

TEST(AdvTrainConfig, Validation) {
  AdvTrainConfig cfg;
  EXPECT_DOUBLE_EQ(cfg.adv_fraction, 0.10);
  EXPECT_EQ(cfg.attack_cfg.beam_width, 1u);
  EXPECT_EQ(cfg.attack_cfg.step_limit, 5u);
  EXPECT_EQ(cfg.attack_cfg.candidates_per_pair, 25u);
  EXPECT_NO_THROW(cfg.validate());
  cfg.adv_fraction = 1.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg.adv_fraction = -0.1;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = AdvTrainConfig{};
  cfg.attack_cfg.beam_width = 2;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = AdvTrainConfig{};
  cfg.batch_size = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = AdvTrainConfig{};
  cfg.learning_rate = INFINITY;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(MakeAdvBatch, ReplacesTheRequestedNumberOfSlots) {
  const auto raw = testing::synthetic_dataset(40, 3);
  const auto batch = direct_examples(raw);
  const auto model = testing::random_bow_model({"car", "house", "phone"}, 1);
  testing::SyntheticLm lm(2);
  AdvTrainConfig cfg;
  cfg.adv_fraction = 0.25;
  Rng rng(9);
  const auto out = make_adv_batch(model, lm, batch, cfg, rng);
  ASSERT_EQ(out.size(), batch.size());
  std::size_t changed = 0;
  for (std::size_t k = 0; k < out.size(); ++k) {
    EXPECT_EQ(out[k].label, batch[k].label);
    EXPECT_EQ(out[k].id(), batch[k].id());
    EXPECT_EQ(out[k].p.size(), batch[k].p.size());
    if (!(out[k] == batch[k])) ++changed;
  }
  EXPECT_LE(changed, 10u);
  EXPECT_GT(changed, 0u);
}

TEST(MakeAdvBatch, ZeroFractionDrawsNothing) {
  const auto batch = direct_examples(testing::synthetic_dataset(8, 3));
  testing::FixedModel model(0.9);
  testing::SyntheticLm lm(2);
  AdvTrainConfig cfg;
  cfg.adv_fraction = 0.0;
  Rng rng(9), untouched(9);
  EXPECT_EQ(make_adv_batch(model, lm, batch, cfg, rng), batch);
  EXPECT_EQ(rng.next(), untouched.next());
}

TEST(AdversarialFinetune, ZeroFractionEqualsPlainTraining) {
  const auto train = direct_examples(testing::synthetic_dataset(120, 5));
  testing::SyntheticLm lm(2);
  AdvTrainConfig cfg = small_config();
  cfg.adv_fraction = 0.0;
  BowLogisticModel plain, adv;
  const auto plain_run = train_plain(plain, train, cfg.train_config());
  const auto adv_run = adversarial_finetune(adv, lm, train, {}, cfg);
  EXPECT_EQ(plain.weights(), adv.weights());
  EXPECT_EQ(plain_run.batch_losses, adv_run.batch_losses);
  EXPECT_EQ(plain_run.batch_losses.size(), 12u);  // 2 epochs x 6 batches
  EXPECT_TRUE(adv_run.metrics.empty());
}

TEST(AdversarialFinetune, DeterministicAndRecordsMetrics) {
  const auto raw = testing::synthetic_dataset(120, 5);
  const auto train = direct_examples(raw);
  const auto probe = sample_originals(raw, 20, 6);
  testing::SyntheticLm lm(2);
  const AdvTrainConfig cfg = small_config();
  BowLogisticModel a, b;
  const auto run_a = adversarial_finetune(a, lm, train, probe, cfg);
  const auto run_b = adversarial_finetune(b, lm, train, probe, cfg);
  EXPECT_EQ(a.weights(), b.weights());
  ASSERT_EQ(run_a.metrics.size(), 4u);
  EXPECT_EQ(run_a.metrics[0].split, "original");
  EXPECT_EQ(run_a.metrics[1].split, "modified");
  EXPECT_EQ(run_a.metrics[3].epoch, 2u);
  EXPECT_EQ(run_a.metrics[1].accuracy.total_pos + run_a.metrics[1].accuracy.total_neg, 20u);
  for (std::size_t k = 0; k < run_a.metrics.size(); ++k) {
    EXPECT_EQ(run_a.metrics[k].accuracy, run_b.metrics[k].accuracy);
  }
}

TEST(TrainPlain, LearnsTheSyntheticTask) {
  const auto raw = testing::synthetic_dataset(600, 1);
  BowLogisticModel model;
  TrainConfig cfg;
  cfg.rng_seed = 3;
  train_plain(model, direct_examples(raw), cfg);
  const auto held_out = direct_examples(testing::synthetic_dataset(200, 2, "h"));
  const auto acc = evaluate_accuracy(model, held_out);
  EXPECT_GE(*acc.all(), 90.0);
}

TEST(TrainPlain, ErrorsNameEpochAndBatch) {
  const auto train = direct_examples(testing::synthetic_dataset(10, 5));
  BowLogisticModel model;
  TrainConfig cfg;
  cfg.learning_rate = 1e308;
  cfg.batch_size = 2;
  try {
    train_plain(model, train, cfg);
    FAIL() << "expected TrainingError";
  } catch (const TrainingError& e) {
    EXPECT_NE(std::string(e.what()).find("epoch 1"), std::string::npos) << e.what();
  }
  EXPECT_THROW(train_plain(model, {}, TrainConfig{}), InvalidInputError);
}

TEST(MetricsCsv, Format) {
  std::vector<EpochMetrics> rows{{1, "original", Accuracy{9, 10, 7, 10}},
                                 {1, "modified", Accuracy{1, 3, 0, 0}}};
  std::ostringstream out;
  write_metrics_csv(out, rows);
  EXPECT_EQ(out.str(),
            "epoch,split,acc_pos,acc_neg,acc_all\n"
            "1,original,90.0,70.0,80.0\n"
            "1,modified,33.3,-,33.3\n");
}

}  // namespace
}  // namespace sharedword
