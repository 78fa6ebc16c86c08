#pragma once

// Target-model contract: class probabilities [Z(P, Q)]_y for a batch of
// sentence pairs, plus the in-repo toy models.

#include <cstddef>
#include <filesystem>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "sharedword/corpus.h"
#include "sharedword/label.h"
#include "sharedword/linguistics.h"

namespace sharedword {

struct ClassDistribution {
  double p_positive = 0.5;
  double p_negative = 0.5;

  double of(Label label) const {
    return label == Label::kPositive ? p_positive : p_negative;
  }
  // Ties go to positive.
  Label argmax() const {
    return p_positive >= p_negative ? Label::kPositive : Label::kNegative;
  }
  bool normalized(double tolerance = 1e-6) const;
};

struct PairView {
  const AnnotatedSentence* p = nullptr;
  const AnnotatedSentence* q = nullptr;
};

class TargetModel {
 public:
  virtual ~TargetModel() = default;

  // One distribution per pair, order-aligned. Sentences may contain [PAD].
  virtual std::vector<ClassDistribution> predict(
      std::span<const PairView> pairs) const = 0;

  virtual bool concurrent_safe() const { return true; }
  virtual std::string describe() const = 0;

  ClassDistribution predict_one(const AnnotatedSentence& p,
                                const AnnotatedSentence& q) const;
};

inline double gold_score(const ClassDistribution& prediction, Label gold) {
  return prediction.of(gold);
}
double gold_score(const TargetModel& model, const AnnotatedSentence& p,
                  const AnnotatedSentence& q, Label gold);

// Base for models that score each pair independently. predict() fans the
// batch out over OpenMP threads; predict_serial() is the reference loop and
// must produce identical output.
class PairwiseModel : public TargetModel {
 public:
  std::vector<ClassDistribution> predict(
      std::span<const PairView> pairs) const override;
  std::vector<ClassDistribution> predict_serial(
      std::span<const PairView> pairs) const;

  virtual ClassDistribution score_pair(const AnnotatedSentence& p,
                                       const AnnotatedSentence& q) const = 0;
};

// Folded content-token set of a sentence ([PAD] and stopwords excluded).
std::vector<std::string> content_set(const AnnotatedSentence& sentence);

// Jaccard similarity of the two content sets; 0 when both are empty.
double content_jaccard(const AnnotatedSentence& p, const AnnotatedSentence& q);

struct OverlapParams {
  double threshold = 0.5;
  double sharpness = 10.0;  // infinity gives a hard threshold (J >= t)
};

// p_positive = sigmoid(sharpness * (J - threshold)).
class OverlapModel : public PairwiseModel {
 public:
  explicit OverlapModel(OverlapParams params);

  ClassDistribution score_pair(const AnnotatedSentence& p,
                               const AnnotatedSentence& q) const override;
  std::string describe() const override;
  const OverlapParams& params() const { return params_; }

 private:
  OverlapParams params_;
};

struct BowLogisticParams {
  std::unordered_map<std::string, double> weights;
};

// Logistic regression over a bag-of-words view of the pair: a bias, and for
// every folded content word w either "both:w" (w in both sentences) or
// "one:w" (w in exactly one).
class BowLogisticModel : public PairwiseModel {
 public:
  using FeatureVector = std::vector<std::pair<std::string, double>>;

  BowLogisticModel() = default;
  explicit BowLogisticModel(BowLogisticParams params);

  static FeatureVector features(const AnnotatedSentence& p,
                                const AnnotatedSentence& q);

  double logit(const AnnotatedSentence& p, const AnnotatedSentence& q) const;
  ClassDistribution score_pair(const AnnotatedSentence& p,
                               const AnnotatedSentence& q) const override;
  std::string describe() const override;

  // One mini-batch gradient step on mean log-loss plus l2/2 * |w|^2.
  // Returns the mean log-loss before the update. Throws TrainingError when
  // the loss or any updated weight is non-finite.
  double train_step(std::span<const PairExample> batch, double learning_rate,
                    double l2);

  const std::unordered_map<std::string, double>& weights() const {
    return weights_;
  }

  // Checkpoint: {"kind": "bow_logistic", "weights": {feature: value}, ...}.
  void save(const std::filesystem::path& path,
            const std::string& extra_json = "") const;
  static BowLogisticModel load(const std::filesystem::path& path);

 private:
  std::unordered_map<std::string, double> weights_;
};

using ToyModelKind = std::variant<OverlapParams, BowLogisticParams>;

// Throws ConfigError on threshold outside (0,1) or non-positive sharpness.
std::unique_ptr<PairwiseModel> build_toy_model(const ToyModelKind& kind);

double sigmoid(double x);

}  // namespace sharedword
