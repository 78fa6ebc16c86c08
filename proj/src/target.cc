#include "sharedword/target.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "sharedword/errors.h"

namespace sharedword {

namespace {

void check_view(const PairView& view) {
  if (view.p == nullptr || view.q == nullptr) {
    throw InvalidInputError("pair view references no sentence");
  }
}

}  // namespace

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

bool ClassDistribution::normalized(double tolerance) const {
  return p_positive >= 0.0 && p_positive <= 1.0 && p_negative >= 0.0 &&
         p_negative <= 1.0 &&
         std::abs(p_positive + p_negative - 1.0) <= tolerance;
}

ClassDistribution TargetModel::predict_one(const AnnotatedSentence& p,
                                           const AnnotatedSentence& q) const {
  const PairView view{&p, &q};
  return predict(std::span(&view, 1)).at(0);
}

double gold_score(const TargetModel& model, const AnnotatedSentence& p,
                  const AnnotatedSentence& q, Label gold) {
  return model.predict_one(p, q).of(gold);
}

std::vector<ClassDistribution> PairwiseModel::predict(
    std::span<const PairView> pairs) const {
  for (const PairView& view : pairs) check_view(view);
  std::vector<ClassDistribution> out(pairs.size());
  std::exception_ptr failure;
  const auto n = static_cast<std::ptrdiff_t>(pairs.size());
#pragma omp parallel for schedule(static) if (n > 64)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    try {
      out[k] = score_pair(*pairs[k].p, *pairs[k].q);
    } catch (...) {
#pragma omp critical(sharedword_predict_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::vector<ClassDistribution> PairwiseModel::predict_serial(
    std::span<const PairView> pairs) const {
  std::vector<ClassDistribution> out;
  out.reserve(pairs.size());
  for (const PairView& view : pairs) {
    check_view(view);
    out.push_back(score_pair(*view.p, *view.q));
  }
  return out;
}

std::vector<std::string> content_set(const AnnotatedSentence& sentence) {
  std::vector<std::string> words;
  for (const Token& token : sentence) {
    if (token.is_content()) words.push_back(token.folded);
  }
  std::sort(words.begin(), words.end());
  words.erase(std::unique(words.begin(), words.end()), words.end());
  return words;
}

double content_jaccard(const AnnotatedSentence& p, const AnnotatedSentence& q) {
  const auto a = content_set(p);
  const auto b = content_set(q);
  std::vector<std::string> shared;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(shared));
  const std::size_t union_size = a.size() + b.size() - shared.size();
  if (union_size == 0) return 0.0;
  return static_cast<double>(shared.size()) / static_cast<double>(union_size);
}

OverlapModel::OverlapModel(OverlapParams params) : params_(params) {
  if (!(params_.threshold > 0.0 && params_.threshold < 1.0)) {
    throw ConfigError("overlap threshold must lie in (0, 1)");
  }
  if (!(params_.sharpness > 0.0)) {
    throw ConfigError("overlap sharpness must be positive");
  }
}

ClassDistribution OverlapModel::score_pair(const AnnotatedSentence& p,
                                           const AnnotatedSentence& q) const {
  const double j = content_jaccard(p, q);
  double pos;
  if (std::isinf(params_.sharpness)) {
    pos = j >= params_.threshold ? 1.0 : 0.0;
  } else {
    pos = sigmoid(params_.sharpness * (j - params_.threshold));
  }
  return {pos, 1.0 - pos};
}

std::string OverlapModel::describe() const {
  std::ostringstream out;
  out << "toy:overlap:threshold=" << params_.threshold
      << ",sharpness=" << params_.sharpness;
  return out.str();
}

BowLogisticModel::BowLogisticModel(BowLogisticParams params)
    : weights_(std::move(params.weights)) {}

BowLogisticModel::FeatureVector BowLogisticModel::features(
    const AnnotatedSentence& p, const AnnotatedSentence& q) {
  const auto a = content_set(p);
  const auto b = content_set(q);
  FeatureVector out;
  out.reserve(a.size() + b.size() + 1);
  out.emplace_back("bias", 1.0);
  std::size_t x = 0;
  std::size_t y = 0;
  while (x < a.size() || y < b.size()) {
    if (y == b.size() || (x < a.size() && a[x] < b[y])) {
      out.emplace_back("one:" + a[x++], 1.0);
    } else if (x == a.size() || b[y] < a[x]) {
      out.emplace_back("one:" + b[y++], 1.0);
    } else {
      out.emplace_back("both:" + a[x], 1.0);
      ++x;
      ++y;
    }
  }
  return out;
}

double BowLogisticModel::logit(const AnnotatedSentence& p,
                               const AnnotatedSentence& q) const {
  double z = 0.0;
  for (const auto& [name, value] : features(p, q)) {
    if (auto it = weights_.find(name); it != weights_.end()) {
      z += it->second * value;
    }
  }
  return z;
}

ClassDistribution BowLogisticModel::score_pair(
    const AnnotatedSentence& p, const AnnotatedSentence& q) const {
  const double pos = sigmoid(logit(p, q));
  return {pos, 1.0 - pos};
}

std::string BowLogisticModel::describe() const {
  return "toy:bow_logistic(" + std::to_string(weights_.size()) + " weights)";
}

double BowLogisticModel::train_step(std::span<const PairExample> batch,
                                    double learning_rate, double l2) {
  if (batch.empty()) return 0.0;
  // Gradients accumulate in a sorted map so the update order, and hence the
  // floating-point result, is independent of hash-table layout.
  std::map<std::string, double> gradient;
  double loss = 0.0;
  for (const PairExample& example : batch) {
    const auto feats = features(example.p, example.q);
    double z = 0.0;
    for (const auto& [name, value] : feats) {
      if (auto it = weights_.find(name); it != weights_.end()) {
        z += it->second * value;
      }
    }
    const double y = example.label == Label::kPositive ? 1.0 : 0.0;
    const double prob = sigmoid(z);
    // log(1 + e^-z) for y = 1, log(1 + e^z) for y = 0, computed stably.
    const double margin = y > 0.5 ? z : -z;
    loss += margin > 0 ? std::log1p(std::exp(-margin))
                       : -margin + std::log1p(std::exp(margin));
    for (const auto& [name, value] : feats) {
      gradient[name] += (prob - y) * value;
    }
  }
  const double scale = 1.0 / static_cast<double>(batch.size());
  loss *= scale;
  if (!std::isfinite(loss)) {
    throw TrainingError("non-finite training loss (" + std::to_string(loss) +
                        ") on a batch of " + std::to_string(batch.size()));
  }
  std::map<std::string, double> step;
  for (const auto& [name, g] : gradient) step[name] = g * scale;
  if (l2 > 0.0) {
    for (const auto& [name, w] : weights_) step[name] += l2 * w;
  }
  for (const auto& [name, s] : step) {
    double& w = weights_[name];
    w -= learning_rate * s;
    if (!std::isfinite(w)) {
      throw TrainingError("weight '" + name + "' became non-finite");
    }
  }
  return loss;
}

void BowLogisticModel::save(const std::filesystem::path& path,
                            const std::string& extra_json) const {
  nlohmann::ordered_json doc;
  doc["kind"] = "bow_logistic";
  std::map<std::string, double> sorted(weights_.begin(), weights_.end());
  doc["weights"] = sorted;
  if (!extra_json.empty()) doc["config"] = nlohmann::ordered_json::parse(extra_json);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write checkpoint " + path.string());
  out << doc.dump(2) << "\n";
}

BowLogisticModel BowLogisticModel::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read checkpoint " + path.string());
  try {
    const auto doc = nlohmann::json::parse(in);
    if (doc.at("kind").get<std::string>() != "bow_logistic") {
      throw DataError(path.string() + ": not a bow_logistic checkpoint");
    }
    BowLogisticParams params;
    for (const auto& [name, value] : doc.at("weights").items()) {
      params.weights.emplace(name, value.get<double>());
    }
    return BowLogisticModel(std::move(params));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": malformed checkpoint: " + e.what());
  }
}

std::unique_ptr<PairwiseModel> build_toy_model(const ToyModelKind& kind) {
  if (const auto* overlap = std::get_if<OverlapParams>(&kind)) {
    return std::make_unique<OverlapModel>(*overlap);
  }
  return std::make_unique<BowLogisticModel>(std::get<BowLogisticParams>(kind));
}

}  // namespace sharedword
