// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <omp.h>

#include <string>
#include <vector>

#include "sharedword/attack.h"
#include "sharedword/maskedlm.h"
#include "sharedword/rng.h"
#include "sharedword/target.h"

namespace sw = sharedword;

namespace {

const std::vector<std::string> kNouns{"car", "house", "phone", "garden", "camera",
                                      "river", "ticket", "kitchen", "bike", "laptop"};
const std::vector<std::string> kVerbs{"buy", "sell", "fix", "clean", "paint", "rent"};
const std::vector<std::string> kAdjectives{"cheap", "old", "new", "red", "small", "quiet"};

std::string sentence(sw::Rng& rng) {
  auto pick = [&](const std::vector<std::string>& pool) {
    return pool[rng.uniform_index(pool.size())];
  };
  return "how can i " + pick(kVerbs) + " the " + pick(kAdjectives) + " " + pick(kNouns) +
         " with a " + pick(kNouns) + " ?";
}

std::vector<sw::PairExample> examples(std::size_t n) {
  sw::Rng rng = sw::Rng::stream(1, "bench");
  std::vector<sw::PairExample> out;
  for (std::size_t k = 0; k < n; ++k) {
    const auto label = k % 2 == 0 ? sw::Label::kPositive : sw::Label::kNegative;
    const std::string p = sentence(rng);
    out.push_back({sw::annotate(p), sw::annotate(label == sw::Label::kPositive ? p : sentence(rng)),
                   label, sw::DirectSource{std::to_string(k)}});
  }
  return out;
}

std::vector<sw::PairView> views(const std::vector<sw::PairExample>& data) {
  std::vector<sw::PairView> out;
  for (const auto& e : data) out.push_back({&e.p, &e.q});
  return out;
}

sw::BowLogisticModel bow_model() {
  sw::Rng rng = sw::Rng::stream(2, "bench-weights");
  sw::BowLogisticParams params;
  params.weights["bias"] = -1.0;
  for (const auto* pool : {&kNouns, &kVerbs, &kAdjectives}) {
    for (const auto& w : *pool) {
      params.weights["both:" + w] = 2.0 * rng.uniform01();
      params.weights["one:" + w] = -rng.uniform01();
    }
  }
  return sw::BowLogisticModel(std::move(params));
}

void BM_PredictSerial(benchmark::State& state) {
  const auto data = examples(static_cast<std::size_t>(state.range(0)));
  const auto batch = views(data);
  const auto model = bow_model();
  for (auto _ : state) benchmark::DoNotOptimize(model.predict_serial(batch));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_PredictParallel(benchmark::State& state) {
  const auto data = examples(static_cast<std::size_t>(state.range(0)));
  const auto batch = views(data);
  const auto model = bow_model();
  for (auto _ : state) benchmark::DoNotOptimize(model.predict(batch));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

const sw::TableLm& lm() {
  static const sw::TableLm table(std::vector<std::string>{
      "boat", "lamp", "tower", "engine", "garden", "wash", "scan", "heavy", "bright"});
  return table;
}

sw::AttackConfig attack_config() {
  sw::AttackConfig config;
  config.step_limit = 3;
  config.candidates_per_pair = 5;
  config.beam_width = 5;
  config.profile = sw::Profile::kCustom;
  return config;
}

void BM_AttackAllSerial(benchmark::State& state) {
  const auto data = examples(static_cast<std::size_t>(state.range(0)));
  const auto model = bow_model();
  for (auto _ : state) {
    benchmark::DoNotOptimize(sw::attack_all_serial(data, model, lm(), attack_config()));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_AttackAllParallel(benchmark::State& state) {
  const auto data = examples(static_cast<std::size_t>(state.range(0)));
  const auto model = bow_model();
  const int workers = omp_get_max_threads();
  for (auto _ : state) {
    benchmark::DoNotOptimize(sw::attack_all(data, model, lm(), attack_config(), workers));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
  state.counters["workers"] = workers;
}

}  // namespace

BENCHMARK(BM_PredictSerial)->Arg(256)->Arg(4096);
BENCHMARK(BM_PredictParallel)->Arg(256)->Arg(4096);
BENCHMARK(BM_AttackAllSerial)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AttackAllParallel)->Arg(32)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
