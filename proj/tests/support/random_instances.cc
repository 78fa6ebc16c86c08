#include "support/random_instances.h"

#include <algorithm>
#include <limits>

#include "sharedword/rng.h"

namespace sharedword::testing {

namespace {

const std::vector<std::string>& sentence_pool() {
  static const std::vector<std::string> pool{
      "car",  "house", "phone", "river", "buy",  "sell",  "fix",   "paint",
      "cheap", "old",  "red",   "big",   "today", "soon", "the",   "is",
      "what", "how",   "of",    "a",     "?",     ",",    "Car",   "money"};
  return pool;
}

const std::vector<std::string>& lm_pool() {
  static const std::vector<std::string> pool{
      "car",  "house", "boat", "lamp",  "buy",   "wash", "cheap", "new",
      "blue", "soon",  "the",  "what",  "x1",    "co-op", "Boat", "fix",
      "river", "hot"};
  return pool;
}

AnnotatedSentence random_sentence(Rng& rng) {
  const auto& pool = sentence_pool();
  const std::size_t length = 3 + rng.uniform_index(5);
  std::vector<std::string> tokens;
  for (std::size_t k = 0; k < length; ++k) {
    tokens.push_back(pool[rng.uniform_index(pool.size())]);
  }
  return Tagger::builtin().annotate_tokens(tokens);
}

std::vector<std::string> all_words() {
  std::vector<std::string> words;
  for (const auto& w : sentence_pool()) words.push_back(fold_case(w));
  for (const auto& w : lm_pool()) words.push_back(fold_case(w));
  std::sort(words.begin(), words.end());
  words.erase(std::unique(words.begin(), words.end()), words.end());
  return words;
}

}  // namespace

TinyInstance random_tiny_instance(std::uint64_t seed, std::size_t max_pairs,
                                  std::size_t lm_vocab_size) {
  Rng rng = Rng::stream(seed, "tiny-instance");
  TinyInstance out{PairExample{annotate("x"), annotate("x"), Label::kPositive,
                               DirectSource{"tiny" + std::to_string(seed)}},
                   nullptr, nullptr, 0};
  while (true) {
    const Label label = rng.uniform01() < 0.5 ? Label::kPositive : Label::kNegative;
    PairExample example{random_sentence(rng), random_sentence(rng), label,
                        DirectSource{"tiny" + std::to_string(seed)}};
    const std::size_t pairs = replaceable_pairs(example).size();
    if (pairs >= 1 && pairs <= max_pairs) {
      out.example = std::move(example);
      out.pair_count = pairs;
      break;
    }
  }

  std::vector<std::string> vocab = lm_pool();
  rng.shuffle(std::span(vocab));
  vocab.resize(std::min(vocab.size(), 1 + rng.uniform_index(lm_vocab_size)));
  out.lm = std::make_unique<HashedLm>(vocab, rng.next());

  if (rng.uniform01() < 0.5) {
    const double thresholds[] = {0.25, 0.5, 0.75};
    OverlapParams params{thresholds[rng.uniform_index(3)],
                         rng.uniform01() < 0.2 ? std::numeric_limits<double>::infinity()
                                                : 2.0 + 10.0 * rng.uniform01()};
    out.model = std::make_unique<OverlapModel>(params);
  } else {
    out.model = std::make_unique<BowLogisticModel>(random_bow_model(all_words(), rng.next()));
  }
  return out;
}

}  // namespace sharedword::testing
