#include "sharedword/maskedlm.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>

#include "json.hpp"
#include "sharedword/errors.h"

namespace sharedword {

MaskedDistribution::MaskedDistribution(std::vector<Entry> entries)
    : entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(),
            [](const Entry& a, const Entry& b) { return a.first < b.first; });
  double sum = 0.0;
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    const double prob = entries_[k].second;
    if (!std::isfinite(prob) || prob < 0.0) {
      throw InvalidInputError("invalid probability for '" + entries_[k].first +
                              "'");
    }
    if (k > 0 && entries_[k].first == entries_[k - 1].first) {
      throw InvalidInputError("duplicate vocabulary word '" +
                              entries_[k].first + "'");
    }
    sum += prob;
  }
  if (!entries_.empty() && std::abs(sum - 1.0) > kDistributionTolerance) {
    throw InvalidInputError("distribution sums to " + std::to_string(sum));
  }
}

MaskedDistribution MaskedDistribution::uniform(
    std::span<const std::string> vocabulary) {
  std::vector<Entry> entries;
  entries.reserve(vocabulary.size());
  const double prob = 1.0 / static_cast<double>(vocabulary.size());
  for (const std::string& word : vocabulary) entries.emplace_back(word, prob);
  return MaskedDistribution(std::move(entries));
}

double MaskedDistribution::probability(std::string_view word) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), word,
      [](const Entry& e, std::string_view w) { return e.first < w; });
  return it != entries_.end() && it->first == word ? it->second : 0.0;
}

double MaskedDistribution::total() const {
  double sum = 0.0;
  for (const auto& [word, prob] : entries_) sum += prob;
  return sum;
}

MaskedDistribution MaskedLanguageModel::mask_distribution(
    const AnnotatedSentence& sentence, std::size_t index) const {
  if (index >= sentence.size()) {
    throw InvalidInputError("mask index " + std::to_string(index) +
                            " out of range for sentence of length " +
                            std::to_string(sentence.size()));
  }
  const MaskQuery query{&sentence, index};
  auto result = mask_distributions(std::span(&query, 1));
  return std::move(result.at(0));
}

std::string context_key(const AnnotatedSentence& sentence,
                        std::size_t masked_index) {
  std::string key;
  for (std::size_t k = 0; k < sentence.size(); ++k) {
    if (k > 0) key += ' ';
    key += k == masked_index ? std::string(kMaskToken) : sentence[k].folded;
  }
  return key;
}

std::string context_key(std::span<const std::string> context_tokens) {
  std::string key;
  for (std::size_t k = 0; k < context_tokens.size(); ++k) {
    if (k > 0) key += ' ';
    key += context_tokens[k] == kMaskToken ? context_tokens[k]
                                           : fold_case(context_tokens[k]);
  }
  return key;
}

TableLm::TableLm(std::vector<std::string> extra_vocabulary) {
  extend_vocabulary(extra_vocabulary);
}

void TableLm::extend_vocabulary(std::span<const std::string> words) {
  vocabulary_.insert(vocabulary_.end(), words.begin(), words.end());
  std::sort(vocabulary_.begin(), vocabulary_.end());
  vocabulary_.erase(std::unique(vocabulary_.begin(), vocabulary_.end()),
                    vocabulary_.end());
  fallback_ = vocabulary_.empty() ? MaskedDistribution()
                                  : MaskedDistribution::uniform(vocabulary_);
}

void TableLm::add_context(std::span<const std::string> context,
                          MaskedDistribution distribution) {
  const auto masks = std::count(context.begin(), context.end(),
                                std::string(kMaskToken));
  if (masks != 1) {
    throw InvalidInputError("table LM context must contain exactly one " +
                            std::string(kMaskToken));
  }
  std::vector<std::string> words;
  for (const auto& [word, prob] : distribution.entries()) words.push_back(word);
  extend_vocabulary(words);
  table_.insert_or_assign(context_key(context), std::move(distribution));
}

TableLm TableLm::parse(std::istream& in, std::string_view source_name) {
  TableLm lm;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where =
        std::string(source_name) + ":" + std::to_string(line_no);
    try {
      const auto record = nlohmann::json::parse(line);
      const auto context = record.at("context").get<std::vector<std::string>>();
      std::vector<MaskedDistribution::Entry> entries;
      for (const auto& [word, prob] : record.at("dist").items()) {
        entries.emplace_back(word, prob.get<double>());
      }
      lm.add_context(context, MaskedDistribution(std::move(entries)));
    } catch (const nlohmann::json::exception& e) {
      throw DataError(where + ": malformed table LM record: " + e.what());
    } catch (const InvalidInputError& e) {
      throw DataError(where + ": " + e.what());
    }
  }
  return lm;
}

TableLm TableLm::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read table LM file " + path.string());
  return parse(in, path.string());
}

std::vector<MaskedDistribution> TableLm::mask_distributions(
    std::span<const MaskQuery> queries) const {
  std::vector<MaskedDistribution> out;
  out.reserve(queries.size());
  for (const MaskQuery& query : queries) {
    if (query.sentence == nullptr || query.index >= query.sentence->size()) {
      throw InvalidInputError("mask index out of range");
    }
    auto it = table_.find(context_key(*query.sentence, query.index));
    out.push_back(it != table_.end() ? it->second : fallback_);
  }
  return out;
}

std::vector<CandidateWord> joint_candidates_from(
    const MaskedDistribution& p_dist, const MaskedDistribution& q_dist,
    std::string_view original_p, std::string_view original_q, std::size_t k,
    const Tagger& tagger) {
  const std::string orig_p = fold_case(original_p);
  const std::string orig_q = fold_case(original_q);
  std::vector<CandidateWord> scored;

  // Both entry lists are sorted by word; a merge visits the shared support.
  auto a = p_dist.entries().begin();
  auto b = q_dist.entries().begin();
  const auto a_end = p_dist.entries().end();
  const auto b_end = q_dist.entries().end();
  while (a != a_end && b != b_end) {
    if (a->first < b->first) {
      ++a;
    } else if (b->first < a->first) {
      ++b;
    } else {
      const std::string& word = a->first;
      if (a->second > 0.0 && b->second > 0.0 && is_alphabetic_word(word)) {
        const std::string folded = fold_case(word);
        if (folded != orig_p && folded != orig_q && !tagger.is_stopword(folded)) {
          scored.push_back({word, std::log(a->second) + std::log(b->second)});
        }
      }
      ++a;
      ++b;
    }
  }

  auto better = [](const CandidateWord& x, const CandidateWord& y) {
    if (x.log_joint != y.log_joint) return x.log_joint > y.log_joint;
    return x.word < y.word;
  };
  const std::size_t keep = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + keep, scored.end(), better);
  scored.resize(keep);
  return scored;
}

std::vector<CandidateWord> joint_candidates(const MaskedLanguageModel& lm,
                                            const AnnotatedSentence& p,
                                            const AnnotatedSentence& q,
                                            PositionPair pair, std::size_t k,
                                            const Tagger& tagger) {
  if (pair.i >= p.size() || pair.j >= q.size()) {
    throw InvalidInputError("position pair out of range");
  }
  const MaskQuery queries[] = {{&p, pair.i}, {&q, pair.j}};
  const auto dists = lm.mask_distributions(queries);
  if (dists.size() != 2) {
    throw ProtocolError("language model returned " +
                        std::to_string(dists.size()) +
                        " distributions for 2 queries");
  }
  return joint_candidates_from(dists[0], dists[1], p[pair.i].surface,
                               q[pair.j].surface, k, tagger);
}

}  // namespace sharedword
