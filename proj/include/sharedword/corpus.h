#pragma once

// Dataset ingestion (QQP / MRPC TSV) and sampling of original examples.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sharedword/label.h"
#include "sharedword/linguistics.h"

namespace sharedword {

struct RawPair {
  std::string id;
  std::string sentence1;
  std::string sentence2;
  Label label = Label::kNegative;

  bool operator==(const RawPair&) const = default;
};

enum class DatasetFormat { kQqpTsv, kMrpcTsv };

DatasetFormat parse_dataset_format(std::string_view name);
std::string_view to_string(DatasetFormat format);

struct LoadedDataset {
  std::vector<RawPair> pairs;
  // 1-based line numbers (header is line 1) of skipped malformed rows.
  std::vector<std::size_t> skipped_lines;

  std::size_t skipped() const { return skipped_lines.size(); }
};

// Malformed rows are skipped and counted; more than 10% malformed rows is a
// DataError naming the first offending line. An unreadable file or a header
// that does not match the declared format is also a DataError.
LoadedDataset load_dataset(const std::filesystem::path& path,
                           DatasetFormat format);
LoadedDataset parse_dataset(std::istream& in, DatasetFormat format,
                            std::string_view source_name = "<stream>");

inline constexpr double kMaxMalformedFraction = 0.10;

struct DirectSource {
  std::string source_id;
  bool operator==(const DirectSource&) const = default;
};

// Negative assembled from sentence1 of `first_id` and sentence2 of
// `second_id`.
struct CrossSource {
  std::string first_id;
  std::string second_id;
  bool operator==(const CrossSource&) const = default;
};

using Provenance = std::variant<DirectSource, CrossSource>;

struct PairExample {
  AnnotatedSentence p;
  AnnotatedSentence q;
  Label label = Label::kNegative;
  Provenance provenance;

  // "a" for direct examples, "a~b" for cross-paired negatives.
  std::string id() const;

  bool operator==(const PairExample&) const = default;
};

PairExample make_direct_example(const RawPair& pair,
                                const Tagger& tagger = Tagger::builtin());

// Returns n examples: n/2 direct positives sampled without replacement, then
// n/2 cross-paired negatives (P from pair A, Q from pair B, A != B), each slot
// drawn without replacement. n must be even. Deterministic in `seed`.
std::vector<PairExample> sample_originals(std::span<const RawPair> data,
                                          std::size_t n, std::uint64_t seed,
                                          const Tagger& tagger = Tagger::builtin());

inline std::vector<PositionPair> replaceable_pairs(
    const PairExample& example, const FrozenPositions& frozen = {}) {
  return replaceable_pairs(example.p, example.q, example.label, frozen);
}

}  // namespace sharedword
