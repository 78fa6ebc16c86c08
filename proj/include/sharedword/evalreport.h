#pragma once

// Accuracy breakdowns (positive / negative / all), the fixed-width report
// table, and blind annotation export.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sharedword/attack.h"
#include "sharedword/corpus.h"
#include "sharedword/target.h"

namespace sharedword {

// Raw counts; percentages are derived on demand so rendering can round
// exactly.
struct Accuracy {
  std::size_t correct_pos = 0;
  std::size_t total_pos = 0;
  std::size_t correct_neg = 0;
  std::size_t total_neg = 0;

  std::optional<double> pos() const;
  std::optional<double> neg() const;
  std::optional<double> all() const;

  bool operator==(const Accuracy&) const = default;
};

// Throws InvalidInputError on an empty example set.
Accuracy evaluate_accuracy(const TargetModel& model,
                           std::span<const PairExample> examples);

// correct/total as a percentage with one decimal, rounded half-up using
// integer arithmetic ("-" when total is 0).
std::string format_percent(std::size_t correct, std::size_t total);

struct ReportRow {
  std::string model;
  std::string training;  // e.g. "normal" / "adversarial"
  std::optional<Accuracy> original_full;
  std::optional<Accuracy> original_sampled;
  std::optional<Accuracy> modified;
};

// Fixed-width table with Pos/Neg/All columns for each metric set that at
// least one row provides. Byte-for-byte deterministic.
std::string render_report(std::span<const ReportRow> rows);

// RFC-4180 field quoting.
std::string csv_field(std::string_view text);

struct AnnotationExport {
  std::size_t positives = 0;
  std::size_t negatives = 0;
};

// Samples n successful, label-balanced attacks. The blind CSV holds
// `id,sentence1,sentence2` with opaque ids; the key file maps the same ids to
// `gold_label`. Throws InvalidInputError when n is odd or either label has
// fewer than n/2 successful attacks.
AnnotationExport export_annotation_csv(std::span<const AttackResult> results,
                                       std::size_t n, std::uint64_t seed,
                                       const std::filesystem::path& blind_csv,
                                       const std::filesystem::path& key_csv);

}  // namespace sharedword
