#pragma once

// AttackResult <-> JSON Lines. One record per example with the fields
//   id, label, success, steps_used, model_queries, best_gold_score,
//   original: {p, q}, modified: {p, q},
//   history: [{step, i, j, old_p, old_q, new}]
// Sentences are stored as token arrays.

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sharedword/attack.h"

namespace sharedword {

std::string to_json_line(const AttackResult& result);

// Sentences are re-annotated with `tagger`. Throws DataError on malformed
// records.
AttackResult attack_result_from_json_line(std::string_view line,
                                          const Tagger& tagger = Tagger::builtin());

void write_attack_jsonl(std::ostream& out, std::span<const AttackResult> results);
void write_attack_jsonl(const std::filesystem::path& path,
                        std::span<const AttackResult> results);

std::vector<AttackResult> read_attack_jsonl(
    const std::filesystem::path& path, const Tagger& tagger = Tagger::builtin());

// Inverse of PairExample::id().
Provenance provenance_from_id(std::string_view id);

}  // namespace sharedword
