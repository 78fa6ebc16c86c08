#include "sharedword/serialize.h"

#include <fstream>
#include <ostream>

#include "json.hpp"
#include "sharedword/errors.h"

namespace sharedword {

namespace {

using nlohmann::ordered_json;

ordered_json sentence_pair(const PairExample& example) {
  return ordered_json{{"p", example.p.surfaces()}, {"q", example.q.surfaces()}};
}

PairExample example_from(const ordered_json& node, Label label,
                         const Provenance& provenance, const Tagger& tagger) {
  const auto p = node.at("p").get<std::vector<std::string>>();
  const auto q = node.at("q").get<std::vector<std::string>>();
  return PairExample{tagger.annotate_tokens(p), tagger.annotate_tokens(q), label,
                     provenance};
}

}  // namespace

Provenance provenance_from_id(std::string_view id) {
  if (const auto tilde = id.find('~'); tilde != std::string_view::npos) {
    return CrossSource{std::string(id.substr(0, tilde)),
                       std::string(id.substr(tilde + 1))};
  }
  return DirectSource{std::string(id)};
}

std::string to_json_line(const AttackResult& result) {
  ordered_json history = ordered_json::array();
  for (const Edit& edit : result.history) {
    history.push_back(ordered_json{{"step", edit.step},
                                   {"i", edit.pair.i},
                                   {"j", edit.pair.j},
                                   {"old_p", edit.old_p},
                                   {"old_q", edit.old_q},
                                   {"new", edit.new_word}});
  }
  const ordered_json record{
      {"id", result.original_example.id()},
      {"label", to_string(result.original_example.label)},
      {"success", result.success},
      {"steps_used", result.steps_used},
      {"model_queries", result.model_queries},
      {"best_gold_score", result.best_gold_score},
      {"original", sentence_pair(result.original_example)},
      {"modified", sentence_pair(result.final_example)},
      {"history", std::move(history)},
  };
  return record.dump();
}

AttackResult attack_result_from_json_line(std::string_view line,
                                          const Tagger& tagger) {
  try {
    const auto doc = ordered_json::parse(line);
    const auto id = doc.at("id").get<std::string>();
    const Label label = parse_label(doc.at("label").get<std::string>());
    const Provenance provenance = provenance_from_id(id);
    std::vector<Edit> history;
    for (const auto& node : doc.at("history")) {
      history.push_back(Edit{node.at("step").get<std::size_t>(),
                             PositionPair{node.at("i").get<std::size_t>(),
                                          node.at("j").get<std::size_t>()},
                             node.at("old_p").get<std::string>(),
                             node.at("old_q").get<std::string>(),
                             node.at("new").get<std::string>()});
    }
    return AttackResult{doc.at("success").get<bool>(),
                        example_from(doc.at("original"), label, provenance, tagger),
                        example_from(doc.at("modified"), label, provenance, tagger),
                        doc.at("steps_used").get<std::size_t>(),
                        doc.at("model_queries").get<std::size_t>(),
                        doc.at("best_gold_score").get<double>(),
                        std::move(history)};
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed attack record: ") + e.what());
  } catch (const InvalidInputError& e) {
    throw DataError(std::string("malformed attack record: ") + e.what());
  }
}

void write_attack_jsonl(std::ostream& out, std::span<const AttackResult> results) {
  for (const AttackResult& result : results) out << to_json_line(result) << '\n';
}

void write_attack_jsonl(const std::filesystem::path& path,
                        std::span<const AttackResult> results) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  write_attack_jsonl(out, results);
}

std::vector<AttackResult> read_attack_jsonl(const std::filesystem::path& path,
                                            const Tagger& tagger) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  std::vector<AttackResult> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      out.push_back(attack_result_from_json_line(line, tagger));
    } catch (const DataError& e) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": " +
                      e.what());
    }
  }
  return out;
}

}  // namespace sharedword
