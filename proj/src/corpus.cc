#include "sharedword/corpus.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <optional>

#include "sharedword/errors.h"
#include "sharedword/rng.h"

namespace sharedword {

namespace {

struct Layout {
  std::vector<std::string_view> header;
  std::size_t sentence1 = 0;
  std::size_t sentence2 = 0;
  std::size_t label = 0;
};

const Layout& layout_for(DatasetFormat format) {
  static const Layout kQqp{
      {"id", "qid1", "qid2", "question1", "question2", "is_duplicate"}, 3, 4, 5};
  static const Layout kMrpc{
      {"Quality", "#1 ID", "#2 ID", "#1 String", "#2 String"}, 3, 4, 0};
  return format == DatasetFormat::kQqpTsv ? kQqp : kMrpc;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n\f\v");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n\f\v");
  return s.substr(first, last - first + 1);
}

std::optional<RawPair> parse_row(std::string_view line, DatasetFormat format) {
  const Layout& layout = layout_for(format);
  const auto fields = split_tabs(line);
  if (fields.size() != layout.header.size()) return std::nullopt;
  const std::string_view label = trim(fields[layout.label]);
  if (label != "0" && label != "1") return std::nullopt;
  const std::string_view s1 = trim(fields[layout.sentence1]);
  const std::string_view s2 = trim(fields[layout.sentence2]);
  if (s1.empty() || s2.empty()) return std::nullopt;

  RawPair pair;
  if (format == DatasetFormat::kQqpTsv) {
    pair.id = std::string(trim(fields[0]));
  } else {
    pair.id = std::string(trim(fields[1])) + "_" + std::string(trim(fields[2]));
  }
  if (pair.id.empty()) return std::nullopt;
  pair.sentence1 = std::string(s1);
  pair.sentence2 = std::string(s2);
  pair.label = label == "1" ? Label::kPositive : Label::kNegative;
  return pair;
}

}  // namespace

DatasetFormat parse_dataset_format(std::string_view name) {
  if (name == "qqp-tsv") return DatasetFormat::kQqpTsv;
  if (name == "mrpc-tsv") return DatasetFormat::kMrpcTsv;
  throw ConfigError("unknown dataset format '" + std::string(name) +
                    "' (expected qqp-tsv or mrpc-tsv)");
}

std::string_view to_string(DatasetFormat format) {
  return format == DatasetFormat::kQqpTsv ? "qqp-tsv" : "mrpc-tsv";
}

LoadedDataset parse_dataset(std::istream& in, DatasetFormat format,
                            std::string_view source_name) {
  const Layout& layout = layout_for(format);
  const std::string source(source_name);
  std::string line;
  if (!std::getline(in, line)) {
    throw DataError(source + ": missing header row");
  }
  if (line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_tabs(line);
  if (header.size() != layout.header.size() ||
      !std::equal(header.begin(), header.end(), layout.header.begin(),
                  [](std::string_view a, std::string_view b) {
                    return trim(a) == b;
                  })) {
    throw DataError(source + ": header does not match the " +
                    std::string(to_string(format)) + " column layout");
  }

  LoadedDataset out;
  std::size_t line_no = 1;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    ++rows;
    if (auto pair = parse_row(line, format)) {
      out.pairs.push_back(std::move(*pair));
    } else {
      out.skipped_lines.push_back(line_no);
    }
  }
  if (rows > 0 && static_cast<double>(out.skipped()) >
                      kMaxMalformedFraction * static_cast<double>(rows)) {
    throw DataError(source + ": " + std::to_string(out.skipped()) + " of " +
                    std::to_string(rows) +
                    " rows are malformed; first offending line is " +
                    std::to_string(out.skipped_lines.front()));
  }
  return out;
}

LoadedDataset load_dataset(const std::filesystem::path& path,
                           DatasetFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read dataset file " + path.string());
  return parse_dataset(in, format, path.string());
}

std::string PairExample::id() const {
  if (const auto* direct = std::get_if<DirectSource>(&provenance)) {
    return direct->source_id;
  }
  const auto& cross = std::get<CrossSource>(provenance);
  return cross.first_id + "~" + cross.second_id;
}

PairExample make_direct_example(const RawPair& pair, const Tagger& tagger) {
  return PairExample{tagger.annotate(pair.sentence1),
                     tagger.annotate(pair.sentence2), pair.label,
                     DirectSource{pair.id}};
}

std::vector<PairExample> sample_originals(std::span<const RawPair> data,
                                          std::size_t n, std::uint64_t seed,
                                          const Tagger& tagger) {
  if (n % 2 != 0) {
    throw ConfigError("sample size must be even, got " + std::to_string(n));
  }
  if (n == 0) return {};
  const std::size_t half = n / 2;

  std::vector<std::size_t> positives;
  for (std::size_t k = 0; k < data.size(); ++k) {
    if (data[k].label == Label::kPositive) positives.push_back(k);
  }
  if (positives.size() < half || data.size() < 2 || data.size() < half) {
    throw DataError("cannot sample " + std::to_string(n) + " examples: " +
                    std::to_string(positives.size()) + " positive pairs and " +
                    std::to_string(data.size()) + " pairs overall");
  }

  Rng rng = Rng::stream(seed, "sampling");
  std::vector<PairExample> out;
  out.reserve(n);

  rng.shuffle(std::span(positives));
  for (std::size_t k = 0; k < half; ++k) {
    out.push_back(make_direct_example(data[positives[k]], tagger));
  }

  std::vector<std::size_t> first(data.size());
  std::iota(first.begin(), first.end(), 0);
  std::vector<std::size_t> second = first;
  rng.shuffle(std::span(first));
  rng.shuffle(std::span(second));
  first.resize(half);

  // Walk the second slot's permutation, skipping any index that equals the
  // first slot's choice for this example.
  std::vector<std::size_t> chosen(half);
  std::vector<bool> used(second.size(), false);
  for (std::size_t k = 0; k < half; ++k) {
    std::size_t pick = second.size();
    for (std::size_t s = 0; s < second.size(); ++s) {
      if (!used[s] && second[s] != first[k]) {
        pick = s;
        break;
      }
    }
    if (pick == second.size()) {
      // Only first[k] itself is left; trade with an earlier example.
      const std::size_t leftover = first[k];
      bool swapped = false;
      for (std::size_t e = 0; e < k && !swapped; ++e) {
        if (first[e] != leftover && chosen[e] != first[k]) {
          chosen[k] = chosen[e];
          chosen[e] = leftover;
          swapped = true;
        }
      }
      if (!swapped) throw DataError("cannot form distinct cross pairs");
      continue;
    }
    used[pick] = true;
    chosen[k] = second[pick];
  }

  for (std::size_t k = 0; k < half; ++k) {
    const RawPair& a = data[first[k]];
    const RawPair& b = data[chosen[k]];
    out.push_back(PairExample{tagger.annotate(a.sentence1),
                              tagger.annotate(b.sentence2), Label::kNegative,
                              CrossSource{a.id, b.id}});
  }
  return out;
}

}  // namespace sharedword
