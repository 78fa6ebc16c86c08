#include "sharedword/evalreport.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sharedword/errors.h"
#include "sharedword/rng.h"

namespace sharedword {

namespace {

std::optional<double> percent(std::size_t correct, std::size_t total) {
  if (total == 0) return std::nullopt;
  return 100.0 * static_cast<double>(correct) / static_cast<double>(total);
}

std::string pad_left(std::string_view text, std::size_t width) {
  std::string out;
  if (text.size() < width) out.assign(width - text.size(), ' ');
  out += text;
  return out;
}

std::string pad_right(std::string_view text, std::size_t width) {
  std::string out(text);
  if (out.size() < width) out.append(width - out.size(), ' ');
  return out;
}

}  // namespace

std::optional<double> Accuracy::pos() const {
  return percent(correct_pos, total_pos);
}
std::optional<double> Accuracy::neg() const {
  return percent(correct_neg, total_neg);
}
std::optional<double> Accuracy::all() const {
  return percent(correct_pos + correct_neg, total_pos + total_neg);
}

Accuracy evaluate_accuracy(const TargetModel& model,
                           std::span<const PairExample> examples) {
  if (examples.empty()) {
    throw InvalidInputError("cannot evaluate accuracy on an empty example set");
  }
  std::vector<PairView> views;
  views.reserve(examples.size());
  for (const PairExample& e : examples) views.push_back({&e.p, &e.q});
  const auto predictions = model.predict(views);
  Accuracy acc;
  for (std::size_t k = 0; k < examples.size(); ++k) {
    const bool correct = predictions[k].argmax() == examples[k].label;
    if (examples[k].label == Label::kPositive) {
      ++acc.total_pos;
      acc.correct_pos += correct;
    } else {
      ++acc.total_neg;
      acc.correct_neg += correct;
    }
  }
  return acc;
}

std::string format_percent(std::size_t correct, std::size_t total) {
  if (total == 0) return "-";
  // tenths of a percent, half-up: floor((2000 * c + t) / (2 * t))
  const unsigned long long c = correct;
  const unsigned long long t = total;
  const unsigned long long tenths = (2000ULL * c + t) / (2ULL * t);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%llu.%llu", tenths / 10, tenths % 10);
  return buf;
}

std::string render_report(std::span<const ReportRow> rows) {
  struct Group {
    std::string title;
    std::optional<Accuracy> ReportRow::*member;
  };
  const Group all_groups[] = {
      {"Original full", &ReportRow::original_full},
      {"Original sampled", &ReportRow::original_sampled},
      {"Modified", &ReportRow::modified},
  };
  std::vector<Group> groups;
  for (const Group& g : all_groups) {
    if (std::any_of(rows.begin(), rows.end(),
                    [&](const ReportRow& r) { return (r.*g.member).has_value(); })) {
      groups.push_back(g);
    }
  }

  std::size_t model_w = std::string_view("Model").size();
  std::size_t train_w = std::string_view("Training").size();
  for (const ReportRow& r : rows) {
    model_w = std::max(model_w, r.model.size());
    train_w = std::max(train_w, r.training.size());
  }
  constexpr std::size_t kCell = 6;
  constexpr std::size_t kGroupWidth = 3 * kCell + 2;

  std::ostringstream out;
  std::string line1 = pad_right("", model_w) + " | " + pad_right("", train_w);
  std::string line2 = pad_right("Model", model_w) + " | " +
                      pad_right("Training", train_w);
  for (const Group& g : groups) {
    line1 += " | " + pad_right(g.title, kGroupWidth);
    line2 += " | " + pad_left("Pos", kCell) + " " + pad_left("Neg", kCell) +
             " " + pad_left("All", kCell);
  }
  auto rstrip = [](std::string s) {
    while (!s.empty() && s.back() == ' ') s.pop_back();
    return s;
  };
  out << rstrip(line1) << "\n" << line2 << "\n";
  out << std::string(line2.size(), '-') << "\n";
  for (const ReportRow& r : rows) {
    std::string line =
        pad_right(r.model, model_w) + " | " + pad_right(r.training, train_w);
    for (const Group& g : groups) {
      const auto& acc = r.*g.member;
      std::string pos = "-", neg = "-", all = "-";
      if (acc) {
        pos = format_percent(acc->correct_pos, acc->total_pos);
        neg = format_percent(acc->correct_neg, acc->total_neg);
        all = format_percent(acc->correct_pos + acc->correct_neg,
                             acc->total_pos + acc->total_neg);
      }
      line += " | " + pad_left(pos, kCell) + " " + pad_left(neg, kCell) + " " +
              pad_left(all, kCell);
    }
    out << line << "\n";
  }
  return out.str();
}

std::string csv_field(std::string_view text) {
  const bool needs_quotes =
      text.find_first_of(",\"\r\n") != std::string_view::npos;
  if (!needs_quotes) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

AnnotationExport export_annotation_csv(std::span<const AttackResult> results,
                                       std::size_t n, std::uint64_t seed,
                                       const std::filesystem::path& blind_csv,
                                       const std::filesystem::path& key_csv) {
  if (n % 2 != 0) {
    throw InvalidInputError("annotation sample size must be even");
  }
  std::vector<const AttackResult*> positives;
  std::vector<const AttackResult*> negatives;
  for (const AttackResult& r : results) {
    if (!r.success) continue;
    (r.original_example.label == Label::kPositive ? positives : negatives)
        .push_back(&r);
  }
  const std::size_t half = n / 2;
  if (positives.size() < half || negatives.size() < half) {
    throw InvalidInputError(
        "need " + std::to_string(half) + " successful attacks per label, have " +
        std::to_string(positives.size()) + " positive and " +
        std::to_string(negatives.size()) + " negative");
  }

  Rng rng = Rng::stream(seed, "annotation");
  rng.shuffle(std::span(positives));
  rng.shuffle(std::span(negatives));
  std::vector<const AttackResult*> chosen(positives.begin(),
                                          positives.begin() + half);
  chosen.insert(chosen.end(), negatives.begin(), negatives.begin() + half);
  // Interleave labels randomly so row order carries no label information.
  rng.shuffle(std::span(chosen));

  std::ofstream blind(blind_csv, std::ios::binary | std::ios::trunc);
  std::ofstream key(key_csv, std::ios::binary | std::ios::trunc);
  if (!blind || !key) throw DataError("cannot write annotation files");
  blind << "id,sentence1,sentence2\r\n";
  key << "id,gold_label\r\n";
  for (std::size_t k = 0; k < chosen.size(); ++k) {
    char id[32];
    std::snprintf(id, sizeof id, "item-%05zu", k + 1);
    const PairExample& modified = chosen[k]->final_example;
    blind << id << ',' << csv_field(modified.p.text()) << ','
          << csv_field(modified.q.text()) << "\r\n";
    key << id << ',' << to_string(chosen[k]->original_example.label) << "\r\n";
  }
  return {half, half};
}

}  // namespace sharedword
