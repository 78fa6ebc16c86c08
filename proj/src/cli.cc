#include "sharedword/cli.h"

#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sharedword/advtrain.h"
#include "sharedword/attack.h"
#include "sharedword/backends.h"
#include "sharedword/corpus.h"
#include "sharedword/errors.h"
#include "sharedword/evalreport.h"
#include "sharedword/serialize.h"

namespace sharedword {

namespace {

// Resolved settings of one run, echoed into every output header.
class ConfigEcho {
 public:
  explicit ConfigEcho(std::string command) : command_(std::move(command)) {}

  template <typename T>
  void add(std::string key, const T& value) {
    std::ostringstream text;
    text << value;
    entries_.emplace_back(std::move(key), text.str());
  }

  std::string header() const {
    std::string out = "# sharedword " + command_ + "\n";
    for (const auto& [key, value] : entries_) {
      out += "# " + key + "=" + value + "\n";
    }
    return out;
  }

  std::string json() const {
    nlohmann::ordered_json doc;
    doc["command"] = command_;
    for (const auto& [key, value] : entries_) doc[key] = value;
    return doc.dump();
  }

 private:
  std::string command_;
  std::vector<std::pair<std::string, std::string>> entries_;
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path);
  out << text;
}

std::vector<PairExample> direct_examples(std::span<const RawPair> pairs) {
  std::vector<PairExample> out;
  out.reserve(pairs.size());
  for (const RawPair& pair : pairs) out.push_back(make_direct_example(pair));
  return out;
}

struct DatasetFlags {
  std::string path;
  std::string format = "qqp-tsv";
};

void add_dataset_flags(CLI::App& cmd, DatasetFlags& flags) {
  cmd.add_option("--dataset", flags.path, "Dataset TSV file")->required();
  cmd.add_option("--format", flags.format, "qqp-tsv or mrpc-tsv")
      ->capture_default_str();
}

LoadedDataset load(const DatasetFlags& flags, std::ostream& err) {
  LoadedDataset data = load_dataset(flags.path, parse_dataset_format(flags.format));
  if (data.skipped() > 0) {
    err << "warning: skipped " << data.skipped() << " malformed rows in "
        << flags.path << " (first at line " << data.skipped_lines.front()
        << ")\n";
  }
  return data;
}

struct AttackFlags {
  DatasetFlags dataset;
  std::string model;
  std::string lm;
  std::string out;
  std::string report;
  std::string profile = "qqp";
  std::size_t steps = 0;
  std::size_t topk = 0;
  std::size_t beam = 0;
  std::size_t n = 1000;
  std::uint64_t seed = 0;
  int workers = 1;
  CLI::Option* steps_opt = nullptr;
  CLI::Option* topk_opt = nullptr;
  CLI::Option* beam_opt = nullptr;
};

AttackConfig resolve_attack_config(const AttackFlags& flags) {
  AttackConfig config = AttackConfig::for_profile(parse_profile(flags.profile));
  bool overridden = false;
  if (flags.steps_opt->count() > 0) {
    config.step_limit = flags.steps;
    overridden = true;
  }
  if (flags.topk_opt->count() > 0) {
    config.candidates_per_pair = flags.topk;
    overridden = true;
  }
  if (flags.beam_opt->count() > 0) {
    config.beam_width = flags.beam;
    overridden = true;
  }
  if (overridden) config.profile = Profile::kCustom;
  config.rng_seed = flags.seed;
  config.validate();
  return config;
}

int cmd_attack(const AttackFlags& flags, std::ostream& out, std::ostream& err) {
  const AttackConfig config = resolve_attack_config(flags);
  if (flags.workers < 1) throw ConfigError("--workers must be at least 1");
  const auto model = make_target_model(flags.model);
  const auto lm = make_language_model(flags.lm);
  const LoadedDataset data = load(flags.dataset, err);

  ConfigEcho echo("attack");
  echo.add("dataset", flags.dataset.path);
  echo.add("format", flags.dataset.format);
  echo.add("model", flags.model);
  echo.add("lm", flags.lm);
  echo.add("profile", to_string(config.profile));
  echo.add("steps", config.step_limit);
  echo.add("topk", config.candidates_per_pair);
  echo.add("beam", config.beam_width);
  echo.add("n", flags.n);
  echo.add("seed", flags.seed);
  echo.add("workers", flags.workers);

  const auto originals = sample_originals(data.pairs, flags.n, flags.seed);
  const auto results = attack_all(originals, *model, *lm, config, flags.workers);
  write_attack_jsonl(std::filesystem::path(flags.out), results);

  std::size_t successes = 0;
  std::size_t queries = 0;
  for (const AttackResult& r : results) {
    successes += r.success;
    queries += r.model_queries;
  }
  std::string report = echo.header();
  report += "# attacked=" + std::to_string(results.size()) +
            " succeeded=" + std::to_string(successes) +
            " model_queries=" + std::to_string(queries) + "\n";
  if (!originals.empty()) {
    const ReportRow row{flags.model, "-", std::nullopt,
                        evaluate_accuracy(*model, originals),
                        evaluate_accuracy(*model, modified_set(results))};
    report += render_report(std::span(&row, 1));
  }
  const std::string report_path =
      flags.report.empty() ? flags.out + ".report.txt" : flags.report;
  write_text(report_path, report);
  out << report;
  return kExitOk;
}

struct EvaluateFlags {
  DatasetFlags dataset;
  std::string model;
  std::string modified;
  std::string report;
  std::string training = "-";
  std::size_t n = 0;
  std::uint64_t seed = 0;
};

int cmd_evaluate(const EvaluateFlags& flags, std::ostream& out,
                 std::ostream& err) {
  const auto model = make_target_model(flags.model);
  const LoadedDataset data = load(flags.dataset, err);

  ConfigEcho echo("evaluate");
  echo.add("dataset", flags.dataset.path);
  echo.add("format", flags.dataset.format);
  echo.add("model", flags.model);
  echo.add("modified", flags.modified.empty() ? "-" : flags.modified);
  echo.add("n", flags.n);
  echo.add("seed", flags.seed);

  ReportRow row{flags.model, flags.training, std::nullopt, std::nullopt,
                std::nullopt};
  const auto full = direct_examples(data.pairs);
  if (!full.empty()) row.original_full = evaluate_accuracy(*model, full);
  if (!flags.modified.empty()) {
    const auto results = read_attack_jsonl(flags.modified);
    if (!results.empty()) {
      std::vector<PairExample> originals;
      for (const AttackResult& r : results) originals.push_back(r.original_example);
      row.original_sampled = evaluate_accuracy(*model, originals);
      row.modified = evaluate_accuracy(*model, modified_set(results));
    }
  } else if (flags.n > 0) {
    const auto sampled = sample_originals(data.pairs, flags.n, flags.seed);
    row.original_sampled = evaluate_accuracy(*model, sampled);
  }
  const std::string report = echo.header() + render_report(std::span(&row, 1));
  if (!flags.report.empty()) write_text(flags.report, report);
  out << report;
  return kExitOk;
}

struct AdvTrainFlags {
  DatasetFlags dataset;
  std::string model;
  std::string lm;
  std::string out;
  std::string metrics;
  std::string probe_dataset;
  std::size_t probe_n = 200;
  std::size_t epochs = 5;
  std::size_t batch_size = 32;
  double adv_fraction = 0.10;
  double learning_rate = 0.5;
  double l2 = 1e-4;
  std::size_t steps = 5;
  std::size_t topk = 25;
  std::uint64_t seed = 0;
  int workers = 1;
};

int cmd_advtrain(const AdvTrainFlags& flags, std::ostream& out,
                 std::ostream& err) {
  BowLogisticModel model;
  if (flags.model.rfind("toy:bow:", 0) == 0) {
    model = BowLogisticModel::load(flags.model.substr(8));
  } else if (flags.model != "bow_logistic") {
    throw ConfigError("advtrain needs a trainable model (bow_logistic or "
                      "toy:bow:CHECKPOINT), got '" + flags.model + "'");
  }
  AdvTrainConfig cfg;
  cfg.adv_fraction = flags.adv_fraction;
  cfg.epochs = flags.epochs;
  cfg.batch_size = flags.batch_size;
  cfg.learning_rate = flags.learning_rate;
  cfg.l2 = flags.l2;
  cfg.attack_cfg.step_limit = flags.steps;
  cfg.attack_cfg.candidates_per_pair = flags.topk;
  cfg.attack_cfg.rng_seed = flags.seed;
  cfg.rng_seed = flags.seed;
  cfg.workers = flags.workers;
  cfg.validate();
  const auto lm = make_language_model(flags.lm);

  const LoadedDataset data = load(flags.dataset, err);
  const auto train = direct_examples(data.pairs);
  std::vector<PairExample> probe;
  if (flags.probe_n > 0) {
    if (flags.probe_dataset.empty()) {
      probe = sample_originals(data.pairs, flags.probe_n, flags.seed);
    } else {
      const LoadedDataset probe_data =
          load(DatasetFlags{flags.probe_dataset, flags.dataset.format}, err);
      probe = sample_originals(probe_data.pairs, flags.probe_n, flags.seed);
    }
  }

  ConfigEcho echo("advtrain");
  echo.add("dataset", flags.dataset.path);
  echo.add("format", flags.dataset.format);
  echo.add("model", flags.model);
  echo.add("lm", flags.lm);
  echo.add("probe_dataset", flags.probe_dataset.empty() ? "-" : flags.probe_dataset);
  echo.add("probe_n", flags.probe_n);
  echo.add("epochs", cfg.epochs);
  echo.add("batch_size", cfg.batch_size);
  echo.add("adv_fraction", cfg.adv_fraction);
  echo.add("lr", cfg.learning_rate);
  echo.add("l2", cfg.l2);
  echo.add("steps", cfg.attack_cfg.step_limit);
  echo.add("topk", cfg.attack_cfg.candidates_per_pair);
  echo.add("beam", cfg.attack_cfg.beam_width);
  echo.add("seed", flags.seed);
  echo.add("workers", flags.workers);

  const TrainingRun run = adversarial_finetune(model, *lm, train, probe, cfg);
  model.save(flags.out, echo.json());
  const std::string metrics_path =
      flags.metrics.empty() ? flags.out + ".metrics.csv" : flags.metrics;
  write_metrics_csv(std::filesystem::path(metrics_path), run.metrics);

  out << echo.header();
  write_metrics_csv(out, run.metrics);
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Shared-word modification attacks on paraphrase identification models"};
  app.require_subcommand(1);

  AttackFlags attack;
  CLI::App* attack_cmd = app.add_subcommand("attack", "Attack sampled examples");
  add_dataset_flags(*attack_cmd, attack.dataset);
  attack_cmd->add_option("--model", attack.model, "Target model SPEC")->required();
  attack_cmd->add_option("--lm", attack.lm, "Masked LM SPEC")->required();
  attack_cmd->add_option("--out", attack.out, "Output JSONL")->required();
  attack_cmd->add_option("--report", attack.report, "Report path (default OUT.report.txt)");
  attack_cmd->add_option("--profile", attack.profile, "qqp or mrpc")
      ->capture_default_str();
  attack.steps_opt = attack_cmd->add_option("--steps", attack.steps, "Step limit S");
  attack.topk_opt = attack_cmd->add_option("--topk", attack.topk, "Candidates per pair K");
  attack.beam_opt = attack_cmd->add_option("--beam", attack.beam, "Beam width B");
  attack_cmd->add_option("--n", attack.n, "Number of sampled originals")
      ->capture_default_str();
  attack_cmd->add_option("--seed", attack.seed, "Root seed")->capture_default_str();
  attack_cmd->add_option("--workers", attack.workers, "Parallel attack workers")
      ->capture_default_str();

  EvaluateFlags evaluate;
  CLI::App* evaluate_cmd = app.add_subcommand("evaluate", "Render an accuracy report");
  add_dataset_flags(*evaluate_cmd, evaluate.dataset);
  evaluate_cmd->add_option("--model", evaluate.model, "Target model SPEC")->required();
  evaluate_cmd->add_option("--modified", evaluate.modified, "Attack JSONL");
  evaluate_cmd->add_option("--report", evaluate.report, "Report output path");
  evaluate_cmd->add_option("--training", evaluate.training, "Training label for the report row");
  evaluate_cmd->add_option("--n", evaluate.n, "Sampled originals when no JSONL is given");
  evaluate_cmd->add_option("--seed", evaluate.seed, "Root seed")->capture_default_str();

  AdvTrainFlags advtrain;
  CLI::App* advtrain_cmd = app.add_subcommand("advtrain", "Adversarially fine-tune the toy model");
  add_dataset_flags(*advtrain_cmd, advtrain.dataset);
  advtrain_cmd->add_option("--model", advtrain.model, "bow_logistic or toy:bow:CHECKPOINT")
      ->required();
  advtrain_cmd->add_option("--lm", advtrain.lm, "Masked LM SPEC")->required();
  advtrain_cmd->add_option("--out", advtrain.out, "Checkpoint path")->required();
  advtrain_cmd->add_option("--metrics", advtrain.metrics, "Metrics CSV (default OUT.metrics.csv)");
  advtrain_cmd->add_option("--probe-dataset", advtrain.probe_dataset, "Held-out probe dataset");
  advtrain_cmd->add_option("--probe-n", advtrain.probe_n, "Probe set size")->capture_default_str();
  advtrain_cmd->add_option("--epochs", advtrain.epochs)->capture_default_str();
  advtrain_cmd->add_option("--batch-size", advtrain.batch_size)->capture_default_str();
  advtrain_cmd->add_option("--adv-fraction", advtrain.adv_fraction)->capture_default_str();
  advtrain_cmd->add_option("--lr", advtrain.learning_rate)->capture_default_str();
  advtrain_cmd->add_option("--l2", advtrain.l2)->capture_default_str();
  advtrain_cmd->add_option("--steps", advtrain.steps, "Generation step limit")
      ->capture_default_str();
  advtrain_cmd->add_option("--topk", advtrain.topk, "Generation candidates per pair")
      ->capture_default_str();
  advtrain_cmd->add_option("--seed", advtrain.seed)->capture_default_str();
  advtrain_cmd->add_option("--workers", advtrain.workers)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitConfig;
  }

  try {
    if (attack_cmd->parsed()) return cmd_attack(attack, out, err);
    if (evaluate_cmd->parsed()) return cmd_evaluate(evaluate, out, err);
    return cmd_advtrain(advtrain, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitConfig;
  } catch (const TransportError& e) {
    err << "adapter error: " << e.what() << "\n";
    return kExitAdapter;
  } catch (const ProtocolError& e) {
    err << "adapter error: " << e.what() << "\n";
    return kExitAdapter;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
}

}  // namespace sharedword
