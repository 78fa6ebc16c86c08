#include "sharedword/attack.h"

#include <algorithm>
#include <exception>
#include <set>
#include <tuple>

#include <omp.h>

#include "sharedword/errors.h"

namespace sharedword {

Profile parse_profile(std::string_view name) {
  if (name == "qqp") return Profile::kQqp;
  if (name == "mrpc") return Profile::kMrpc;
  if (name == "custom") return Profile::kCustom;
  throw ConfigError("unknown profile '" + std::string(name) +
                    "' (expected qqp, mrpc or custom)");
}

std::string_view to_string(Profile profile) {
  switch (profile) {
    case Profile::kQqp:
      return "qqp";
    case Profile::kMrpc:
      return "mrpc";
    case Profile::kCustom:
      return "custom";
  }
  return "custom";
}

AttackConfig AttackConfig::for_profile(Profile profile) {
  AttackConfig config;
  config.profile = profile;
  if (profile == Profile::kMrpc) {
    config.step_limit = 10;
    config.candidates_per_pair = 50;
    config.beam_width = 50;
  } else {
    config.step_limit = 5;
    config.candidates_per_pair = 25;
    config.beam_width = 25;
  }
  return config;
}

void AttackConfig::validate() const {
  if (step_limit == 0 || candidates_per_pair == 0 || beam_width == 0) {
    throw ConfigError("step limit, candidate count and beam width must be positive");
  }
  if (profile != Profile::kCustom) {
    const AttackConfig fixed = for_profile(profile);
    if (step_limit != fixed.step_limit ||
        candidates_per_pair != fixed.candidates_per_pair ||
        beam_width != fixed.beam_width) {
      throw ConfigError("profile " + std::string(to_string(profile)) +
                        " fixes (S, K, B); use the custom profile to override");
    }
  }
}

std::pair<AnnotatedSentence, AnnotatedSentence> BeamState::probe_sentences()
    const {
  if (!pending_pad) return {p, q};
  return {p.with_token(pending_pad->i, pad_token()),
          q.with_token(pending_pad->j, pad_token())};
}

AttackEngine::AttackEngine(const TargetModel& model,
                           const MaskedLanguageModel& lm, AttackConfig config,
                           const Tagger& tagger)
    : model_(model), lm_(lm), config_(config), tagger_(tagger) {
  config_.validate();
}

std::vector<ClassDistribution> AttackEngine::query(
    std::span<const PairView> views) {
  if (views.empty()) return {};
  auto out = model_.predict(views);
  if (out.size() != views.size()) {
    throw ProtocolError("target model returned " + std::to_string(out.size()) +
                        " predictions for " + std::to_string(views.size()) +
                        " pairs");
  }
  queries_ += views.size();
  return out;
}

std::vector<BeamState> AttackEngine::stage1_positions(
    std::span<const BeamState> beam, Label gold) {
  std::vector<BeamState> probes;
  for (const BeamState& state : beam) {
    for (const PositionPair& pair :
         replaceable_pairs(state.p, state.q, gold, state.frozen)) {
      BeamState probe = state;
      probe.pending_pad = pair;
      probe.order = state.order;
      probes.push_back(std::move(probe));
    }
  }
  if (probes.empty()) return probes;

  std::vector<std::pair<AnnotatedSentence, AnnotatedSentence>> padded;
  padded.reserve(probes.size());
  for (const BeamState& probe : probes) padded.push_back(probe.probe_sentences());
  std::vector<PairView> views;
  views.reserve(padded.size());
  for (const auto& [pp, pq] : padded) views.push_back({&pp, &pq});
  const auto predictions = query(views);
  for (std::size_t k = 0; k < probes.size(); ++k) {
    probes[k].gold_score = predictions[k].of(gold);
    probes[k].predicted = predictions[k].argmax();
  }

  std::stable_sort(probes.begin(), probes.end(),
                   [](const BeamState& a, const BeamState& b) {
                     return std::tie(a.gold_score, *a.pending_pad, a.order) <
                            std::tie(b.gold_score, *b.pending_pad, b.order);
                   });
  if (probes.size() > config_.beam_width) {
    probes.erase(probes.begin() + static_cast<std::ptrdiff_t>(config_.beam_width),
                 probes.end());
  }
  for (std::size_t k = 0; k < probes.size(); ++k) probes[k].order = k;
  return probes;
}

std::vector<BeamState> AttackEngine::expand(std::span<const BeamState> probes,
                                            Label gold) {
  std::vector<MaskQuery> mask_queries;
  mask_queries.reserve(2 * probes.size());
  for (const BeamState& probe : probes) {
    if (!probe.pending_pad) {
      throw InvalidInputError("stage 2 requires probe states with a pending pair");
    }
    mask_queries.push_back({&probe.p, probe.pending_pad->i});
    mask_queries.push_back({&probe.q, probe.pending_pad->j});
  }
  const auto dists = lm_.mask_distributions(mask_queries);
  if (dists.size() != mask_queries.size()) {
    throw ProtocolError("language model returned " +
                        std::to_string(dists.size()) + " distributions for " +
                        std::to_string(mask_queries.size()) + " queries");
  }

  std::vector<BeamState> successors;
  for (std::size_t k = 0; k < probes.size(); ++k) {
    const BeamState& probe = probes[k];
    const PositionPair pair = *probe.pending_pad;
    const Token& old_p = probe.p[pair.i];
    const Token& old_q = probe.q[pair.j];
    const auto candidates =
        joint_candidates_from(dists[2 * k], dists[2 * k + 1], old_p.surface,
                              old_q.surface, config_.candidates_per_pair, tagger_);
    for (const CandidateWord& candidate : candidates) {
      BeamState next{probe.p.with_token(pair.i, tagger_.make_token(candidate.word, pair.i)),
                     probe.q.with_token(pair.j, tagger_.make_token(candidate.word, pair.j)),
                     probe.history,
                     probe.frozen,
                     1.0,
                     Label::kPositive,
                     std::nullopt,
                     probe.order};
      next.history.push_back(Edit{probe.history.size() + 1, pair, old_p.surface,
                                  old_q.surface, candidate.word});
      next.frozen.p.insert(pair.i);
      next.frozen.q.insert(pair.j);
      successors.push_back(std::move(next));
    }
  }
  if (successors.empty()) return successors;

  std::vector<PairView> views;
  views.reserve(successors.size());
  for (const BeamState& s : successors) views.push_back({&s.p, &s.q});
  const auto predictions = query(views);
  for (std::size_t k = 0; k < successors.size(); ++k) {
    successors[k].gold_score = predictions[k].of(gold);
    successors[k].predicted = predictions[k].argmax();
  }

  std::stable_sort(
      successors.begin(), successors.end(),
      [](const BeamState& a, const BeamState& b) {
        const Edit& ea = a.history.back();
        const Edit& eb = b.history.back();
        return std::tie(a.gold_score, ea.step, ea.pair, ea.new_word, a.order) <
               std::tie(b.gold_score, eb.step, eb.pair, eb.new_word, b.order);
      });

  std::vector<BeamState> unique;
  std::set<std::pair<std::string, std::string>> seen;
  for (BeamState& s : successors) {
    if (seen.emplace(s.p.text(), s.q.text()).second) {
      unique.push_back(std::move(s));
    }
  }
  for (std::size_t k = 0; k < unique.size(); ++k) unique[k].order = k;
  return unique;
}

std::vector<BeamState> AttackEngine::stage2_words(
    std::span<const BeamState> probes, Label gold) {
  auto successors = expand(probes, gold);
  if (successors.size() > config_.beam_width) {
    successors.erase(
        successors.begin() + static_cast<std::ptrdiff_t>(config_.beam_width),
        successors.end());
  }
  return successors;
}

AttackResult AttackEngine::attack(const PairExample& example) {
  const std::size_t queries_before = queries_;
  const PairView root_view{&example.p, &example.q};
  const ClassDistribution root_prediction = query(std::span(&root_view, 1)).at(0);

  BeamState best{example.p, example.q, {}, {}, root_prediction.of(example.label),
                 root_prediction.argmax(), std::nullopt, 0};
  std::size_t steps_used = 0;

  if (best.predicted == example.label) {
    std::vector<BeamState> beam{best};
    for (std::size_t step = 1; step <= config_.step_limit; ++step) {
      const auto probes = stage1_positions(beam, example.label);
      if (probes.empty()) break;
      auto successors = expand(probes, example.label);
      if (successors.empty()) break;
      steps_used = step;
      // Successors are sorted, so the first one is this step's minimum and
      // earlier steps win ties.
      if (successors.front().gold_score < best.gold_score) {
        best = successors.front();
      }
      if (successors.size() > config_.beam_width) {
        successors.erase(
            successors.begin() + static_cast<std::ptrdiff_t>(config_.beam_width),
            successors.end());
      }
      beam = std::move(successors);
      if (beam.front().predicted != example.label) break;
    }
  }

  return AttackResult{best.predicted != example.label,
                      example,
                      PairExample{best.p, best.q, example.label, example.provenance},
                      steps_used,
                      queries_ - queries_before,
                      best.gold_score,
                      best.history};
}

AttackResult attack_example(const PairExample& example,
                            const TargetModel& model,
                            const MaskedLanguageModel& lm,
                            const AttackConfig& config) {
  AttackEngine engine(model, lm, config);
  return engine.attack(example);
}

std::vector<AttackResult> attack_all_serial(
    std::span<const PairExample> examples, const TargetModel& model,
    const MaskedLanguageModel& lm, const AttackConfig& config) {
  std::vector<AttackResult> results;
  results.reserve(examples.size());
  for (const PairExample& example : examples) {
    results.push_back(attack_example(example, model, lm, config));
  }
  return results;
}

std::vector<AttackResult> attack_all(std::span<const PairExample> examples,
                                     const TargetModel& model,
                                     const MaskedLanguageModel& lm,
                                     const AttackConfig& config, int workers) {
  config.validate();
  if (workers <= 1 || !model.concurrent_safe() || !lm.concurrent_safe()) {
    return attack_all_serial(examples, model, lm, config);
  }
  std::vector<std::optional<AttackResult>> slots(examples.size());
  std::exception_ptr failure;
  const auto n = static_cast<std::ptrdiff_t>(examples.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    try {
      slots[k] = attack_example(examples[k], model, lm, config);
    } catch (...) {
#pragma omp critical(sharedword_attack_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  std::vector<AttackResult> results;
  results.reserve(slots.size());
  for (auto& slot : slots) results.push_back(std::move(*slot));
  return results;
}

}  // namespace sharedword
