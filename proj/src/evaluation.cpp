#include "pragrank/evaluation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include <json.hpp>

#include "pragrank/metrics.hpp"
#include "pragrank/parallel.hpp"
#include "pragrank/text.hpp"

namespace pragrank {

namespace {

std::vector<PairFeatures> candidates_for(const RankingDataset& d, const LanguageId& target,
                                         const std::vector<LanguageId>& pool) {
  std::vector<PairFeatures> out;
  for (const auto& c : pool)
    if (c != target) out.push_back(d.features.at({c, target}));
  return out;
}

void validate(const RankingDataset& d) {
  if (d.languages.size() < 3) throw ValidationError("loo_evaluate: need at least 3 languages");
  const std::set<LanguageId> unique(d.languages.begin(), d.languages.end());
  if (unique.size() != d.languages.size()) throw ValidationError("loo_evaluate: duplicate languages");
  std::vector<std::string> missing_scores, missing_features;
  for (const auto& tg : d.languages)
    for (const auto& tf : d.languages) {
      if (tf == tg) continue;
      if (!d.zero_shot.lookup(tf, tg)) missing_scores.push_back(to_string({tf, tg}));
      if (!d.features.count({tf, tg})) missing_features.push_back(to_string({tf, tg}));
    }
  if (!missing_scores.empty())
    throw ValidationError("loo_evaluate: missing zero-shot scores for " + text::join(missing_scores, ", "));
  if (!missing_features.empty())
    throw ValidationError("loo_evaluate: missing feature records for " + text::join(missing_features, ", "));
}

FoldResult run_fold(const RankingDataset& d, const LanguageId& test, const EvalOptions& options) {
  FoldResult fold;
  fold.test_language = test;
  std::vector<LanguageId> pool;
  for (const auto& l : d.languages)
    if (l != test) pool.push_back(l);
  std::sort(pool.begin(), pool.end());

  std::vector<RankingQuery> training;
  for (const auto& target : pool) {
    auto query = make_query(target, candidates_for(d, target, pool), d.zero_shot);
    for (const auto& c : query.candidates)
      if (c.language() == test) throw std::logic_error("loo_evaluate: test language leaked into training candidates");
    fold.candidates_per_training_query = query.candidates.size();
    fold.training_targets.push_back(target);
    training.push_back(std::move(query));
  }
  if (std::find(fold.training_targets.begin(), fold.training_targets.end(), test) != fold.training_targets.end())
    throw std::logic_error("loo_evaluate: test language used as a training target");

  const auto model = train_lambdarank(training, options.hyperparameters, options.seed);
  const auto test_candidates = candidates_for(d, test, pool);
  fold.predicted = predict_scores(model, test_candidates);
  fold.truth = ground_truth_ranking(d.zero_shot, test, pool);
  fold.map = map_at_k(fold.predicted, fold.truth, std::min(kMapK, pool.size()));
  fold.ndcg = ndcg_at_p(fold.predicted, relevance_grades(fold.truth), kNdcgP);
  return fold;
}

std::string percent(double v) { return text::format_fixed(v * 100.0, 1); }

}  // namespace

EvalReport loo_evaluate(const RankingDataset& dataset, const EvalOptions& options, std::string label) {
  validate(dataset);
  EvalReport report;
  report.label = std::move(label);
  report.task = dataset.zero_shot.task;
  report.hyperparameters = options.hyperparameters;
  report.seed = options.seed;

  std::vector<LanguageId> order = dataset.languages;
  std::sort(order.begin(), order.end());
  report.folds.resize(order.size());

  parallel_for(order.size(), options.jobs,
               [&](std::size_t i) { report.folds[i] = run_fold(dataset, order[i], options); });

  double map_sum = 0, ndcg_sum = 0;
  for (const auto& f : report.folds) {
    map_sum += f.map;
    ndcg_sum += f.ndcg;
  }
  report.mean_map = map_sum / static_cast<double>(report.folds.size());
  report.mean_ndcg = ndcg_sum / static_cast<double>(report.folds.size());
  return report;
}

EvalReport loo_evaluate(const RankingDataset& dataset, const FeatureConfig& config, const EvalOptions& options) {
  RankingDataset projected{dataset.languages, {}, dataset.zero_shot};
  for (const auto& [pair, features] : dataset.features) projected.features.emplace(pair, project(features, config));
  return loo_evaluate(projected, options, config.label());
}

std::vector<EvalReport> ablation_suite(const RankingDataset& dataset, const FeatureConfig& base,
                                       const std::vector<std::string>& toggles, const EvalOptions& options) {
  std::vector<std::vector<Slot>> removals;
  for (const auto& t : toggles) {
    const auto key = text::to_lower(text::trim(t));
    if (key != "lcr" && key != "ltq" && key != "esd")
      throw ValidationError("ablation_suite: unknown toggle '" + t + "' (expected LCR, LTQ or ESD)");
    removals.push_back(expand_slot_names(key));
  }
  std::vector<FeatureConfig> configs{base};
  FeatureConfig with_all = base;
  with_all.add.insert(proposed_slots().begin(), proposed_slots().end());
  configs.push_back(with_all);
  for (const auto& slots : removals) {
    FeatureConfig c = with_all;
    c.remove.insert(slots.begin(), slots.end());
    configs.push_back(c);
  }
  std::vector<EvalReport> out;
  for (const auto& c : configs) out.push_back(loo_evaluate(dataset, c, options));
  return out;
}

std::vector<EvalReport> group_suite(const RankingDataset& dataset, const std::vector<FeatureGroup>& groups,
                                    const EvalOptions& options, std::vector<std::string>* skipped) {
  std::vector<EvalReport> out;
  for (const auto g : groups) {
    bool available = false;
    for (const auto& [pair, features] : dataset.features) {
      for (const auto s : group_slots(g))
        if (features.get(s)) available = true;
      if (available) break;
    }
    if (!available) {
      if (skipped) skipped->push_back("group " + std::string(group_name(g)) + " skipped: no available feature values");
      continue;
    }
    out.push_back(loo_evaluate(dataset, FeatureConfig::of_group(g), options));
  }
  return out;
}

std::optional<ReferenceScores> reference_scores(const std::string& label, const std::string& task) {
  // {SA map, SA ndcg, DEP map, DEP ndcg}; NaN where no value exists.
  static const double nan = std::nan("");
  static const std::map<std::string, std::array<double, 4>> table = {
      {"langrank", {71.3, 86.5, 63.0, 82.2}},
      {"langrank+all", {76.0, 90.9, 61.7, 80.5}},
      {"langrank+all-lcr", {75.0, 88.3, 60.3, 79.6}},
      {"langrank+all-ltq", {72.4, 89.3, 63.1, 81.3}},
      {"langrank+all-esd", {77.7, 92.1, 58.2, 78.5}},
      {"mtvec", {71.1, 89.5, 43.0, 69.7}},
      {"mtvec+all", {74.3, 90.8, 49.7, 74.8}},
      {"mtvec+all-lcr", {72.9, 90.1, 54.1, 76.3}},
      {"mtvec+all-ltq", {71.2, 89.0, 53.0, 78.6}},
      {"mtvec+all-esd", {73.1, 90.7, 45.3, 73.9}},
      {"group:pretrain-specific", {39.0, 55.5, nan, nan}},
      {"group:data-specific", {68.0, 85.4, 37.2, 55.0}},
      {"group:typology", {44.9, 60.7, 58.0, 79.8}},
      {"group:geography", {24.9, 55.0, 32.3, 65.1}},
      {"group:orthography", {34.2, 56.6, 35.5, 60.5}},
      {"group:pragmatic", {73.0, 88.0, 46.5, 71.8}},
  };
  const auto it = table.find(text::to_lower(label));
  if (it == table.end()) return std::nullopt;
  const auto t = text::to_lower(task);
  std::size_t base = 0;
  if (t == "sa")
    base = 0;
  else if (t == "dep")
    base = 2;
  else
    return std::nullopt;
  if (std::isnan(it->second[base])) return std::nullopt;
  return ReferenceScores{it->second[base], it->second[base + 1]};
}

namespace {

nlohmann::ordered_json ranking_json(const Ranking& r) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& l : r.order) arr.push_back({{"language", l.code()}, {"score", r.scores.at(l)}});
  return arr;
}

nlohmann::ordered_json report_json(const EvalReport& r) {
  nlohmann::ordered_json j;
  j["label"] = r.label;
  j["task"] = r.task;
  const auto& hp = r.hyperparameters;
  j["config"] = {{"num_trees", hp.num_trees},   {"max_leaves", hp.max_leaves},
                 {"learning_rate", hp.learning_rate}, {"sigma", hp.sigma},
                 {"lambda_reg", hp.lambda_reg}, {"min_samples_leaf", hp.min_samples_leaf},
                 {"truncation", hp.truncation}, {"seed", r.seed}};
  j["mean_map"] = r.mean_map;
  j["mean_ndcg3"] = r.mean_ndcg;
  j["mean_map_percent"] = percent(r.mean_map);
  j["mean_ndcg3_percent"] = percent(r.mean_ndcg);
  if (const auto ref = reference_scores(r.label, r.task))
    j["reference"] = {{"map", ref->map}, {"ndcg3", ref->ndcg}};
  auto folds = nlohmann::ordered_json::array();
  for (const auto& f : r.folds) {
    nlohmann::ordered_json fj;
    fj["test_language"] = f.test_language.code();
    fj["map"] = f.map;
    fj["ndcg3"] = f.ndcg;
    fj["predicted"] = ranking_json(f.predicted);
    fj["truth"] = ranking_json(f.truth);
    folds.push_back(fj);
  }
  j["folds"] = folds;
  j["warnings"] = r.warnings;
  return j;
}

}  // namespace

std::string report_to_json(const EvalReport& report) { return report_json(report).dump(1) + "\n"; }

std::string reports_to_json(const std::vector<EvalReport>& reports) {
  nlohmann::ordered_json j;
  j["reports"] = nlohmann::ordered_json::array();
  for (const auto& r : reports) j["reports"].push_back(report_json(r));
  return j.dump(1) + "\n";
}

std::string reports_to_table_csv(const std::vector<EvalReport>& reports) {
  double top_map = -1, top_ndcg = -1;
  for (const auto& r : reports) {
    top_map = std::max(top_map, std::stod(percent(r.mean_map)));
    top_ndcg = std::max(top_ndcg, std::stod(percent(r.mean_ndcg)));
  }
  std::string out = "label,map,ndcg,map_is_best,ndcg_is_best,reference_map,reference_ndcg\n";
  for (const auto& r : reports) {
    const auto m = percent(r.mean_map), n = percent(r.mean_ndcg);
    const auto ref = reference_scores(r.label, r.task);
    out += r.label + "," + m + "," + n + "," + (std::stod(m) == top_map ? "true" : "false") + "," +
           (std::stod(n) == top_ndcg ? "true" : "false") + "," +
           (ref ? text::format_fixed(ref->map, 1) : "") + "," + (ref ? text::format_fixed(ref->ndcg, 1) : "") + "\n";
  }
  return out;
}

}  // namespace pragrank
