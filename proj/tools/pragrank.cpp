// pragrank: batch pipeline over a run manifest.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pragrank/evaluation.hpp"
#include "pragrank/lambdarank.hpp"
#include "pragrank/manifest.hpp"
#include "pragrank/pipeline.hpp"
#include "pragrank/text.hpp"

namespace fs = std::filesystem;
using namespace pragrank;

namespace {

struct UsageError : std::runtime_error {
  std::vector<std::string> errors;
  explicit UsageError(std::vector<std::string> list)
      : std::runtime_error(list.empty() ? "invalid input" : list.front()), errors(std::move(list)) {}
};

struct Args {
  std::string manifest;
  std::string config;
  std::string task = "sa";
  std::optional<std::uint64_t> seed;
  std::string out;
  unsigned jobs = 1;
  std::string features;
  std::string model;
  std::string target;
  std::string suite = "ablation";
  int trees = Hyperparameters{}.num_trees;
  int leaves = Hyperparameters{}.max_leaves;
  double learning_rate = Hyperparameters{}.learning_rate;
};

std::string slug(const std::string& label) {
  std::string out;
  for (const char c : text::to_lower(label)) out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
  return out;
}

RunManifest require_manifest(const Args& a) {
  if (a.manifest.empty()) throw UsageError({"--manifest is required"});
  if (!fs::is_regular_file(a.manifest)) throw UsageError({"manifest not found: " + a.manifest});
  auto m = load_manifest(a.manifest);
  auto errors = validate_manifest(m);
  if (!errors.empty()) throw UsageError(errors);
  return m;
}

std::string out_dir(const Args& a, const RunManifest* m) {
  if (!a.out.empty()) return a.out;
  if (m) return m->output;
  return "out";
}

FeatureConfig config_of(const Args& a, const FeatureConfig& fallback) {
  if (a.config.empty()) return fallback;
  if (fs::is_regular_file(a.config)) return FeatureConfig::parse(text::read_file(a.config), a.config);
  return FeatureConfig::from_label(a.config);
}

std::string features_path(const Args& a, const std::string& out) {
  if (!a.features.empty()) return a.features;
  return (fs::path(out) / ("features_" + text::to_lower(a.task) + ".csv")).string();
}

std::vector<PairFeatures> require_features(const std::string& path) {
  if (!fs::is_regular_file(path))
    throw UsageError({"missing upstream artifact: " + path + " (run 'pragrank featurize' first)"});
  return features_from_csv(text::read_file(path), path);
}

Hyperparameters hyperparameters_of(const Args& a) {
  Hyperparameters hp;
  hp.num_trees = a.trees;
  hp.max_leaves = a.leaves;
  hp.learning_rate = a.learning_rate;
  return hp;
}

std::uint64_t seed_of(const Args& a, const RunManifest& m) { return a.seed ? *a.seed : m.seed; }

void write(const std::string& path, const std::string& contents) {
  text::write_file(path, contents);
  std::cerr << "wrote " << path << "\n";
}

std::string warnings_text(const std::vector<std::string>& warnings) {
  std::string out;
  for (const auto& w : warnings) out += w + "\n";
  return out;
}

int cmd_featurize(const Args& a) {
  const auto m = require_manifest(a);
  const auto out = out_dir(a, &m);
  PipelineOptions opts;
  opts.task = text::to_lower(a.task);
  opts.jobs = a.jobs;
  RunManifest routed = m;
  routed.output = out;
  const auto result = featurize(routed, config_of(a, superset_config(m)), opts);
  write(features_path(a, out), features_to_csv(result.rows));
  write((fs::path(out) / "corpus_stats.csv").string(), ratios_to_csv(result.stats));
  for (const auto& [lang, list] : result.mwes)
    write((fs::path(out) / "mwes" / (lang.code() + ".tsv")).string(), serialize(list));
  write((fs::path(out) / ("featurize_" + opts.task + "_warnings.txt")).string(), warnings_text(result.warnings));
  std::cerr << result.rows.size() << " pair records, " << result.warnings.size() << " warnings, cache "
            << result.cache_hits << " hits / " << result.cache_misses << " misses\n";
  return 0;
}

RankingDataset dataset_of(const Args& a, const RunManifest& m, const std::string& out, const FeatureConfig& config) {
  const auto rows = require_features(features_path(a, out));
  return make_dataset(m.languages, rows, load_zero_shot(m, a.task), config);
}

int cmd_train(const Args& a) {
  const auto m = require_manifest(a);
  const auto out = out_dir(a, &m);
  const auto config = config_of(a, FeatureConfig::from_label("langrank+all"));
  const auto model = train_all(dataset_of(a, m, out, config), hyperparameters_of(a), seed_of(a, m));
  const auto path = a.model.empty() ? (fs::path(out) / "model.json").string() : a.model;
  write(path, ensemble_to_json(model));
  return 0;
}

int cmd_rank(const Args& a) {
  if (a.target.empty()) throw UsageError({"--target is required"});
  std::optional<RunManifest> m;
  if (!a.manifest.empty()) m = require_manifest(a);
  const auto out = out_dir(a, m ? &*m : nullptr);
  const auto model_path = a.model.empty() ? (fs::path(out) / "model.json").string() : a.model;
  if (!fs::is_regular_file(model_path))
    throw UsageError({"missing upstream artifact: " + model_path + " (run 'pragrank train' first)"});
  const auto model = ensemble_from_json(text::read_file(model_path), model_path);
  const LanguageId target(a.target);
  std::vector<PairFeatures> candidates;
  for (auto& r : require_features(features_path(a, out)))
    if (r.target == target && r.transfer != target) candidates.push_back(std::move(r));
  if (candidates.empty()) throw UsageError({"no candidates for target '" + target.code() + "'"});
  const auto ranking = predict_scores(model, candidates);
  std::string csv = "rank,language,score\n";
  for (std::size_t i = 0; i < ranking.order.size(); ++i)
    csv += std::to_string(i + 1) + "," + ranking.order[i].code() + "," +
           text::format_double(ranking.scores.at(ranking.order[i])) + "\n";
  write((fs::path(out) / ("ranking_" + target.code() + ".csv")).string(), csv);
  std::cout << csv;
  return 0;
}

int cmd_evaluate(const Args& a) {
  const auto m = require_manifest(a);
  const auto out = out_dir(a, &m);
  const auto config = config_of(a, FeatureConfig::from_label("langrank+all"));
  EvalOptions opts{hyperparameters_of(a), seed_of(a, m), a.jobs};
  const auto report = loo_evaluate(dataset_of(a, m, out, config), config, opts);
  const auto stem = "eval_" + text::to_lower(a.task) + "_" + slug(report.label);
  write((fs::path(out) / (stem + ".json")).string(), report_to_json(report));
  write((fs::path(out) / (stem + ".csv")).string(), reports_to_table_csv({report}));
  std::cout << report.label << " " << a.task << ": MAP " << text::format_fixed(report.mean_map * 100, 1) << " NDCG@3 "
            << text::format_fixed(report.mean_ndcg * 100, 1) << "\n";
  return 0;
}

int cmd_ablate(const Args& a) {
  const auto m = require_manifest(a);
  const auto out = out_dir(a, &m);
  const auto rows = require_features(features_path(a, out));
  const auto zero_shot = load_zero_shot(m, a.task);
  const auto everything = superset_config(m);
  const auto dataset = make_dataset(m.languages, rows, zero_shot, everything);
  EvalOptions opts{hyperparameters_of(a), seed_of(a, m), a.jobs};
  std::vector<EvalReport> reports;
  std::string stem;
  if (a.suite == "ablation") {
    const auto base = config_of(a, FeatureConfig::langrank());
    reports = ablation_suite(dataset, base, {"lcr", "ltq", "esd"}, opts);
    stem = "ablation_" + text::to_lower(a.task) + "_" + slug(base.label());
  } else if (a.suite == "groups") {
    std::vector<std::string> skipped;
    reports = group_suite(dataset, all_groups(), opts, &skipped);
    for (const auto& s : skipped) std::cerr << "warning: " << s << "\n";
    if (!reports.empty()) reports.front().warnings.insert(reports.front().warnings.end(), skipped.begin(), skipped.end());
    stem = "groups_" + text::to_lower(a.task);
  } else {
    throw UsageError({"--suite must be 'ablation' or 'groups'"});
  }
  write((fs::path(out) / (stem + ".json")).string(), reports_to_json(reports));
  const auto table = reports_to_table_csv(reports);
  write((fs::path(out) / (stem + ".csv")).string(), table);
  std::cout << table;
  return 0;
}

int cmd_analyze(const Args& a) {
  const auto m = require_manifest(a);
  const auto out = out_dir(a, &m);
  PipelineOptions opts;
  opts.task = text::to_lower(a.task);
  opts.jobs = a.jobs;
  RunManifest routed = m;
  routed.output = out;
  const auto result = analyze(routed, opts);
  for (const auto& [name, contents] : result.files) write((fs::path(out) / "analysis" / name).string(), contents);
  write((fs::path(out) / "analysis" / "warnings.txt").string(), warnings_text(result.warnings));
  return 0;
}

void print_errors(const std::vector<std::string>& errors) {
  nlohmann::ordered_json j;
  j["errors"] = errors;
  std::cout << j.dump(1) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transfer-language ranking with pragmatic features"};
  app.require_subcommand(1);
  Args args;

  const auto common = [&](CLI::App* cmd) {
    cmd->add_option("--manifest", args.manifest, "Run manifest (TOML)");
    cmd->add_option("--config", args.config, "Feature configuration: file or label such as langrank+all-esd");
    cmd->add_option("--task", args.task, "Task name from the manifest")->capture_default_str();
    cmd->add_option("--seed", args.seed, "Seed (defaults to the manifest's run.seed)");
    cmd->add_option("--out", args.out, "Output directory (defaults to the manifest's run.output)");
    cmd->add_option("--jobs", args.jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_option("--features", args.features, "Feature CSV (defaults to <out>/features_<task>.csv)");
  };
  const auto model_opts = [&](CLI::App* cmd) {
    cmd->add_option("--trees", args.trees, "Boosting rounds")->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_option("--leaves", args.leaves, "Leaves per tree")->capture_default_str()->check(CLI::Range(2, 1 << 16));
    cmd->add_option("--learning-rate", args.learning_rate, "Shrinkage")->capture_default_str()->check(CLI::PositiveNumber);
  };

  auto* featurize_cmd = app.add_subcommand("featurize", "Compute feature records for all ordered pairs");
  common(featurize_cmd);
  auto* train_cmd = app.add_subcommand("train", "Train a ranker on every language as a query");
  common(train_cmd);
  model_opts(train_cmd);
  train_cmd->add_option("--model", args.model, "Model output path (defaults to <out>/model.json)");
  auto* rank_cmd = app.add_subcommand("rank", "Rank candidate transfer languages for a target");
  common(rank_cmd);
  rank_cmd->add_option("--model", args.model, "Model path (defaults to <out>/model.json)");
  rank_cmd->add_option("--target", args.target, "Target language")->required();
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Leave-one-out evaluation");
  common(evaluate_cmd);
  model_opts(evaluate_cmd);
  auto* ablate_cmd = app.add_subcommand("ablate", "Feature ablation or feature-group suite");
  common(ablate_cmd);
  model_opts(ablate_cmd);
  ablate_cmd->add_option("--suite", args.suite, "ablation or groups")->capture_default_str();
  auto* analyze_cmd = app.add_subcommand("analyze", "Networks, correlations and gold-MWE checks");
  common(analyze_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*featurize_cmd) return cmd_featurize(args);
    if (*train_cmd) return cmd_train(args);
    if (*rank_cmd) return cmd_rank(args);
    if (*evaluate_cmd) return cmd_evaluate(args);
    if (*ablate_cmd) return cmd_ablate(args);
    if (*analyze_cmd) return cmd_analyze(args);
  } catch (const UsageError& e) {
    print_errors(e.errors);
    return 2;
  } catch (const FormatError& e) {
    print_errors({e.what()});
    return 2;
  } catch (const ValidationError& e) {
    print_errors({e.what()});
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
