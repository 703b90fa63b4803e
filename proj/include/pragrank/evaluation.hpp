#pragma once

// Leave-one-out evaluation of the transfer-language ranker and the
// ablation / feature-group suites built on it.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pragrank/features.hpp"
#include "pragrank/lambdarank.hpp"
#include "pragrank/ranking.hpp"

namespace pragrank {

inline constexpr std::size_t kMapK = 3;
inline constexpr std::size_t kNdcgP = 3;

/// Languages, one feature record per ordered pair, and the zero-shot table
/// that defines ground truth.
struct RankingDataset {
  std::vector<LanguageId> languages;
  std::map<LanguagePair, PairFeatures> features;
  ZeroShotTable zero_shot;
};

struct FoldResult {
  LanguageId test_language;
  double map = 0;
  double ndcg = 0;
  Ranking predicted;
  Ranking truth;
  std::vector<LanguageId> training_targets;
  std::size_t candidates_per_training_query = 0;
};

struct EvalReport {
  std::string label;
  std::string task;
  Hyperparameters hyperparameters;
  std::uint64_t seed = 0;
  /// Sorted by test language.
  std::vector<FoldResult> folds;
  double mean_map = 0;
  double mean_ndcg = 0;
  std::vector<std::string> warnings;
};

struct EvalOptions {
  Hyperparameters hyperparameters;
  std::uint64_t seed = 0;
  /// Worker threads for independent folds; results do not depend on it.
  unsigned jobs = 1;
};

/// Each language in turn is the test target. The ranker trains on queries
/// whose targets are the remaining languages, each with the other remaining
/// languages as candidates, then ranks all other languages for the test
/// target. Throws ValidationError listing every missing zero-shot entry or
/// feature record.
EvalReport loo_evaluate(const RankingDataset& dataset, const EvalOptions& options = {},
                        std::string label = {});

/// Same, after restricting every feature record to `config`.
EvalReport loo_evaluate(const RankingDataset& dataset, const FeatureConfig& config,
                        const EvalOptions& options = {});

/// base, base+All, then base+All minus each toggle (lcr, ltq, esd).
std::vector<EvalReport> ablation_suite(const RankingDataset& dataset, const FeatureConfig& base,
                                       const std::vector<std::string>& toggles,
                                       const EvalOptions& options = {});

/// One run per group with only that group's slots. Groups whose slots are
/// missing for every pair are skipped; `skipped` receives a warning each.
std::vector<EvalReport> group_suite(const RankingDataset& dataset,
                                    const std::vector<FeatureGroup>& groups,
                                    const EvalOptions& options = {},
                                    std::vector<std::string>* skipped = nullptr);

/// Published reference numbers (percent) for a configuration label and task
/// ("sa" or "dep"), when known. Display-only.
struct ReferenceScores {
  double map;
  double ndcg;
};
std::optional<ReferenceScores> reference_scores(const std::string& label, const std::string& task);

std::string report_to_json(const EvalReport& report);
/// Several reports in one JSON document: {"reports": [...]}.
std::string reports_to_json(const std::vector<EvalReport>& reports);
/// Table-shaped CSV: label,map,ndcg,map_is_best,ndcg_is_best,reference_map,
/// reference_ndcg. Metrics are percent with one decimal.
std::string reports_to_table_csv(const std::vector<EvalReport>& reports);

}  // namespace pragrank
