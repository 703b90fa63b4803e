#pragma once

// End-to-end orchestration over a run manifest: feature computation with
// content-hash caching, dataset assembly, training and analysis outputs.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pragrank/analysis.hpp"
#include "pragrank/evaluation.hpp"
#include "pragrank/features.hpp"
#include "pragrank/lambdarank.hpp"
#include "pragrank/manifest.hpp"
#include "pragrank/mwe.hpp"

namespace pragrank {

struct PipelineOptions {
  std::string task = "sa";
  unsigned jobs = 1;
  /// Overrides PRAGRANK_CACHE and <output>/cache.
  std::optional<std::string> cache_dir;
  MweOptions mwe;
};

/// PRAGRANK_CACHE if set, otherwise <output>/cache.
std::string cache_directory(const RunManifest& manifest, const PipelineOptions& options);

struct FeaturizeResult {
  /// One record per ordered pair of manifest languages, sorted.
  std::vector<PairFeatures> rows;
  std::vector<std::string> warnings;
  std::vector<CorpusStats> stats;
  std::map<LanguageId, MweList> mwes;
  std::size_t cache_hits = 0;
  std::size_t cache_misses = 0;
};

/// Computes every slot of `config` for all ordered pairs. Resources missing
/// from the manifest leave the affected slots NA with a warning. The
/// manifest must already be valid.
FeaturizeResult featurize(const RunManifest& manifest, const FeatureConfig& config,
                          const PipelineOptions& options = {});

/// The widest configuration the manifest supports: every slot, plus MTVec
/// vectors when language vectors are present.
FeatureConfig superset_config(const RunManifest& manifest);

ZeroShotTable load_zero_shot(const RunManifest& manifest, const std::string& task);

/// Pairs the feature records with the task's zero-shot table.
RankingDataset make_dataset(const std::vector<LanguageId>& languages, const std::vector<PairFeatures>& rows,
                            const ZeroShotTable& zero_shot, const FeatureConfig& config);

/// One query per language, with every other language as a candidate.
TreeEnsemble train_all(const RankingDataset& dataset, const Hyperparameters& hp, std::uint64_t seed);

/// Named output files (relative path -> contents) plus warnings.
struct AnalysisOutputs {
  std::map<std::string, std::string> files;
  std::vector<std::string> warnings;
};

/// Networks (ESD and syntactic distance, k=2) with DOT renderings and the
/// within-area fractions, correlations with geographic distance, the
/// ptr/vtr table and, for languages with gold MWE lists, gold overlap and
/// LTQ agreement.
AnalysisOutputs analyze(const RunManifest& manifest, const PipelineOptions& options = {});

}  // namespace pragrank
