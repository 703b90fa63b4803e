#pragma once

// Gradient-boosted regression trees trained with the LambdaRank objective
// on NDCG. Trees grow leaf-wise with exact greedy split search; missing
// values (NaN) follow a per-node default direction chosen during training.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pragrank/features.hpp"
#include "pragrank/ranking.hpp"

namespace pragrank {

struct Candidate {
  PairFeatures features;
  double zero_shot = 0;
  int relevance = 0;

  const LanguageId& language() const { return features.transfer; }
};

/// One target language with its scored candidates.
struct RankingQuery {
  LanguageId target;
  std::vector<Candidate> candidates;
};

/// Builds a query from candidate feature records, deriving relevance from
/// the zero-shot ranking. Throws ValidationError when fewer than two
/// candidates remain, the target is a candidate, or a score is missing.
RankingQuery make_query(const LanguageId& target, std::vector<PairFeatures> candidates,
                        const ZeroShotTable& table);

struct Hyperparameters {
  int num_trees = 100;
  int max_leaves = 16;
  double learning_rate = 0.1;
  double sigma = 1.0;
  double lambda_reg = 0.0;
  int min_samples_leaf = 20;
  double min_child_hessian = 1e-3;
  /// NDCG truncation used for |delta NDCG|.
  int truncation = 3;

  friend bool operator==(const Hyperparameters&, const Hyperparameters&) = default;
};

struct TreeNode {
  /// -1 for a leaf.
  int feature = -1;
  double threshold = 0;
  bool default_left = true;
  int left = -1;
  int right = -1;
  double value = 0;

  bool is_leaf() const { return feature < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

/// Binary regression tree; node 0 is the root. x <= threshold goes left,
/// NaN goes to the default side.
struct RegressionTree {
  std::vector<TreeNode> nodes;

  double predict(std::span<const double> x) const;
  std::size_t leaf_count() const;
  friend bool operator==(const RegressionTree&, const RegressionTree&) = default;
};

struct TreeEnsemble {
  Hyperparameters hyperparameters;
  std::uint64_t seed = 0;
  std::vector<std::string> feature_names;
  std::vector<RegressionTree> trees;
  /// Mean training NDCG@truncation after each boosting round.
  std::vector<double> training_ndcg;

  double shrinkage() const { return hyperparameters.learning_rate; }
  /// sum over trees of shrinkage * leaf(x), x aligned with feature_names.
  double score(std::span<const double> x) const;
  friend bool operator==(const TreeEnsemble&, const TreeEnsemble&) = default;
};

struct LambdaGradients {
  std::vector<double> gradients;
  std::vector<double> hessians;
};

/// Per-candidate LambdaRank gradients and hessians for one query given
/// current scores. For every pair with rel_i > rel_j:
///   rho = 1 / (1 + exp(sigma (s_i - s_j)))
///   lambda_ij = -sigma * rho * |dNDCG@trunc_ij|
///   hessian   = sigma^2 * rho (1 - rho) * |dNDCG@trunc_ij|
/// with gains 2^rel - 1, positions from the current score order (ties by
/// input index) and normalization by the ideal DCG.
LambdaGradients lambda_gradients(std::span<const int> relevance, std::span<const double> scores,
                                 const Hyperparameters& hp);

/// Deterministic: identical inputs give bit-identical ensembles. Throws
/// ValidationError on inconsistent feature names, queries with fewer than
/// two candidates, or "degenerate labels" when no query has two distinct
/// grades. The seed is recorded in the model; training draws no random
/// numbers.
TreeEnsemble train_lambdarank(const std::vector<RankingQuery>& queries, const Hyperparameters& hp = {},
                              std::uint64_t seed = 0);

/// Scores candidates and ranks them (descending score, ascending id).
/// Throws ValidationError if a model feature is absent from the records.
Ranking predict_scores(const TreeEnsemble& ensemble, const std::vector<PairFeatures>& candidates);

std::string ensemble_to_json(const TreeEnsemble& ensemble);
TreeEnsemble ensemble_from_json(std::string_view json, std::string_view source = {});

}  // namespace pragrank
