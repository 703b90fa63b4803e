#include "pragrank/lambdarank.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include <json.hpp>

#include "pragrank/metrics.hpp"

namespace pragrank {

namespace {

constexpr double kMinGain = 1e-12;
constexpr int kModelVersion = 1;
constexpr const char* kModelFormat = "pragrank.tree_ensemble";

struct Split {
  double gain = 0;
  int feature = -1;
  double threshold = 0;
  bool default_left = true;

  bool valid() const { return feature >= 0; }
};

struct Leaf {
  int node = 0;
  std::vector<int> samples;
  /// Per feature: samples with a non-missing value, ascending (value, id).
  std::vector<std::vector<int>> sorted;
  double grad = 0;
  double hess = 0;
  Split best;
};

/// Dense row-major feature matrix; NaN marks a missing value.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(data).subspan(r * cols, cols);
  }
};

double split_threshold(double lo, double hi) {
  const double mid = lo + (hi - lo) / 2.0;
  return mid < hi ? mid : lo;
}

class TreeBuilder {
 public:
  TreeBuilder(const Matrix& x, const std::vector<double>& grad, const std::vector<double>& hess,
              const Hyperparameters& hp)
      : x_(x), grad_(grad), hess_(hess), hp_(hp) {}

  /// Grows one tree; leaf_of[s] receives the leaf node index of sample s.
  RegressionTree build(const std::vector<std::vector<int>>& presorted, std::vector<int>& leaf_of) {
    RegressionTree tree;
    tree.nodes.emplace_back();
    std::vector<Leaf> leaves(1);
    Leaf& root = leaves.front();
    root.node = 0;
    root.samples.resize(x_.rows);
    std::iota(root.samples.begin(), root.samples.end(), 0);
    root.sorted = presorted;
    accumulate(root);
    root.best = find_split(root);

    while (static_cast<int>(leaves.size()) < hp_.max_leaves) {
      int pick = -1;
      for (std::size_t i = 0; i < leaves.size(); ++i)
        if (leaves[i].best.valid() && (pick < 0 || leaves[i].best.gain > leaves[pick].best.gain))
          pick = static_cast<int>(i);
      if (pick < 0) break;

      Leaf parent = std::move(leaves[pick]);
      const Split split = parent.best;
      const int left_node = static_cast<int>(tree.nodes.size());
      tree.nodes.emplace_back();
      tree.nodes.emplace_back();
      TreeNode& node = tree.nodes[parent.node];
      node.feature = split.feature;
      node.threshold = split.threshold;
      node.default_left = split.default_left;
      node.left = left_node;
      node.right = left_node + 1;

      std::vector<char> goes_left(x_.rows, 0);
      for (const int s : parent.samples) {
        const double v = x_.at(s, split.feature);
        goes_left[s] = std::isnan(v) ? split.default_left : (v <= split.threshold);
      }
      Leaf left, right;
      left.node = left_node;
      right.node = left_node + 1;
      for (const int s : parent.samples) (goes_left[s] ? left : right).samples.push_back(s);
      left.sorted.resize(x_.cols);
      right.sorted.resize(x_.cols);
      for (std::size_t f = 0; f < x_.cols; ++f)
        for (const int s : parent.sorted[f]) (goes_left[s] ? left : right).sorted[f].push_back(s);
      accumulate(left);
      accumulate(right);
      left.best = find_split(left);
      right.best = find_split(right);
      leaves[pick] = std::move(left);
      leaves.push_back(std::move(right));
    }

    for (const auto& leaf : leaves) {
      const double denom = leaf.hess + hp_.lambda_reg;
      tree.nodes[leaf.node].value = denom > 0 ? -leaf.grad / denom : 0.0;
      for (const int s : leaf.samples) leaf_of[s] = leaf.node;
    }
    return tree;
  }

 private:
  void accumulate(Leaf& leaf) const {
    leaf.grad = 0;
    leaf.hess = 0;
    for (const int s : leaf.samples) {
      leaf.grad += grad_[s];
      leaf.hess += hess_[s];
    }
  }

  double leaf_score(double g, double h) const { return g * g / (h + hp_.lambda_reg); }

  bool admissible(std::size_t n, double h) const {
    return n >= static_cast<std::size_t>(hp_.min_samples_leaf) && h >= hp_.min_child_hessian &&
           h + hp_.lambda_reg > 0;
  }

  Split find_split(const Leaf& leaf) const {
    Split best;
    const std::size_t n = leaf.samples.size();
    if (n < 2 * static_cast<std::size_t>(hp_.min_samples_leaf)) return best;
    if (!(leaf.hess + hp_.lambda_reg > 0)) return best;
    const double parent = leaf_score(leaf.grad, leaf.hess);

    for (std::size_t f = 0; f < x_.cols; ++f) {
      const auto& list = leaf.sorted[f];
      if (list.empty()) continue;
      double g_present = 0, h_present = 0;
      for (const int s : list) {
        g_present += grad_[s];
        h_present += hess_[s];
      }
      const std::size_t n_missing = n - list.size();
      const double g_missing = n_missing ? leaf.grad - g_present : 0.0;
      const double h_missing = n_missing ? leaf.hess - h_present : 0.0;

      double gl = 0, hl = 0;
      std::size_t nl = 0;
      for (std::size_t k = 0; k < list.size(); ++k) {
        const int s = list[k];
        gl += grad_[s];
        hl += hess_[s];
        ++nl;
        const bool last = k + 1 == list.size();
        const double v = x_.at(s, f);
        if (!last && x_.at(list[k + 1], f) == v) continue;
        if (last && n_missing == 0) break;
        const double threshold = last ? v : split_threshold(v, x_.at(list[k + 1], f));
        const double gr = g_present - gl, hr = h_present - hl;
        const std::size_t nr = list.size() - nl;

        const auto consider = [&](double g_l, double h_l, std::size_t n_l, double g_r, double h_r,
                                  std::size_t n_r, bool default_left) {
          if (!admissible(n_l, h_l) || !admissible(n_r, h_r)) return;
          const double gain = leaf_score(g_l, h_l) + leaf_score(g_r, h_r) - parent;
          if (gain > kMinGain && gain > best.gain) {
            best = {gain, static_cast<int>(f), threshold, default_left};
          }
        };

        if (n_missing == 0) {
          consider(gl, hl, nl, gr, hr, nr, nl >= nr);
        } else {
          if (!last)
            consider(gl + g_missing, hl + h_missing, nl + n_missing, gr, hr, nr, true);
          consider(gl, hl, nl, gr + g_missing, hr + h_missing, nr + n_missing, false);
        }
      }
    }
    return best;
  }

  const Matrix& x_;
  const std::vector<double>& grad_;
  const std::vector<double>& hess_;
  const Hyperparameters& hp_;
};

double mean_training_ndcg(const std::vector<std::size_t>& offsets, const std::vector<int>& relevance,
                          const std::vector<double>& scores, std::size_t p) {
  double total = 0;
  for (std::size_t q = 0; q + 1 < offsets.size(); ++q) {
    const std::size_t begin = offsets[q], end = offsets[q + 1];
    std::vector<std::size_t> idx(end - begin);
    std::iota(idx.begin(), idx.end(), begin);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    std::vector<int> in_order, ideal;
    for (const auto i : idx) in_order.push_back(relevance[i]);
    ideal = in_order;
    std::sort(ideal.begin(), ideal.end(), std::greater<>());
    const double best = dcg_at_p(ideal, p);
    total += best == 0 ? 1.0 : dcg_at_p(in_order, p) / best;
  }
  return total / static_cast<double>(offsets.size() - 1);
}

}  // namespace

RankingQuery make_query(const LanguageId& target, std::vector<PairFeatures> candidates,
                        const ZeroShotTable& table) {
  std::sort(candidates.begin(), candidates.end(),
            [](const PairFeatures& a, const PairFeatures& b) { return a.transfer < b.transfer; });
  std::vector<LanguageId> ids;
  for (const auto& c : candidates) {
    if (c.transfer == target)
      throw ValidationError("make_query: target '" + target.code() + "' listed as its own candidate");
    if (c.target != target)
      throw ValidationError("make_query: candidate features for " + to_string({c.transfer, c.target}) +
                            " do not belong to target '" + target.code() + "'");
    if (!ids.empty() && ids.back() == c.transfer)
      throw ValidationError("make_query: duplicate candidate '" + c.transfer.code() + "'");
    ids.push_back(c.transfer);
  }
  if (ids.size() < 2) throw ValidationError("make_query: target '" + target.code() + "' has fewer than 2 candidates");
  const auto truth = ground_truth_ranking(table, target, ids);
  const auto grades = relevance_grades(truth);
  RankingQuery q{target, {}};
  for (auto& c : candidates) {
    const auto lang = c.transfer;
    q.candidates.push_back({std::move(c), truth.scores.at(lang), grades.at(lang)});
  }
  return q;
}

double RegressionTree::predict(std::span<const double> x) const {
  std::size_t i = 0;
  while (!nodes[i].is_leaf()) {
    const auto& n = nodes[i];
    const double v = x[static_cast<std::size_t>(n.feature)];
    const bool left = std::isnan(v) ? n.default_left : v <= n.threshold;
    i = static_cast<std::size_t>(left ? n.left : n.right);
  }
  return nodes[i].value;
}

std::size_t RegressionTree::leaf_count() const {
  return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

double TreeEnsemble::score(std::span<const double> x) const {
  double s = 0;
  for (const auto& tree : trees) s += shrinkage() * tree.predict(x);
  return s;
}

LambdaGradients lambda_gradients(std::span<const int> relevance, std::span<const double> scores,
                                 const Hyperparameters& hp) {
  const std::size_t n = relevance.size();
  LambdaGradients out{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  if (n < 2) return out;
  const auto trunc = static_cast<std::size_t>(std::max(1, hp.truncation));

  std::vector<std::size_t> by_score(n);
  std::iota(by_score.begin(), by_score.end(), 0);
  std::stable_sort(by_score.begin(), by_score.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  std::vector<std::size_t> pos(n);
  for (std::size_t p = 0; p < n; ++p) pos[by_score[p]] = p;

  std::vector<int> ideal(relevance.begin(), relevance.end());
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  const double max_dcg = dcg_at_p(ideal, trunc);
  if (max_dcg <= 0) return out;
  const double inv_max_dcg = 1.0 / max_dcg;

  const auto discount = [&](std::size_t p) { return p < trunc ? 1.0 / std::log2(static_cast<double>(p) + 2.0) : 0.0; };
  const auto gain = [](int r) { return std::exp2(static_cast<double>(r)) - 1.0; };

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (relevance[i] <= relevance[j]) continue;
      const double delta = std::abs((gain(relevance[i]) - gain(relevance[j])) *
                                    (discount(pos[i]) - discount(pos[j]))) * inv_max_dcg;
      if (delta == 0) continue;
      const double rho = 1.0 / (1.0 + std::exp(hp.sigma * (scores[i] - scores[j])));
      const double lambda = -hp.sigma * rho * delta;
      const double hessian = hp.sigma * hp.sigma * rho * (1.0 - rho) * delta;
      out.gradients[i] += lambda;
      out.gradients[j] -= lambda;
      out.hessians[i] += hessian;
      out.hessians[j] += hessian;
    }
  }
  return out;
}

TreeEnsemble train_lambdarank(const std::vector<RankingQuery>& queries, const Hyperparameters& hp,
                              std::uint64_t seed) {
  if (queries.empty()) throw ValidationError("train_lambdarank: no training queries");
  if (hp.num_trees < 0 || hp.max_leaves < 2 || hp.min_samples_leaf < 1 || !(hp.learning_rate > 0))
    throw ValidationError("train_lambdarank: invalid hyperparameters");

  TreeEnsemble model;
  model.hyperparameters = hp;
  model.seed = seed;
  model.feature_names = queries.front().candidates.empty()
                            ? std::vector<std::string>{}
                            : queries.front().candidates.front().features.names();

  Matrix x;
  x.cols = model.feature_names.size();
  std::vector<int> relevance;
  std::vector<std::size_t> offsets{0};
  bool informative = false;
  for (const auto& q : queries) {
    if (q.candidates.size() < 2)
      throw ValidationError("train_lambdarank: query '" + q.target.code() + "' has fewer than 2 candidates");
    std::vector<const Candidate*> sorted;
    for (const auto& c : q.candidates) sorted.push_back(&c);
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const Candidate* a, const Candidate* b) { return a->language() < b->language(); });
    for (const auto* c : sorted) {
      if (c->features.names() != model.feature_names)
        throw ValidationError("train_lambdarank: inconsistent feature slots for " +
                              to_string({c->features.transfer, c->features.target}));
      const auto values = c->features.values();
      x.data.insert(x.data.end(), values.begin(), values.end());
      relevance.push_back(c->relevance);
      if (c->relevance != sorted.front()->relevance) informative = true;
    }
    offsets.push_back(relevance.size());
  }
  if (!informative) throw ValidationError("train_lambdarank: degenerate labels (no query has two distinct grades)");
  x.rows = relevance.size();

  std::vector<std::vector<int>> presorted(x.cols);
  for (std::size_t f = 0; f < x.cols; ++f) {
    for (std::size_t s = 0; s < x.rows; ++s)
      if (!std::isnan(x.at(s, f))) presorted[f].push_back(static_cast<int>(s));
    std::stable_sort(presorted[f].begin(), presorted[f].end(),
                     [&](int a, int b) { return x.at(a, f) < x.at(b, f); });
  }

  std::vector<double> scores(x.rows, 0.0), grad(x.rows), hess(x.rows);
  std::vector<int> leaf_of(x.rows, 0);
  const auto trunc = static_cast<std::size_t>(std::max(1, hp.truncation));
  for (int t = 0; t < hp.num_trees; ++t) {
    for (std::size_t q = 0; q + 1 < offsets.size(); ++q) {
      const std::size_t b = offsets[q], e = offsets[q + 1];
      const auto lg = lambda_gradients(std::span<const int>(relevance).subspan(b, e - b),
                                       std::span<const double>(scores).subspan(b, e - b), hp);
      std::copy(lg.gradients.begin(), lg.gradients.end(), grad.begin() + static_cast<std::ptrdiff_t>(b));
      std::copy(lg.hessians.begin(), lg.hessians.end(), hess.begin() + static_cast<std::ptrdiff_t>(b));
    }
    TreeBuilder builder(x, grad, hess, hp);
    auto tree = builder.build(presorted, leaf_of);
    if (tree.nodes.size() == 1) break;  // nothing left to split
    for (std::size_t s = 0; s < x.rows; ++s) scores[s] += model.shrinkage() * tree.nodes[leaf_of[s]].value;
    model.trees.push_back(std::move(tree));
    model.training_ndcg.push_back(mean_training_ndcg(offsets, relevance, scores, trunc));
  }
  return model;
}

Ranking predict_scores(const TreeEnsemble& ensemble, const std::vector<PairFeatures>& candidates) {
  std::map<LanguageId, double> scores;
  std::vector<double> x(ensemble.feature_names.size());
  for (const auto& c : candidates) {
    const auto names = c.names();
    const auto values = c.values();
    std::unordered_map<std::string, std::size_t> column;
    for (std::size_t i = 0; i < names.size(); ++i) column.emplace(names[i], i);
    for (std::size_t i = 0; i < ensemble.feature_names.size(); ++i) {
      const auto it = column.find(ensemble.feature_names[i]);
      if (it == column.end())
        throw ValidationError("predict_scores: model feature '" + ensemble.feature_names[i] +
                              "' missing for candidate '" + c.transfer.code() + "'");
      x[i] = values[it->second];
    }
    if (!scores.emplace(c.transfer, ensemble.score(x)).second)
      throw ValidationError("predict_scores: duplicate candidate '" + c.transfer.code() + "'");
  }
  return rank_by_scores(scores);
}

// ---------------------------------------------------------------------------

std::string ensemble_to_json(const TreeEnsemble& m) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["format"] = kModelFormat;
  j["version"] = kModelVersion;
  const auto& hp = m.hyperparameters;
  j["hyperparameters"] = {{"num_trees", hp.num_trees},
                          {"max_leaves", hp.max_leaves},
                          {"learning_rate", hp.learning_rate},
                          {"sigma", hp.sigma},
                          {"lambda_reg", hp.lambda_reg},
                          {"min_samples_leaf", hp.min_samples_leaf},
                          {"min_child_hessian", hp.min_child_hessian},
                          {"truncation", hp.truncation}};
  j["seed"] = m.seed;
  j["feature_names"] = m.feature_names;
  auto trees = ordered_json::array();
  for (const auto& tree : m.trees) {
    auto nodes = ordered_json::array();
    for (const auto& n : tree.nodes) {
      if (n.is_leaf())
        nodes.push_back({{"leaf", n.value}});
      else
        nodes.push_back({{"feature", n.feature},
                         {"threshold", n.threshold},
                         {"default_left", n.default_left},
                         {"left", n.left},
                         {"right", n.right}});
    }
    trees.push_back({{"nodes", nodes}});
  }
  j["trees"] = trees;
  j["training_ndcg"] = m.training_ndcg;
  return j.dump(1) + "\n";
}

TreeEnsemble ensemble_from_json(std::string_view text, std::string_view source) {
  const auto fail = [&](const std::string& what) -> TreeEnsemble {
    throw FormatError(std::string(source), 0, "model: " + what);
  };
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    return fail(e.what());
  }
  try {
    if (j.at("format") != kModelFormat) return fail("unexpected format tag");
    if (j.at("version").get<int>() != kModelVersion) return fail("unsupported version");
    TreeEnsemble m;
    const auto& hp = j.at("hyperparameters");
    m.hyperparameters.num_trees = hp.at("num_trees");
    m.hyperparameters.max_leaves = hp.at("max_leaves");
    m.hyperparameters.learning_rate = hp.at("learning_rate");
    m.hyperparameters.sigma = hp.at("sigma");
    m.hyperparameters.lambda_reg = hp.at("lambda_reg");
    m.hyperparameters.min_samples_leaf = hp.at("min_samples_leaf");
    m.hyperparameters.min_child_hessian = hp.at("min_child_hessian");
    m.hyperparameters.truncation = hp.at("truncation");
    m.seed = j.at("seed").get<std::uint64_t>();
    m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    m.training_ndcg = j.value("training_ndcg", std::vector<double>{});
    for (const auto& t : j.at("trees")) {
      RegressionTree tree;
      for (const auto& n : t.at("nodes")) {
        TreeNode node;
        if (n.contains("leaf")) {
          node.value = n.at("leaf");
        } else {
          node.feature = n.at("feature");
          node.threshold = n.at("threshold");
          node.default_left = n.at("default_left");
          node.left = n.at("left");
          node.right = n.at("right");
        }
        tree.nodes.push_back(node);
      }
      const auto count = static_cast<int>(tree.nodes.size());
      if (count == 0) return fail("empty tree");
      for (int i = 0; i < count; ++i) {
        const auto& node = tree.nodes[static_cast<std::size_t>(i)];
        if (node.is_leaf()) continue;
        if (node.feature >= static_cast<int>(m.feature_names.size()))
          return fail("node refers to unknown feature index " + std::to_string(node.feature));
        // Children always follow their parent, which also rules out cycles.
        if (node.left <= i || node.right <= i || node.left >= count || node.right >= count)
          return fail("node child index out of range");
      }
      m.trees.push_back(std::move(tree));
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    return fail(e.what());
  }
}

}  // namespace pragrank
