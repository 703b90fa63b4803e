#include "pragrank/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace pragrank {

double map_at_k(const Ranking& predicted, const Ranking& truth, std::size_t k) {
  const std::set<LanguageId> a(predicted.order.begin(), predicted.order.end());
  const std::set<LanguageId> b(truth.order.begin(), truth.order.end());
  if (a != b || a.size() != predicted.order.size())
    throw ValidationError("map_at_k: predicted and truth rankings cover different candidates");
  if (k == 0 || k > truth.order.size())
    throw ValidationError("map_at_k: k must be in [1, number of candidates]");
  const std::set<LanguageId> relevant(truth.order.begin(), truth.order.begin() + static_cast<std::ptrdiff_t>(k));
  double sum = 0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < predicted.order.size(); ++i) {
    if (relevant.count(predicted.order[i])) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(i + 1);
    }
  }
  return sum / static_cast<double>(k);
}

double dcg_at_p(const std::vector<int>& grades, std::size_t p) {
  double dcg = 0;
  for (std::size_t i = 0; i < std::min(p, grades.size()); ++i)
    dcg += (std::exp2(static_cast<double>(grades[i])) - 1.0) / std::log2(static_cast<double>(i) + 2.0);
  return dcg;
}

double ndcg_at_p(const Ranking& predicted, const std::map<LanguageId, int>& grades, std::size_t p) {
  if (p < 1) throw ValidationError("ndcg_at_p: p must be at least 1");
  std::vector<int> in_order;
  for (const auto& lang : predicted.order) {
    const auto it = grades.find(lang);
    if (it == grades.end()) throw ValidationError("ndcg_at_p: no grade for '" + lang.code() + "'");
    in_order.push_back(it->second);
  }
  std::vector<int> ideal = in_order;
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  const double best = dcg_at_p(ideal, p);
  if (best == 0) return 1.0;
  return dcg_at_p(in_order, p) / best;
}

}  // namespace pragrank
