#include "pragrank/ranking.hpp"

#include <algorithm>

namespace pragrank {

std::size_t Ranking::position(const LanguageId& lang) const {
  const auto it = std::find(order.begin(), order.end(), lang);
  if (it == order.end()) throw ValidationError("language '" + lang.code() + "' not in ranking");
  return static_cast<std::size_t>(it - order.begin());
}

Ranking rank_by_scores(const std::map<LanguageId, double>& scores) {
  Ranking r;
  r.scores = scores;
  for (const auto& [lang, score] : scores) r.order.push_back(lang);
  // The map iterates in ascending id order, so a stable sort keeps the tie-break.
  std::stable_sort(r.order.begin(), r.order.end(), [&](const LanguageId& a, const LanguageId& b) {
    return scores.at(a) > scores.at(b);
  });
  return r;
}

Ranking ground_truth_ranking(const ZeroShotTable& table, const LanguageId& target,
                             const std::vector<LanguageId>& candidates) {
  std::map<LanguageId, double> scores;
  for (const auto& c : candidates) {
    const auto z = table.lookup(c, target);
    if (!z) throw ValidationError("no zero-shot score for " + to_string(LanguagePair{c, target}));
    scores[c] = *z;
  }
  return rank_by_scores(scores);
}

std::map<LanguageId, int> relevance_grades(const Ranking& truth) {
  std::map<LanguageId, int> grades;
  for (std::size_t i = 0; i < truth.order.size(); ++i)
    grades[truth.order[i]] = std::max(0, kTopGrade - static_cast<int>(i));
  return grades;
}

}  // namespace pragrank
