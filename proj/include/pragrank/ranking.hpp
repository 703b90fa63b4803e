#pragma once

#include <map>
#include <vector>

#include "pragrank/common.hpp"
#include "pragrank/ingest.hpp"

namespace pragrank {

/// Candidate transfer languages ordered best first.
struct Ranking {
  std::vector<LanguageId> order;
  std::map<LanguageId, double> scores;

  std::size_t size() const { return order.size(); }
  /// 0-based position; throws if absent.
  std::size_t position(const LanguageId& lang) const;
  friend bool operator==(const Ranking&, const Ranking&) = default;
};

/// Descending score, ascending LanguageId on ties.
Ranking rank_by_scores(const std::map<LanguageId, double>& scores);

/// Sorts candidates by their zero-shot score for `target`. Throws
/// ValidationError naming the first pair without a score.
Ranking ground_truth_ranking(const ZeroShotTable& table, const LanguageId& target,
                             const std::vector<LanguageId>& candidates);

inline constexpr int kTopGrade = 10;

/// grade = max(0, 10 - rank0).
std::map<LanguageId, int> relevance_grades(const Ranking& truth);

}  // namespace pragrank
