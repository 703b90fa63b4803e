#pragma once

#include <map>

#include "pragrank/ranking.hpp"

namespace pragrank {

/// Average precision with the truth's top-k as the relevant set:
/// (1/k) * sum over predicted positions i holding a relevant language of
/// (relevant seen so far) / i.
double map_at_k(const Ranking& predicted, const Ranking& truth, std::size_t k = 3);

/// NDCG@p with gains 2^grade - 1 and log2(i+1) discounts. A query whose
/// ideal DCG is zero scores 1.
double ndcg_at_p(const Ranking& predicted, const std::map<LanguageId, int>& grades, std::size_t p = 3);

/// DCG@p of a grade sequence given in predicted order.
double dcg_at_p(const std::vector<int>& grades_in_order, std::size_t p);

}  // namespace pragrank
