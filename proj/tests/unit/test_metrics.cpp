#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "pragrank/metrics.hpp"
#include "pragrank/synthetic.hpp"

using namespace pragrank;

namespace {

Ranking ranking(const std::vector<std::string>& codes) {
  std::map<LanguageId, double> scores;
  for (std::size_t i = 0; i < codes.size(); ++i) scores[LanguageId(codes[i])] = static_cast<double>(codes.size() - i);
  auto r = rank_by_scores(scores);
  return r;
}

// Straight from the definitions, with no shared code.
double map_oracle(const std::vector<std::string>& predicted, const std::vector<std::string>& truth, std::size_t k) {
  const std::set<std::string> relevant(truth.begin(), truth.begin() + static_cast<std::ptrdiff_t>(k));
  double sum = 0;
  std::size_t seen = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i)
    if (relevant.count(predicted[i])) sum += static_cast<double>(++seen) / static_cast<double>(i + 1);
  return sum / static_cast<double>(k);
}

}  // namespace

TEST_CASE("MAP@3 worked examples") {
  const auto truth = ranking({"A", "B", "C", "D", "E"});
  CHECK(map_at_k(ranking({"A", "D", "B", "C", "E"}), truth, 3) == doctest::Approx(0.805556).epsilon(1e-6));
  CHECK(map_at_k(ranking({"D", "E", "A", "B", "C"}), truth, 3) == doctest::Approx(0.477778).epsilon(1e-6));
  CHECK(map_at_k(truth, truth, 3) == 1.0);
}

TEST_CASE("NDCG@3 worked example") {
  const std::map<LanguageId, int> grades{
      {LanguageId("a"), 3}, {LanguageId("b"), 2}, {LanguageId("c"), 1}, {LanguageId("d"), 0}};
  const double v = ndcg_at_p(ranking({"b", "a", "c", "d"}), grades, 3);
  const double dcg = 3.0 + 7.0 / std::log2(3.0) + 0.5;
  const double ideal = 7.0 + 3.0 / std::log2(3.0) + 0.5;
  CHECK(dcg == doctest::Approx(7.916508).epsilon(1e-6));
  CHECK(ideal == doctest::Approx(9.392789).epsilon(1e-6));
  CHECK(v == doctest::Approx(dcg / ideal).epsilon(1e-12));
  CHECK(std::abs(v - 0.842833) <= 1e-5);
  CHECK(ndcg_at_p(ranking({"a", "b", "c", "d"}), grades, 3) == 1.0);
}

TEST_CASE("rank-derived grades") {
  const auto truth = ranking({"A", "B", "C", "D", "E"});
  const auto grades = relevance_grades(truth);
  CHECK(grades.at(LanguageId("A")) == 10);
  CHECK(grades.at(LanguageId("E")) == 6);
  CHECK(ndcg_at_p(truth, grades, 3) == 1.0);
  CHECK(ndcg_at_p(ranking({"B", "A", "C", "D", "E"}), grades, 3) < 1.0);
}

TEST_CASE("all-zero grades score 1") {
  std::map<LanguageId, int> zero{{LanguageId("a"), 0}, {LanguageId("b"), 0}};
  CHECK(ndcg_at_p(ranking({"b", "a"}), zero, 3) == 1.0);
}

TEST_CASE("grades clamp at zero") {
  std::vector<std::string> codes;
  for (int i = 0; i < 14; ++i) codes.push_back("l" + std::string(1, static_cast<char>('a' + i)));
  const auto g = relevance_grades(ranking(codes));
  CHECK(g.at(LanguageId("la")) == 10);
  CHECK(g.at(LanguageId("lb")) == 9);
  CHECK(g.at(LanguageId("lc")) == 8);
  CHECK(g.at(LanguageId("lk")) == 0);
  CHECK(g.at(LanguageId("ln")) == 0);
}

TEST_CASE("mismatched candidate sets are errors") {
  CHECK_THROWS_AS(map_at_k(ranking({"a", "b", "c"}), ranking({"a", "b", "d"}), 3), ValidationError);
  CHECK_THROWS_AS(ndcg_at_p(ranking({"a", "b"}), {{LanguageId("a"), 1}}, 3), ValidationError);
}

TEST_CASE("ground truth ordering") {
  ZeroShotTable t;
  const LanguageId tr("tr"), ar("ar"), ko("ko"), ja("ja");
  t.scores[{ar, tr}] = 71.0;
  t.scores[{ko, tr}] = 64.0;
  t.scores[{ja, tr}] = 60.0;
  const auto truth = ground_truth_ranking(t, tr, {ja, ko, ar});
  CHECK(truth.order == std::vector<LanguageId>{ar, ko, ja});
  CHECK_THROWS_AS(ground_truth_ranking(t, tr, {ja, LanguageId("de")}), ValidationError);
}

TEST_CASE("score ties break by language id") {
  const auto r = rank_by_scores({{LanguageId("zz"), 1.0}, {LanguageId("aa"), 1.0}, {LanguageId("mm"), 2.0}});
  CHECK(r.order == std::vector<LanguageId>{LanguageId("mm"), LanguageId("aa"), LanguageId("zz")});
  CHECK(r.position(LanguageId("zz")) == 2);
}

TEST_CASE("metrics agree with definition oracles on random permutations") {
  synthetic::Rng rng(12);
  for (int round = 0; round < 200; ++round) {
    const auto n = 3 + rng.below(10);
    std::vector<std::string> truth;
    for (std::size_t i = 0; i < n; ++i) truth.push_back("x" + std::to_string(i));
    auto predicted = truth;
    for (std::size_t i = n - 1; i > 0; --i) std::swap(predicted[i], predicted[rng.below(i + 1)]);
    const auto t = ranking(truth);
    const auto p = ranking(predicted);
    const double m = map_at_k(p, t, 3);
    CHECK(std::abs(m - map_oracle(predicted, truth, 3)) <= 1e-12);
    CHECK(m >= 0.0);
    CHECK(m <= 1.0);

    const auto grades = relevance_grades(t);
    double dcg = 0, ideal = 0;
    for (std::size_t i = 0; i < 3; ++i) {
      dcg += (std::pow(2.0, grades.at(LanguageId(predicted[i]))) - 1) / std::log2(static_cast<double>(i) + 2);
      ideal += (std::pow(2.0, grades.at(LanguageId(truth[i]))) - 1) / std::log2(static_cast<double>(i) + 2);
    }
    CHECK(std::abs(ndcg_at_p(p, grades, 3) - dcg / ideal) <= 1e-12);
  }
}
