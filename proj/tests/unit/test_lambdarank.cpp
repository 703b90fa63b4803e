#include <doctest.h>

#include <cmath>
#include <numeric>

#include "pragrank/lambdarank.hpp"
#include "pragrank/metrics.hpp"
#include "../support/ranking_data.hpp"

using namespace pragrank;
using pragrank::testing::features_of;
using pragrank::testing::linear_queries;
using pragrank::testing::truth_of;

namespace {

double mean_ndcg(const TreeEnsemble& model, const std::vector<RankingQuery>& queries) {
  double sum = 0;
  for (const auto& q : queries)
    sum += ndcg_at_p(predict_scores(model, features_of(q)), relevance_grades(truth_of(q)), 3);
  return sum / static_cast<double>(queries.size());
}

}  // namespace

TEST_CASE("lambda gradients push the better item up") {
  Hyperparameters hp;
  const std::vector<int> rel{2, 0};
  const std::vector<double> s{0.0, 0.0};
  const auto g = lambda_gradients(rel, s, hp);
  CHECK(g.gradients[0] < 0);
  CHECK(g.gradients[1] > 0);
  CHECK(g.gradients[0] == doctest::Approx(-g.gradients[1]));
  CHECK(g.hessians[0] > 0);

  // Swapping the inputs swaps the outputs.
  const std::vector<int> rel2{0, 2};
  const auto h = lambda_gradients(rel2, s, hp);
  CHECK(h.gradients[0] == g.gradients[1]);
  CHECK(h.gradients[1] == g.gradients[0]);

  // A correctly ordered pair with a wide margin gets a small push.
  const std::vector<double> wide{10.0, -10.0};
  CHECK(std::abs(lambda_gradients(rel, wide, hp).gradients[0]) < 1e-6);
}

TEST_CASE("lambda gradients match the pairwise formula") {
  Hyperparameters hp;
  hp.truncation = 3;
  const std::vector<int> rel{3, 1, 2};
  const std::vector<double> s{0.2, 0.5, -0.1};
  const auto g = lambda_gradients(rel, s, hp);
  // Current order by score: 1, 0, 2 -> positions 1, 0, 2.
  const int pos[3] = {1, 0, 2};
  const auto gain = [](int r) { return std::pow(2.0, r) - 1; };
  const auto disc = [](int p) { return 1.0 / std::log2(p + 2.0); };
  const double ideal = gain(3) * disc(0) + gain(2) * disc(1) + gain(1) * disc(2);
  std::vector<double> expect(3, 0.0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (rel[static_cast<std::size_t>(i)] <= rel[static_cast<std::size_t>(j)]) continue;
      const double delta = std::abs((gain(rel[static_cast<std::size_t>(i)]) - gain(rel[static_cast<std::size_t>(j)])) *
                                    (disc(pos[i]) - disc(pos[j]))) / ideal;
      const double rho = 1.0 / (1.0 + std::exp(s[static_cast<std::size_t>(i)] - s[static_cast<std::size_t>(j)]));
      expect[static_cast<std::size_t>(i)] -= rho * delta;
      expect[static_cast<std::size_t>(j)] += rho * delta;
    }
  for (std::size_t i = 0; i < 3; ++i) CHECK(g.gradients[i] == doctest::Approx(expect[i]).epsilon(1e-12));
}

TEST_CASE("training is deterministic") {
  const auto q = linear_queries(10, 8, 3);
  const auto a = train_lambdarank(q, {}, 5);
  const auto b = train_lambdarank(q, {}, 5);
  CHECK(a == b);
  CHECK(ensemble_to_json(a) == ensemble_to_json(b));
  CHECK(a.seed == 5);
}

TEST_CASE("training improves NDCG and generalizes") {
  const auto train = linear_queries(30, 10, 1);
  const auto test = linear_queries(10, 10, 2, "h");
  const auto model = train_lambdarank(train);
  REQUIRE(model.training_ndcg.size() == 100);
  CHECK(model.training_ndcg.back() > model.training_ndcg.front());
  CHECK(model.training_ndcg.back() >= 0.95);
  // Well above the roughly 0.5 a random order scores.
  CHECK(mean_ndcg(model, test) >= 0.85);
  for (const auto& t : model.trees) CHECK(t.leaf_count() <= 16);
}

TEST_CASE("degenerate labels and bad inputs") {
  auto q = linear_queries(2, 4, 4);
  for (auto& query : q)
    for (auto& c : query.candidates) c.relevance = 3;
  CHECK_THROWS_WITH_AS(train_lambdarank(q), doctest::Contains("degenerate labels"), ValidationError);
  CHECK_THROWS_AS(train_lambdarank({}), ValidationError);

  auto mixed = linear_queries(2, 4, 4);
  mixed[1].candidates[0].features.slots.erase(Slot::TfSize);
  CHECK_THROWS_AS(train_lambdarank(mixed), ValidationError);

  Hyperparameters bad;
  bad.max_leaves = 1;
  CHECK_THROWS_AS(train_lambdarank(linear_queries(2, 4, 4), bad), ValidationError);
}

TEST_CASE("an empty ensemble ranks by language id") {
  Hyperparameters hp;
  hp.num_trees = 0;
  const auto q = linear_queries(3, 5, 6);
  const auto model = train_lambdarank(q, hp);
  CHECK(model.trees.empty());
  const auto r = predict_scores(model, features_of(q[0]));
  for (std::size_t i = 0; i < r.size(); ++i) CHECK(r.order[i] == LanguageId("c" + std::to_string(i)));
}

TEST_CASE("a stump splits on the only informative feature") {
  std::vector<RankingQuery> queries;
  for (int t = 0; t < 6; ++t) {
    const LanguageId target("t" + std::to_string(t));
    ZeroShotTable z;
    std::vector<PairFeatures> rows;
    for (int c = 0; c < 6; ++c) {
      PairFeatures f;
      f.transfer = LanguageId("c" + std::to_string(c));
      f.target = target;
      const double ltq = c < 3 ? 1.0 + c : -1.0 - c;
      f.slots[Slot::Ltq] = ltq;
      f.slots[Slot::Geo] = 0.5;
      z.scores[{f.transfer, target}] = ltq;
      rows.push_back(f);
    }
    queries.push_back(make_query(target, rows, z));
  }
  Hyperparameters hp;
  hp.num_trees = 1;
  hp.max_leaves = 2;
  hp.min_samples_leaf = 3;
  const auto model = train_lambdarank(queries, hp);
  REQUIRE(model.trees.size() == 1);
  const auto& root = model.trees[0].nodes[0];
  REQUIRE_FALSE(root.is_leaf());
  CHECK(model.feature_names[static_cast<std::size_t>(root.feature)] == "ltq");
}

TEST_CASE("missing values follow a default direction") {
  auto q = linear_queries(10, 8, 9);
  for (auto& query : q) query.candidates[0].features.slots[Slot::TfSize] = std::nullopt;
  const auto model = train_lambdarank(q);
  const auto r = predict_scores(model, features_of(q[0]));
  CHECK(r.size() == 8);
  for (const auto& [lang, s] : r.scores) CHECK(std::isfinite(s));
}

TEST_CASE("model JSON round-trips bit-exactly") {
  const auto model = train_lambdarank(linear_queries(8, 6, 10), {}, 77);
  const auto text = ensemble_to_json(model);
  const auto back = ensemble_from_json(text);
  CHECK(back == model);
  CHECK(ensemble_to_json(back) == text);
  const auto q = linear_queries(1, 6, 11, "z");
  CHECK(predict_scores(back, features_of(q[0])) == predict_scores(model, features_of(q[0])));
  CHECK_THROWS_AS(ensemble_from_json("{\"trees\": 3}"), FormatError);
  CHECK_THROWS_AS(ensemble_from_json("not json"), FormatError);
}

TEST_CASE("predictions ignore extra slots but need model slots") {
  const auto q = linear_queries(6, 6, 12);
  const auto model = train_lambdarank(q);
  auto rows = features_of(q[0]);
  auto extra = rows;
  for (auto& r : extra) r.slots[Slot::Esd] = 123.0;
  CHECK(predict_scores(model, extra) == predict_scores(model, rows));
  rows[0].slots.erase(Slot::Geo);
  CHECK_THROWS_AS(predict_scores(model, rows), ValidationError);
}

TEST_CASE("training NDCG never drops on a separable fixture") {
  const auto model = train_lambdarank(linear_queries(30, 10, 13));
  for (std::size_t i = 1; i < model.training_ndcg.size(); ++i)
    CHECK(model.training_ndcg[i] >= model.training_ndcg[i - 1] - 1e-12);
}
