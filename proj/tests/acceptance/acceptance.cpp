// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "pragrank/alignment.hpp"
#include "pragrank/analysis.hpp"
#include "pragrank/evaluation.hpp"
#include "pragrank/lambdarank.hpp"
#include "pragrank/ltq.hpp"
#include "pragrank/metrics.hpp"
#include "pragrank/mwe.hpp"
#include "pragrank/pipeline.hpp"
#include "pragrank/synthetic.hpp"
#include "pragrank/text.hpp"
#include "../support/ranking_data.hpp"
#include "../support/temp_dir.hpp"

using namespace pragrank;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

const std::string kFixtures = PRAGRANK_FIXTURES;
const std::string kCli = PRAGRANK_CLI;

struct Outcome {
  bool ok = true;
  std::ostringstream detail;
  std::string failures;

  void require(bool condition, const std::string& what) {
    if (!condition) {
      ok = false;
      failures += " [failed: " + what + "]";
    }
  }
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// ---------------------------------------------------------------------------

std::map<std::string, double> brute_force_pmi3(const RawCorpus& c, int order, std::size_t min_count) {
  std::map<std::string, double> uni, grams;
  double uni_total = 0, gram_total = 0;
  for (const auto& s : c.sentences) {
    for (const auto& w : s) {
      uni[w] += 1;
      uni_total += 1;
    }
    for (std::size_t i = 0; i + static_cast<std::size_t>(order) <= s.size(); ++i) {
      std::string key = s[i];
      for (int j = 1; j < order; ++j) key += " " + s[i + static_cast<std::size_t>(j)];
      grams[key] += 1;
      gram_total += 1;
    }
  }
  std::map<std::string, double> out;
  for (const auto& [key, n] : grams) {
    if (n < static_cast<double>(min_count)) continue;
    double denom = 1;
    std::istringstream words(key);
    for (std::string w; words >> w;) denom *= uni[w] / uni_total;
    const double p = n / gram_total;
    out[key] = std::log(p * p * p / denom);
  }
  return out;
}

void criterion_pmi(Outcome& o) {
  const auto a = parse_raw_corpus(text::read_file(kFixtures + "/synthetic8/raw/tr.a.txt"));
  const auto b = parse_raw_corpus(text::read_file(kFixtures + "/synthetic8/raw/tr.b.txt"));
  o.require(a.token_count() <= 10000, "fixture corpus above 10,000 tokens");
  const auto start = Clock::now();
  const auto family = count_ngrams(a);
  std::vector<std::vector<ScoredNGram>> emitted{score_ngrams(family, 2), score_ngrams(family, 3)};
  const auto extraction = extract_mwes(a, b, LanguageId("tr"));
  const double elapsed = seconds_since(start);

  double worst = 0;
  std::size_t checked = 0;
  for (const int order : {2, 3}) {
    const auto oracle = brute_force_pmi3(a, order, kDefaultMinCount);
    const auto& scored = emitted[static_cast<std::size_t>(order - 2)];
    o.require(scored.size() == oracle.size(), "emitted n-gram set differs from oracle");
    for (const auto& s : scored) {
      const auto it = oracle.find(s.ngram);
      if (it == oracle.end()) {
        o.require(false, "unknown n-gram " + s.ngram);
        continue;
      }
      worst = std::max(worst, std::abs(s.score - it->second));
      ++checked;
    }
    for (const auto& s : extraction.mwes.of_order(order)) {
      const auto it = oracle.find(s.ngram);
      o.require(it != oracle.end(), "extracted MWE missing from oracle");
      if (it != oracle.end()) worst = std::max(worst, std::abs(s.score - it->second));
    }
  }
  o.require(worst <= 1e-12, "score deviates from oracle");
  o.require(elapsed < 1.0, "runtime over 1 s");
  o.detail << checked << " n-grams from " << a.token_count() << " tokens, max |diff| " << worst << ", "
           << elapsed << " s";
}

// ---------------------------------------------------------------------------

void criterion_procrustes(Outcome& o) {
  const auto start = Clock::now();
  const std::size_t dim = 50;
  synthetic::Rng rng(2024);
  const Eigen::MatrixXd rotation = synthetic::random_rotation(dim, rng);
  EmbeddingSet source(LanguageId("xx"), dim), target(LanguageId("yy"), dim);
  SeedPairs seeds;
  for (std::size_t i = 0; i < 200; ++i) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(dim));
    for (Eigen::Index j = 0; j < v.size(); ++j) v(j) = rng.normal();
    v.normalize();
    const Eigen::VectorXd r = rotation * v;
    source.add("s" + std::to_string(i), std::span<const double>(v.data(), dim));
    target.add("t" + std::to_string(i), std::span<const double>(r.data(), dim));
    seeds.emplace_back("s" + std::to_string(i), "t" + std::to_string(i));
  }
  const auto aligned = procrustes_align(source, target, seeds);
  const double err = (aligned.W - rotation).cwiseAbs().maxCoeff();

  const auto emb = parse_embeddings(text::read_file(kFixtures + "/synthetic8/embeddings/en.vec"), LanguageId("en"));
  auto emotions = parse_emotion_lexicon(text::read_file(kFixtures + "/synthetic8/emotions.tsv"));
  BilingualLexicon identity{LanguageId("en"), LanguageId("en"), {}};
  for (const auto& w : emb.words()) identity.entries[w].insert(w);
  const auto self = esd(emb, emb, emotions, identity);
  const double elapsed = seconds_since(start);

  o.require(err <= 1e-6, "rotation not recovered");
  o.require(self.distance <= 1e-9, "ESD(l, l) above 1e-9");
  o.require(elapsed < 5.0, "runtime over 5 s");
  o.detail << "max |W - R| " << err << ", ESD(en, en) " << self.distance << " over " << self.concepts_used
           << " concepts, " << elapsed << " s";
}

// ---------------------------------------------------------------------------

Ranking ranking_of(const std::vector<std::string>& codes) {
  std::map<LanguageId, double> s;
  for (std::size_t i = 0; i < codes.size(); ++i) s[LanguageId(codes[i])] = static_cast<double>(codes.size() - i);
  return rank_by_scores(s);
}

void criterion_metrics(Outcome& o) {
  const auto truth = ranking_of({"a", "b", "c", "d", "e"});
  const auto rank_grades = relevance_grades(truth);
  const double map_truth = map_at_k(truth, truth, 3);
  const double ndcg_truth = ndcg_at_p(truth, rank_grades, 3);
  const double map = map_at_k(ranking_of({"a", "d", "b", "c", "e"}), truth, 3);
  const std::map<LanguageId, int> grades{
      {LanguageId("a"), 3}, {LanguageId("b"), 2}, {LanguageId("c"), 1}, {LanguageId("d"), 0}};
  const double ndcg = ndcg_at_p(ranking_of({"b", "a", "c", "d"}), grades, 3);
  o.require(map_truth == 1.0 && ndcg_truth == 1.0, "ground truth does not score exactly 1");
  o.require(std::abs(map - 0.805556) <= 1e-5, "MAP hand case");
  o.require(std::abs(ndcg - 0.842833) <= 1e-5, "NDCG hand case");
  o.detail.precision(6);
  o.detail << std::fixed << "truth MAP " << map_truth << " NDCG " << ndcg_truth << "; hand cases MAP " << map
           << " NDCG " << ndcg;
}

// ---------------------------------------------------------------------------

void criterion_lambdarank(Outcome& o) {
  const auto train = testing::linear_queries(30, 10, 101);
  const auto held_out = testing::linear_queries(10, 10, 202, "h");
  const Hyperparameters hp;
  o.require(hp.num_trees == 100 && hp.max_leaves == 16 && hp.learning_rate == 0.1, "default hyperparameters");
  const auto start = Clock::now();
  const auto model = train_lambdarank(train, hp);
  const double elapsed = seconds_since(start);
  double sum = 0;
  for (const auto& q : held_out)
    sum += ndcg_at_p(predict_scores(model, testing::features_of(q)), relevance_grades(testing::truth_of(q)), 3);
  const double mean = sum / static_cast<double>(held_out.size());
  o.require(mean >= 0.95, "held-out NDCG@3 below 0.95");
  o.require(elapsed <= 10.0, "training over 10 s");
  o.detail << "held-out mean NDCG@3 " << mean << ", training " << elapsed << " s";
}

// ---------------------------------------------------------------------------

void criterion_loo(Outcome& o) {
  const auto rows = features_from_csv(text::read_file(kFixtures + "/loo16/features.csv"));
  const auto zero_shot = parse_zero_shot(text::read_file(kFixtures + "/loo16/zero_shot.csv"), "sa");
  const auto langs_set = zero_shot.languages();
  const std::vector<LanguageId> langs(langs_set.begin(), langs_set.end());
  const auto dataset = make_dataset(langs, rows, zero_shot, FeatureConfig::full());
  const auto start = Clock::now();
  const auto report = loo_evaluate(dataset, FeatureConfig::langrank());
  const double elapsed = seconds_since(start);
  bool structure = report.folds.size() == 16;
  for (const auto& f : report.folds)
    structure = structure && f.training_targets.size() == 15 && f.candidates_per_training_query == 14 &&
                f.predicted.size() == 15;
  o.require(langs.size() == 16, "fixture does not have 16 languages");
  o.require(structure, "fold structure");
  o.require(report.mean_ndcg >= 0.95, "mean NDCG@3 below 0.95");
  o.require(report.mean_map >= 0.90, "mean MAP below 0.90");
  o.require(elapsed <= 60.0, "runtime over 60 s");
  o.detail << report.folds.size() << " folds, mean MAP " << report.mean_map << ", mean NDCG@3 "
           << report.mean_ndcg << ", " << elapsed << " s";
}

// ---------------------------------------------------------------------------

void criterion_znorm(Outcome& o) {
  synthetic::Rng rng(6);
  double worst_mean = 0, worst_sigma = 0;
  for (int round = 0; round < 1000; ++round) {
    std::map<LanguageId, OptReal> raws;
    const auto n = 2 + rng.below(30);
    const double scale = std::pow(10.0, rng.uniform(-6, 3));
    for (std::size_t i = 0; i < n; ++i) raws[LanguageId("l" + std::to_string(i))] = scale * rng.uniform();
    const auto z = ltq_normalize(raws);
    double mean = 0, sq = 0;
    for (const auto& [l, v] : z) mean += *v;
    mean /= static_cast<double>(n);
    for (const auto& [l, v] : z) sq += (*v - mean) * (*v - mean);
    worst_mean = std::max(worst_mean, std::abs(mean));
    worst_sigma = std::max(worst_sigma, std::abs(std::sqrt(sq / static_cast<double>(n)) - 1.0));
  }
  bool constant_ok = true;
  for (const double c : {0.0, 0.37, 1e9}) {
    std::map<LanguageId, OptReal> raws;
    for (int i = 0; i < 7; ++i) raws[LanguageId("l" + std::to_string(i))] = c;
    for (const auto& [l, v] : ltq_normalize(raws)) constant_ok = constant_ok && v && *v == 0.0;
  }
  o.require(worst_mean <= 1e-9, "mean not 0");
  o.require(worst_sigma <= 1e-9, "sigma not 1");
  o.require(constant_ok, "constant input not all zeros");
  o.detail << "1000 random sets, max |mean| " << worst_mean << ", max |sigma - 1| " << worst_sigma;
}

// ---------------------------------------------------------------------------

void criterion_network(Outcome& o) {
  PairDistances d;
  CulturalAreaMap areas;
  std::vector<LanguageId> ids;
  for (int i = 0; i < 16; ++i) {
    ids.emplace_back("b" + std::to_string(i));
    areas.areas[ids.back()] = "area" + std::to_string(i / 4);
  }
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j)
      if (i != j) d[{ids[static_cast<std::size_t>(i)], ids[static_cast<std::size_t>(j)]}] = i / 4 == j / 4 ? 0.2 : 0.8;
  const auto net = knn_network(d, 2);
  const double fraction = within_area_fraction(net, areas);

  const std::vector<double> x{0.5, 1.5, 2.0, 3.25, 7.0, 11.0};
  std::vector<double> up, down;
  for (const double v : x) {
    up.push_back(3.0 * v - 2.0);
    down.push_back(-0.5 * v + 4.0);
  }
  const auto r_up = pearson(x, up);
  const auto r_down = pearson(x, down);
  o.require(fraction == 1.0, "within-area fraction not 1.0");
  o.require(r_up && std::abs(*r_up - 1.0) <= 1e-12, "pearson +1");
  o.require(r_down && std::abs(*r_down + 1.0) <= 1e-12, "pearson -1");
  o.detail << net.edges.size() << " edges, within-area fraction " << fraction << ", r = " << (r_up ? *r_up : NAN)
           << " / " << (r_down ? *r_down : NAN);
}

// ---------------------------------------------------------------------------

// Training queries where zero-shot = ltq - 2 geo; in the test query for tr the
// baseline slots favour ja and ko, and only LTQ lifts ar.
struct Scenario {
  std::vector<std::pair<LanguageId, std::vector<PairFeatures>>> train;
  ZeroShotTable zero_shot;
  std::vector<PairFeatures> test;
};

Scenario scenario(std::uint64_t seed) {
  synthetic::Rng rng(seed);
  Scenario s;
  const auto full = FeatureConfig::full().active_slots();
  const auto record = [&](const LanguageId& tf, const LanguageId& tg, double ltq, double geo) {
    PairFeatures f;
    f.transfer = tf;
    f.target = tg;
    for (const auto slot : full) f.slots[slot] = 0.5;
    f.slots[Slot::Ltq] = ltq;
    f.slots[Slot::Geo] = geo;
    return f;
  };
  for (int t = 0; t < 20; ++t) {
    const LanguageId tg("q" + std::to_string(t));
    std::vector<PairFeatures> rows;
    for (int c = 0; c < 8; ++c) {
      const LanguageId tf("c" + std::to_string(c));
      const double ltq = rng.normal();
      const double geo = rng.uniform();
      rows.push_back(record(tf, tg, ltq, geo));
      s.zero_shot.scores[{tf, tg}] = 60 + 5 * (ltq - 2 * geo);
    }
    s.train.emplace_back(tg, std::move(rows));
  }
  const LanguageId tr("tr"), ar("ar"), ko("ko"), ja("ja");
  s.test = {record(ar, tr, 1.3, 0.8), record(ko, tr, -0.4, 0.3), record(ja, tr, -0.9, 0.2)};
  s.zero_shot.scores[{ar, tr}] = 71.0;
  s.zero_shot.scores[{ko, tr}] = 64.0;
  s.zero_shot.scores[{ja, tr}] = 60.0;
  return s;
}

Ranking scenario_ranking(const Scenario& s, const FeatureConfig& config, std::uint64_t seed) {
  std::vector<RankingQuery> queries;
  for (const auto& [tg, rows] : s.train) {
    std::vector<PairFeatures> projected;
    for (const auto& r : rows) projected.push_back(project(r, config));
    queries.push_back(make_query(tg, projected, s.zero_shot));
  }
  const auto model = train_lambdarank(queries, {}, seed);
  std::vector<PairFeatures> test;
  for (const auto& r : s.test) test.push_back(project(r, config));
  return predict_scores(model, test);
}

void criterion_scenario(Outcome& o) {
  const LanguageId tr("tr"), ar("ar");
  const auto s0 = scenario(1);
  const auto truth = ground_truth_ranking(s0.zero_shot, tr, {LanguageId("ja"), LanguageId("ko"), ar});
  o.require(truth.order.front() == ar && truth.order[1] == LanguageId("ko"), "zero-shot order");
  std::string all_orders, base_orders;
  for (const std::uint64_t seed : {1, 2, 3}) {
    const auto s = scenario(seed);
    const auto with_all = scenario_ranking(s, FeatureConfig::from_label("langrank+all"), seed);
    const auto baseline = scenario_ranking(s, FeatureConfig::langrank(), seed);
    o.require(with_all == scenario_ranking(s, FeatureConfig::from_label("langrank+all"), seed),
              "repeat run differs for seed " + std::to_string(seed));
    o.require(with_all.order.front() == ar, "+All ranker misses ar for seed " + std::to_string(seed));
    o.require(baseline.order.front() != ar, "baseline ranker picks ar for seed " + std::to_string(seed));
    all_orders += " " + with_all.order[0].code() + ">" + with_all.order[1].code() + ">" + with_all.order[2].code();
    base_orders += " " + baseline.order[0].code() + ">" + baseline.order[1].code() + ">" + baseline.order[2].code();
  }
  o.detail << "+All:" << all_orders << "; baseline:" << base_orders;
}

// ---------------------------------------------------------------------------

int run(const std::string& args, const std::string& log, const std::string& err) {
  const std::string cmd = "\"" + kCli + "\" " + args + " > \"" + log + "\" 2> \"" + err + "\"";
  return std::system(cmd.c_str());
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = text::read_file(e.path().string());
  return files;
}

// Every subcommand into `out`; stdout is kept next to the outputs, stderr
// (which names paths) goes to a scratch file. Returns false on a nonzero exit.
bool cli_session(const std::string& manifest, const fs::path& out, std::string& failure) {
  const std::string common = " --manifest \"" + manifest + "\" --out \"" + out.string() + "\"";
  const std::vector<std::pair<std::string, std::string>> steps{
      {"featurize", "featurize" + common},
      {"featurize-dep", "featurize" + common + " --task dep"},
      {"train", "train" + common + " --seed 5"},
      {"rank", "rank" + common + " --target tr"},
      {"evaluate", "evaluate" + common + " --jobs 2"},
      {"evaluate-mtvec", "evaluate" + common + " --config mtvec+all --task dep"},
      {"ablate", "ablate" + common},
      {"groups", "ablate" + common + " --suite groups"},
      {"analyze", "analyze" + common},
  };
  fs::create_directories(out);
  for (const auto& [name, args] : steps) {
    const auto log = (out / ("stdout_" + name + ".txt")).string();
    const auto err = (out.parent_path() / (out.filename().string() + "_stderr.txt")).string();
    if (run(args, log, err) != 0) {
      failure = name + ": " + text::read_file(log) + text::read_file(err);
      return false;
    }
  }
  return true;
}

void criterion_determinism(Outcome& o) {
  ::unsetenv("PRAGRANK_CACHE");
  testing::TempDir dir("acceptance");
  const auto manifest = kFixtures + "/synthetic8/manifest.toml";
  std::string failure;
  const bool first = cli_session(manifest, dir.path() / "a", failure);
  const bool second = first && cli_session(manifest, dir.path() / "b", failure);
  o.require(first && second, "CLI failed: " + failure);
  if (!first || !second) return;
  const auto a = snapshot(dir.path() / "a");
  const auto b = snapshot(dir.path() / "b");
  std::size_t differing = 0;
  for (const auto& [name, bytes] : a) {
    const auto it = b.find(name);
    if (it == b.end() || it->second != bytes) {
      ++differing;
      o.require(false, "differs: " + name);
    }
  }
  o.require(a.size() == b.size(), "file sets differ");

  // Warm-cache rerun into the first directory.
  const bool third = cli_session(manifest, dir.path() / "a", failure);
  o.require(third, "CLI failed on rerun: " + failure);
  if (third) o.require(snapshot(dir.path() / "a") == a, "warm-cache rerun changed outputs");

  const auto model_text = text::read_file((dir.path() / "a" / "model.json").string());
  const auto model = ensemble_from_json(model_text);
  o.require(ensemble_to_json(model) == model_text, "model JSON does not round-trip");
  const auto rows = features_from_csv(text::read_file((dir.path() / "a" / "features_sa.csv").string()));
  std::vector<PairFeatures> candidates;
  for (const auto& r : rows)
    if (r.target == LanguageId("tr")) candidates.push_back(r);
  const auto reloaded = predict_scores(model, candidates);
  const auto reparsed = predict_scores(ensemble_from_json(ensemble_to_json(model)), candidates);
  o.require(reloaded == reparsed, "predictions differ after reload");
  std::string expected = "rank,language,score\n";
  for (std::size_t i = 0; i < reloaded.size(); ++i)
    expected += std::to_string(i + 1) + "," + reloaded.order[i].code() + "," +
                text::format_double(reloaded.scores.at(reloaded.order[i])) + "\n";
  o.require(text::read_file((dir.path() / "a" / "ranking_tr.csv").string()) == expected,
            "CLI ranking differs from reloaded model");
  o.detail << a.size() << " output files compared, " << differing << " differ; model reload ranks "
           << reloaded.order.front().code() << " first";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"PMI3 scores equal a brute-force oracle", criterion_pmi},
      {"Procrustes recovers a rotation; ESD(l, l) = 0", criterion_procrustes},
      {"metric identities and hand cases", criterion_metrics},
      {"LambdaRank learns a linear utility", criterion_lambdarank},
      {"leave-one-out structure and fixture quality", criterion_loo},
      {"LTQ z-normalization", criterion_znorm},
      {"network cohesion and pearson", criterion_network},
      {"ar/ko/ja -> tr scenario replay", criterion_scenario},
      {"CLI determinism and model round-trip", criterion_determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.ok = false;
      o.failures += " [exception: " + std::string(e.what()) + "]";
    }
    failed += o.ok ? 0 : 1;
    std::cout << (o.ok ? "PASS" : "FAIL") << " criterion " << (i + 1) << ": " << criteria[i].first << " -- "
              << o.detail.str() << o.failures << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
