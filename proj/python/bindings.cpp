#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pragrank/alignment.hpp"
#include "pragrank/analysis.hpp"
#include "pragrank/context_level.hpp"
#include "pragrank/evaluation.hpp"
#include "pragrank/lambdarank.hpp"
#include "pragrank/ltq.hpp"
#include "pragrank/metrics.hpp"
#include "pragrank/mwe.hpp"
#include "pragrank/pipeline.hpp"

namespace py = pybind11;
using namespace pragrank;

namespace {

using Scores = std::map<std::string, double>;

Ranking ranking_from(const std::vector<std::string>& order) {
  std::map<LanguageId, double> scores;
  for (std::size_t i = 0; i < order.size(); ++i) scores[LanguageId(order[i])] = static_cast<double>(order.size() - i);
  auto r = rank_by_scores(scores);
  if (r.size() != order.size()) throw ValidationError("duplicate language in ranking");
  return r;
}

std::vector<std::pair<std::string, double>> ranked_pairs(const Ranking& r) {
  std::vector<std::pair<std::string, double>> out;
  for (const auto& l : r.order) out.emplace_back(l.code(), r.scores.at(l));
  return out;
}

Hyperparameters hyperparameters(int trees, int leaves, double learning_rate) {
  Hyperparameters hp;
  hp.num_trees = trees;
  hp.max_leaves = leaves;
  hp.learning_rate = learning_rate;
  return hp;
}

RankingDataset dataset_from(const std::string& features_csv, const std::string& zero_shot_csv,
                            const std::string& config) {
  const auto rows = features_from_csv(features_csv, "features");
  const auto z = parse_zero_shot(zero_shot_csv, "", "zero_shot");
  const auto langs = z.languages();
  return make_dataset({langs.begin(), langs.end()}, rows, z, FeatureConfig::from_label(config));
}

py::dict stats_dict(const CorpusStats& s) {
  py::dict d;
  d["language"] = s.language.code();
  d["tokens"] = s.tokens;
  d["pron_tokens"] = s.pron_tokens;
  d["verb_tokens"] = s.verb_tokens;
  d["ptr"] = s.ptr;
  d["vtr"] = s.vtr;
  d["ttr"] = s.ttr;
  return d;
}

}  // namespace

PYBIND11_MODULE(_pragrank, m) {
  m.doc() = "Transfer-language ranking with pragmatic features";

  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);

  m.def("corpus_stats", [](const std::string& conllu, const std::string& language) {
    return stats_dict(corpus_stats(parse_conllu(conllu, "conllu"), LanguageId(language)));
  }, py::arg("conllu"), py::arg("language") = "");

  m.def("lcr", [](const std::string& transfer_conllu, const std::string& target_conllu) {
    const auto r = lcr(corpus_stats(parse_conllu(transfer_conllu)), corpus_stats(parse_conllu(target_conllu)));
    return std::make_pair(r.pron, r.verb);
  }, py::arg("transfer_conllu"), py::arg("target_conllu"), "(pron, verb) ratios; None when undefined");

  m.def("pmi3_scores", [](const std::string& raw_text, int order, std::size_t min_count) {
    std::vector<std::pair<std::string, double>> out;
    for (const auto& s : score_ngrams(count_ngrams(parse_raw_corpus(raw_text)), order, min_count))
      out.emplace_back(s.ngram, s.score);
    return out;
  }, py::arg("raw_text"), py::arg("order") = 2, py::arg("min_count") = kDefaultMinCount);

  m.def("extract_mwes", [](const std::string& raw_a, const std::string& raw_b, std::size_t k) {
    MweOptions o;
    o.k = k;
    const auto r = extract_mwes(parse_raw_corpus(raw_a), parse_raw_corpus(raw_b), {}, o);
    py::dict d;
    std::vector<std::string> bi, tri;
    for (const auto& s : r.mwes.bigrams) bi.push_back(s.ngram);
    for (const auto& s : r.mwes.trigrams) tri.push_back(s.ngram);
    d["bigrams"] = bi;
    d["trigrams"] = tri;
    d["warnings"] = r.warnings;
    return d;
  }, py::arg("raw_a"), py::arg("raw_b"), py::arg("k") = kDefaultMweCount);

  m.def("ltq_normalize", [](const std::map<std::string, std::optional<double>>& raws) {
    std::map<LanguageId, OptReal> in;
    for (const auto& [k, v] : raws) in[LanguageId(k)] = v;
    std::map<std::string, std::optional<double>> out;
    for (const auto& [k, v] : ltq_normalize(in)) out[k.code()] = v;
    return out;
  }, py::arg("raws"));

  m.def("procrustes", [](const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
    if (x.rows() != y.rows() || x.cols() != y.cols()) throw ValidationError("procrustes: shape mismatch");
    const auto dim = static_cast<std::size_t>(x.cols());
    EmbeddingSet a(LanguageId("src"), dim), b(LanguageId("tgt"), dim);
    SeedPairs seeds;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const Eigen::VectorXd u = x.row(i).transpose(), v = y.row(i).transpose();
      const auto w = std::to_string(i);
      a.add(w, std::span<const double>(u.data(), dim));
      b.add(w, std::span<const double>(v.data(), dim));
      seeds.emplace_back(w, w);
    }
    return procrustes_align(a, b, seeds).W;
  }, py::arg("x"), py::arg("y"), "Orthogonal W with W x_i ~ y_i for row-paired matrices (rows are unit-normalized)");

  m.def("map_at_k", [](const std::vector<std::string>& predicted, const std::vector<std::string>& truth,
                       std::size_t k) { return map_at_k(ranking_from(predicted), ranking_from(truth), k); },
        py::arg("predicted"), py::arg("truth"), py::arg("k") = kMapK);

  m.def("ndcg_at_p", [](const std::vector<std::string>& predicted, const std::map<std::string, int>& grades,
                        std::size_t p) {
    std::map<LanguageId, int> g;
    for (const auto& [k, v] : grades) g[LanguageId(k)] = v;
    return ndcg_at_p(ranking_from(predicted), g, p);
  }, py::arg("predicted"), py::arg("grades"), py::arg("p") = kNdcgP);

  m.def("relevance_grades", [](const std::vector<std::string>& truth) {
    std::map<std::string, int> out;
    for (const auto& [k, v] : relevance_grades(ranking_from(truth))) out[k.code()] = v;
    return out;
  }, py::arg("truth"));

  m.def("train", [](const std::string& features_csv, const std::string& zero_shot_csv, const std::string& config,
                    int trees, int leaves, double learning_rate, std::uint64_t seed) {
    return ensemble_to_json(train_all(dataset_from(features_csv, zero_shot_csv, config),
                                      hyperparameters(trees, leaves, learning_rate), seed));
  }, py::arg("features_csv"), py::arg("zero_shot_csv"), py::arg("config") = "langrank+all", py::arg("trees") = 100,
        py::arg("leaves") = 16, py::arg("learning_rate") = 0.1, py::arg("seed") = 0, "Returns the model as JSON text");

  m.def("rank", [](const std::string& model_json, const std::string& features_csv, const std::string& target) {
    const LanguageId tg(target);
    std::vector<PairFeatures> candidates;
    for (auto& r : features_from_csv(features_csv, "features"))
      if (r.target == tg && r.transfer != tg) candidates.push_back(std::move(r));
    return ranked_pairs(predict_scores(ensemble_from_json(model_json, "model"), candidates));
  }, py::arg("model_json"), py::arg("features_csv"), py::arg("target"));

  m.def("evaluate", [](const std::string& features_csv, const std::string& zero_shot_csv, const std::string& config,
                       int trees, int leaves, double learning_rate, std::uint64_t seed, unsigned jobs) {
    EvalOptions o;
    o.hyperparameters = hyperparameters(trees, leaves, learning_rate);
    o.seed = seed;
    o.jobs = jobs;
    const auto d = dataset_from(features_csv, zero_shot_csv, config);
    py::gil_scoped_release release;
    return report_to_json(loo_evaluate(d, FeatureConfig::from_label(config), o));
  }, py::arg("features_csv"), py::arg("zero_shot_csv"), py::arg("config") = "langrank+all", py::arg("trees") = 100,
        py::arg("leaves") = 16, py::arg("learning_rate") = 0.1, py::arg("seed") = 0, py::arg("jobs") = 1,
        "Leave-one-out report as JSON text");

  m.def("knn_edges", [](const std::map<std::pair<std::string, std::string>, double>& distances, std::size_t k) {
    PairDistances d;
    for (const auto& [p, v] : distances) d[{LanguageId(p.first), LanguageId(p.second)}] = v;
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& [a, b] : knn_network(d, k).edges) out.emplace_back(a.code(), b.code());
    return out;
  }, py::arg("distances"), py::arg("k") = 2, "Undirected k-NN edges from directed pair distances");

  m.def("within_area_fraction", [](const std::vector<std::pair<std::string, std::string>>& edges,
                                   const std::map<std::string, std::string>& areas) {
    LanguageNetwork net;
    for (const auto& [a, b] : edges) {
      LanguageId x(a), y(b);
      net.nodes.insert(x);
      net.nodes.insert(y);
      net.edges.insert(x < y ? std::make_pair(x, y) : std::make_pair(y, x));
    }
    CulturalAreaMap m;
    for (const auto& [k, v] : areas) m.areas[LanguageId(k)] = v;
    return within_area_fraction(net, m);
  }, py::arg("edges"), py::arg("areas"));

  m.def("pearson", &pearson, py::arg("x"), py::arg("y"));

  m.def("featurize", [](const std::string& manifest, const std::string& config, const std::string& task,
                        unsigned jobs, std::optional<std::string> cache_dir) {
    const auto mf = load_manifest(manifest);
    PipelineOptions o;
    o.task = task;
    o.jobs = jobs;
    o.cache_dir = cache_dir;
    const auto cfg = config.empty() ? superset_config(mf) : FeatureConfig::from_label(config);
    FeaturizeResult r;
    {
      py::gil_scoped_release release;
      r = featurize(mf, cfg, o);
    }
    return std::make_pair(features_to_csv(r.rows), r.warnings);
  }, py::arg("manifest"), py::arg("config") = "", py::arg("task") = "sa", py::arg("jobs") = 1,
        py::arg("cache_dir") = py::none(), "Returns (features CSV text, warnings)");
}
