#include "pragrank/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "pragrank/text.hpp"

namespace pragrank {

PairDistances pair_distances(const DistanceTable& table, const std::set<LanguageId>& nodes) {
  PairDistances out;
  for (const auto& [key, value] : table.values) {
    const auto& [a, b] = key;
    if (a == b) continue;
    if (!nodes.empty() && (!nodes.count(a) || !nodes.count(b))) continue;
    out[{a, b}] = value;
    out[{b, a}] = value;
  }
  return out;
}

LanguageNetwork knn_network(const PairDistances& distances, std::size_t k) {
  LanguageNetwork net;
  for (const auto& [pair, d] : distances) {
    if (pair.transfer == pair.target) continue;
    net.nodes.insert(pair.transfer);
    net.nodes.insert(pair.target);
  }
  if (k == 0) throw ValidationError("knn_network: k must be positive");
  if (k >= net.nodes.size())
    throw ValidationError("knn_network: k=" + std::to_string(k) + " needs more than " + std::to_string(k) +
                          " nodes, got " + std::to_string(net.nodes.size()));
  for (const auto& a : net.nodes) {
    std::vector<std::pair<double, LanguageId>> near;
    for (const auto& b : net.nodes) {
      if (a == b) continue;
      const auto it = distances.find({a, b});
      if (it == distances.end()) throw ValidationError("knn_network: missing distance for " + to_string({a, b}));
      near.emplace_back(it->second, b);
    }
    std::sort(near.begin(), near.end());
    for (std::size_t i = 0; i < k; ++i) {
      const auto& b = near[i].second;
      net.edges.insert(a < b ? std::pair{a, b} : std::pair{b, a});
    }
  }
  return net;
}

double within_area_fraction(const LanguageNetwork& network, const CulturalAreaMap& areas) {
  for (const auto& n : network.nodes)
    if (!areas.areas.count(n)) throw ValidationError("within_area_fraction: no area for '" + n.code() + "'");
  if (network.edges.empty()) throw ValidationError("within_area_fraction: network has no edges");
  std::size_t within = 0;
  for (const auto& [a, b] : network.edges) {
    const auto ia = areas.areas.find(a), ib = areas.areas.find(b);
    if (ia == areas.areas.end() || ib == areas.areas.end())
      throw ValidationError("within_area_fraction: edge endpoint without area");
    if (ia->second == ib->second) ++within;
  }
  return static_cast<double>(within) / static_cast<double>(network.edges.size());
}

OptReal pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw ValidationError("pearson: length mismatch");
  if (x.size() < 3) throw ValidationError("pearson: need at least 3 values");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0 || syy == 0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

GoldOverlap mwe_gold_overlap(const MweList& mwes, const std::vector<std::string>& gold) {
  // Every contiguous sub-sequence of every gold phrase.
  std::set<std::string> covered;
  for (const auto& phrase : gold) {
    const auto words = text::split_whitespace(text::to_lower(phrase));
    for (std::size_t i = 0; i < words.size(); ++i) {
      std::string s;
      for (std::size_t j = i; j < words.size(); ++j) {
        if (j > i) s += ' ';
        s += words[j];
        covered.insert(s);
      }
    }
  }
  const auto count = [&](const std::vector<ScoredNGram>& list, std::size_t& hits) {
    hits = 0;
    for (const auto& m : list)
      if (covered.count(text::join(text::split_whitespace(text::to_lower(m.ngram)), " "))) ++hits;
    return list.empty() ? 0.0 : 100.0 * static_cast<double>(hits) / static_cast<double>(list.size());
  };
  GoldOverlap out;
  out.bigram_pct = count(mwes.bigrams, out.bigrams_in_gold);
  out.trigram_pct = count(mwes.trigrams, out.trigrams_in_gold);
  return out;
}

OptReal ltq_gold_correlation(const std::map<LanguageId, double>& ltq_pmi,
                             const std::map<LanguageId, double>& ltq_gold) {
  std::vector<double> x, y;
  for (const auto& [lang, v] : ltq_pmi) {
    const auto it = ltq_gold.find(lang);
    if (it == ltq_gold.end()) throw ValidationError("ltq_gold_correlation: '" + lang.code() + "' missing from gold scores");
    x.push_back(v);
    y.push_back(it->second);
  }
  if (ltq_gold.size() != ltq_pmi.size()) throw ValidationError("ltq_gold_correlation: key sets differ");
  return pearson(x, y);
}

std::vector<GeoCorrelation> geo_correlations(const std::map<LanguagePair, PairFeatures>& features,
                                             const DistanceTable& geo) {
  const std::array<std::pair<const char*, Slot>, 4> columns{{{"esd", Slot::Esd},
                                                              {"lcr_pron", Slot::LcrPron},
                                                              {"lcr_verb", Slot::LcrVerb},
                                                              {"ltq", Slot::Ltq}}};
  std::vector<GeoCorrelation> out;
  for (const auto& [name, slot] : columns) {
    std::vector<double> x, y;
    for (const auto& [pair, f] : features) {
      const auto v = f.get(slot);
      const auto d = geo.lookup(pair.transfer, pair.target);
      if (!v || !d) continue;
      x.push_back(*v);
      y.push_back(*d);
    }
    GeoCorrelation row{name, std::nullopt, x.size()};
    if (x.size() >= 3) row.r = pearson(x, y);
    out.push_back(row);
  }
  return out;
}

std::string network_to_dot(const LanguageNetwork& network, const CulturalAreaMap& areas, const std::string& name) {
  static const std::array<const char*, 10> palette{"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                                   "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  std::map<std::string, std::size_t> colour;
  for (const auto& n : network.nodes) {
    const auto it = areas.areas.find(n);
    if (it != areas.areas.end()) colour.emplace(it->second, 0);
  }
  std::size_t next = 0;
  for (auto& [area, index] : colour) index = next++ % palette.size();

  std::string out = "graph \"" + name + "\" {\n  node [style=filled];\n";
  for (const auto& n : network.nodes) {
    out += "  \"" + n.code() + "\"";
    const auto it = areas.areas.find(n);
    if (it != areas.areas.end())
      out += " [area=\"" + it->second + "\", fillcolor=\"" + palette[colour.at(it->second)] + "\"]";
    out += ";\n";
  }
  for (const auto& [a, b] : network.edges) out += "  \"" + a.code() + "\" -- \"" + b.code() + "\";\n";
  out += "}\n";
  return out;
}

std::string correlations_to_csv(const std::vector<GeoCorrelation>& rows) {
  const std::map<std::string, double> refs{{"esd", reference::kEsdGeoCorrelation},
                                           {"lcr_pron", reference::kLcrPronGeoCorrelation},
                                           {"lcr_verb", reference::kLcrVerbGeoCorrelation},
                                           {"ltq", reference::kLtqGeoCorrelation}};
  std::string out = "feature,r,pairs,reference_r\n";
  for (const auto& row : rows) {
    const auto ref = refs.find(row.feature);
    out += row.feature + "," + (row.r ? text::format_double(*row.r) : "NA") + "," + std::to_string(row.pairs) + "," +
           (ref != refs.end() ? text::format_double(ref->second) : "") + "\n";
  }
  return out;
}

std::string ratios_to_csv(const std::vector<CorpusStats>& stats) {
  std::string out = "language,ptr,vtr\n";
  for (const auto& s : stats)
    out += s.language.code() + "," + text::format_double(s.ptr) + "," + text::format_double(s.vtr) + "\n";
  return out;
}

}  // namespace pragrank
