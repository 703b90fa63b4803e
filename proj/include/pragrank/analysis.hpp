#pragma once

// Intrinsic feature analyses: k-NN language networks and cultural-area
// cohesion, correlations with geographic distance, gold-MWE validation.

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pragrank/common.hpp"
#include "pragrank/context_level.hpp"
#include "pragrank/features.hpp"
#include "pragrank/ingest.hpp"
#include "pragrank/mwe.hpp"

namespace pragrank {

/// Reference values shown next to computed ones.
namespace reference {
inline constexpr double kEsdWithinArea = 0.76;
inline constexpr double kSyntacticWithinArea = 0.59;
inline constexpr double kEsdGeoCorrelation = 0.4;
inline constexpr double kLcrPronGeoCorrelation = 0.17;
inline constexpr double kLcrVerbGeoCorrelation = 0.03;
inline constexpr double kLtqGeoCorrelation = -0.31;
inline constexpr double kGoldBigramPct = 19.0;
inline constexpr double kGoldTrigramPct = 3.8;
inline constexpr double kLtqGoldCorrelation = 0.92;
}  // namespace reference

using PairDistances = std::map<LanguagePair, double>;

/// Both orders of every pair in a symmetric table, restricted to `nodes`
/// when non-empty.
PairDistances pair_distances(const DistanceTable& table, const std::set<LanguageId>& nodes = {});

/// Edges are stored with first < second.
struct LanguageNetwork {
  std::set<LanguageId> nodes;
  std::set<std::pair<LanguageId, LanguageId>> edges;

  friend bool operator==(const LanguageNetwork&, const LanguageNetwork&) = default;
};

/// Each node links to its k nearest others (ascending distance, then id);
/// edges are undirected and deduplicated. Throws ValidationError if k is 0,
/// k >= node count, or a distance is missing.
LanguageNetwork knn_network(const PairDistances& distances, std::size_t k = 2);

/// Fraction of edges whose endpoints share an area. Throws ValidationError
/// for a node without an area or a network without edges.
double within_area_fraction(const LanguageNetwork& network, const CulturalAreaMap& areas);

/// Product-moment correlation. nullopt when either side has zero variance.
/// Throws ValidationError on length mismatch or fewer than 3 values.
OptReal pearson(const std::vector<double>& x, const std::vector<double>& y);

struct GoldOverlap {
  double bigram_pct = 0;
  double trigram_pct = 0;
  std::size_t bigrams_in_gold = 0;
  std::size_t trigrams_in_gold = 0;
};

/// An n-gram is in gold when it is a gold phrase or a contiguous word
/// sub-sequence of one, compared case-insensitively.
GoldOverlap mwe_gold_overlap(const MweList& mwes, const std::vector<std::string>& gold);

/// Pearson over values aligned by key. Throws ValidationError when the key
/// sets differ.
OptReal ltq_gold_correlation(const std::map<LanguageId, double>& ltq_pmi,
                             const std::map<LanguageId, double>& ltq_gold);

struct GeoCorrelation {
  std::string feature;
  OptReal r;
  std::size_t pairs = 0;
};

/// Correlation of ESD, LCR-pron, LCR-verb and LTQ with geographic distance
/// over all ordered pairs where both values are present. Fewer than 3 pairs
/// gives nullopt.
std::vector<GeoCorrelation> geo_correlations(const std::map<LanguagePair, PairFeatures>& features,
                                             const DistanceTable& geo);

/// "graph" DOT with an area attribute and a fill colour per area.
std::string network_to_dot(const LanguageNetwork& network, const CulturalAreaMap& areas,
                           const std::string& name = "languages");

/// feature,r,pairs,reference_r
std::string correlations_to_csv(const std::vector<GeoCorrelation>& rows);

/// language,ptr,vtr
std::string ratios_to_csv(const std::vector<CorpusStats>& stats);

}  // namespace pragrank
