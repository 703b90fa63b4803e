#pragma once

// Collocation mining with PMI^3:
//
//   PMI3(w1..wn) = ln( p(w1..wn)^3 / prod_i p(wi) )
//
// with p(w1..wn) = count_n / total_n and p(wi) = count_1(wi) / total_1.
// N-grams never cross sentence boundaries. N-gram keys are the tokens
// joined by a single space.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "pragrank/common.hpp"
#include "pragrank/ingest.hpp"

namespace pragrank {

inline constexpr std::size_t kDefaultMweCount = 500;
inline constexpr std::size_t kDefaultMinCount = 5;
inline constexpr std::size_t kDefaultCandidateFactor = 5;

struct NGramTable {
  int order = 1;
  std::unordered_map<std::string, std::size_t> counts;
  std::size_t total = 0;

  std::size_t count(const std::string& key) const;
};

/// Unigram, bigram and trigram tables of one corpus.
struct NGramFamily {
  NGramTable unigrams{1, {}, 0};
  NGramTable bigrams{2, {}, 0};
  NGramTable trigrams{3, {}, 0};

  const NGramTable& table(int order) const;
};

NGramFamily count_ngrams(const RawCorpus& corpus);

std::string ngram_key(const std::vector<std::string>& tokens);
std::vector<std::string> ngram_tokens(const std::string& key);

/// PMI^3 of an n-gram (order 2 or 3). nullopt when the n-gram occurs fewer
/// than `min_count` times or a component unigram is absent.
std::optional<double> pmi3_score(const NGramFamily& family, const std::vector<std::string>& ngram,
                                 std::size_t min_count = kDefaultMinCount);

struct ScoredNGram {
  std::string ngram;
  double score = 0;
  friend bool operator==(const ScoredNGram&, const ScoredNGram&) = default;
};

/// Every n-gram of the given order with count >= min_count, sorted by
/// descending score, ties by ascending key.
std::vector<ScoredNGram> score_ngrams(const NGramFamily& family, int order,
                                      std::size_t min_count = kDefaultMinCount);

struct MweList {
  LanguageId language;
  std::vector<ScoredNGram> bigrams;
  std::vector<ScoredNGram> trigrams;

  const std::vector<ScoredNGram>& of_order(int order) const;
  std::vector<std::string> phrases() const;
  friend bool operator==(const MweList&, const MweList&) = default;
};

struct MweOptions {
  std::size_t k = kDefaultMweCount;
  std::size_t min_count = kDefaultMinCount;
  /// Each corpus contributes its top candidate_factor * k n-grams per order
  /// before the lists are intersected.
  std::size_t candidate_factor = kDefaultCandidateFactor;
};

struct MweExtraction {
  MweList mwes;
  std::vector<std::string> warnings;
};

/// Scores both corpora independently, intersects their top candidates per
/// order, ranks the intersection by PMI^3 in `corpus_a` and keeps the top k.
MweExtraction extract_mwes(const RawCorpus& corpus_a, const RawCorpus& corpus_b,
                           LanguageId language = {}, const MweOptions& options = {});

/// Tab-separated "order<TAB>ngram<TAB>score" lines, for caching.
std::string serialize(const MweList& list);
MweList parse_mwe_list(std::string_view text, LanguageId language, std::string_view source = {});

}  // namespace pragrank
