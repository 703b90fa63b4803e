#pragma once

#include <cstddef>
#include <map>
#include <string>

#include "pragrank/common.hpp"
#include "pragrank/ingest.hpp"
#include "pragrank/mwe.hpp"

namespace pragrank {

struct HitCount {
  std::size_t hit = 0;
  std::size_t miss = 0;
  double hit_ratio() const { return static_cast<double>(hit) / static_cast<double>(hit + miss); }
};

/// Per-n-gram hit/miss counts, only for n-grams found at least once.
using HitStats = std::map<std::string, HitCount>;

struct LtqRaw {
  /// Unweighted mean hit ratio; missing when no MWE occurs in the corpus.
  OptReal raw;
  HitStats stats;
};

/// Literal translation quality of the target language's MWEs towards the
/// transfer language. `lexicon` must translate target -> transfer and the
/// parallel corpus must contain both languages (either side order).
///
/// For each MWE, every target-side sentence containing it as a contiguous
/// token run is a match. For each word of the MWE in each matching pair, a
/// translation of the word anywhere in the transfer-side sentence is a hit,
/// otherwise a miss. Counts aggregate over all matching pairs.
LtqRaw ltq_raw(const std::vector<std::string>& target_mwes, const BilingualLexicon& lexicon,
               const ParallelCorpus& parallel);

LtqRaw ltq_raw(const MweList& target_mwes, const BilingualLexicon& lexicon,
               const ParallelCorpus& parallel);

/// Population z-score over the non-missing raw values of one target's
/// candidate transfer languages. Missing inputs stay missing; zero spread
/// yields all zeros. Throws ValidationError with fewer than two values.
std::map<LanguageId, OptReal> ltq_normalize(const std::map<LanguageId, OptReal>& raws);

}  // namespace pragrank
