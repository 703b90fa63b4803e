#pragma once

#include <cstddef>

#include "pragrank/common.hpp"
#include "pragrank/ingest.hpp"

namespace pragrank {

inline constexpr std::size_t kDefaultTtrCap = 100000;

/// Per-language token statistics behind ptr, vtr and ttr.
struct CorpusStats {
  LanguageId language;
  std::size_t tokens = 0;
  std::size_t pron_tokens = 0;
  std::size_t verb_tokens = 0;
  /// Distinct lowercased forms within the first `ttr_cap` tokens.
  std::size_t types = 0;
  std::size_t ttr_window = 0;
  double ptr = 0;
  double vtr = 0;
  double ttr = 0;
};

/// Counts PRON and VERB tokens (AUX is not a verb here) and the type-token
/// ratio over the first `ttr_cap` tokens. Throws ValidationError on an empty
/// corpus.
CorpusStats corpus_stats(const TaggedCorpus& corpus, LanguageId language = {},
                         std::size_t ttr_cap = kDefaultTtrCap);

struct ContextLevelRatio {
  OptReal pron;
  OptReal verb;
};

/// ptr(tg)/ptr(tf) and vtr(tg)/vtr(tf); a zero transfer-side rate leaves the
/// corresponding ratio missing.
ContextLevelRatio lcr(const CorpusStats& transfer, const CorpusStats& target);

}  // namespace pragrank
