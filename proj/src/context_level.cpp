#include "pragrank/context_level.hpp"

#include <algorithm>
#include <unordered_set>

#include "pragrank/text.hpp"

namespace pragrank {

CorpusStats corpus_stats(const TaggedCorpus& corpus, LanguageId language, std::size_t ttr_cap) {
  CorpusStats stats;
  stats.language = std::move(language);
  std::unordered_set<std::string> types;
  for (const auto& sentence : corpus.sentences) {
    for (const auto& token : sentence) {
      if (token.upos == Upos::PRON) ++stats.pron_tokens;
      if (token.upos == Upos::VERB) ++stats.verb_tokens;
      if (stats.tokens < ttr_cap) types.insert(text::to_lower(token.surface));
      ++stats.tokens;
    }
  }
  if (stats.tokens == 0) throw ValidationError("corpus_stats: empty corpus for '" + stats.language.code() + "'");
  const double n = static_cast<double>(stats.tokens);
  stats.types = types.size();
  stats.ttr_window = std::min(stats.tokens, ttr_cap);
  stats.ptr = static_cast<double>(stats.pron_tokens) / n;
  stats.vtr = static_cast<double>(stats.verb_tokens) / n;
  stats.ttr = static_cast<double>(stats.types) / static_cast<double>(stats.ttr_window);
  return stats;
}

ContextLevelRatio lcr(const CorpusStats& transfer, const CorpusStats& target) {
  ContextLevelRatio out;
  if (transfer.ptr > 0) out.pron = target.ptr / transfer.ptr;
  if (transfer.vtr > 0) out.verb = target.vtr / transfer.vtr;
  return out;
}

}  // namespace pragrank
