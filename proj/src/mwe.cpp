#include "pragrank/mwe.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "pragrank/text.hpp"

namespace pragrank {

std::size_t NGramTable::count(const std::string& key) const {
  const auto it = counts.find(key);
  return it == counts.end() ? 0 : it->second;
}

const NGramTable& NGramFamily::table(int order) const {
  switch (order) {
    case 1: return unigrams;
    case 2: return bigrams;
    case 3: return trigrams;
    default: throw ValidationError("n-gram order must be 1, 2 or 3");
  }
}

std::string ngram_key(const std::vector<std::string>& tokens) { return text::join(tokens, " "); }

std::vector<std::string> ngram_tokens(const std::string& key) { return text::split_whitespace(key); }

NGramFamily count_ngrams(const RawCorpus& corpus) {
  NGramFamily family;
  std::string key;
  for (const auto& sentence : corpus.sentences) {
    for (std::size_t i = 0; i < sentence.size(); ++i) {
      ++family.unigrams.counts[sentence[i]];
      ++family.unigrams.total;
      if (i + 1 < sentence.size()) {
        key = sentence[i] + " " + sentence[i + 1];
        ++family.bigrams.counts[key];
        ++family.bigrams.total;
        if (i + 2 < sentence.size()) {
          key += " " + sentence[i + 2];
          ++family.trigrams.counts[key];
          ++family.trigrams.total;
        }
      }
    }
  }
  return family;
}

std::optional<double> pmi3_score(const NGramFamily& family, const std::vector<std::string>& ngram,
                                 std::size_t min_count) {
  const int order = static_cast<int>(ngram.size());
  if (order < 2 || order > 3) throw ValidationError("PMI3 is defined for bigrams and trigrams");
  const auto& table = family.table(order);
  const std::size_t joint = table.count(ngram_key(ngram));
  if (joint == 0 || joint < min_count) return std::nullopt;
  double score = 3.0 * std::log(static_cast<double>(joint) / static_cast<double>(table.total));
  for (const auto& word : ngram) {
    const std::size_t c = family.unigrams.count(word);
    if (c == 0) return std::nullopt;
    score -= std::log(static_cast<double>(c) / static_cast<double>(family.unigrams.total));
  }
  return score;
}

namespace {

void sort_scored(std::vector<ScoredNGram>& list) {
  std::sort(list.begin(), list.end(), [](const ScoredNGram& a, const ScoredNGram& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.ngram < b.ngram;
  });
}

}  // namespace

std::vector<ScoredNGram> score_ngrams(const NGramFamily& family, int order, std::size_t min_count) {
  std::vector<ScoredNGram> out;
  for (const auto& [key, count] : family.table(order).counts) {
    if (count < min_count) continue;
    if (const auto score = pmi3_score(family, ngram_tokens(key), min_count)) out.push_back({key, *score});
  }
  sort_scored(out);
  return out;
}

const std::vector<ScoredNGram>& MweList::of_order(int order) const {
  if (order == 2) return bigrams;
  if (order == 3) return trigrams;
  throw ValidationError("MWE order must be 2 or 3");
}

std::vector<std::string> MweList::phrases() const {
  std::vector<std::string> out;
  for (const auto& s : bigrams) out.push_back(s.ngram);
  for (const auto& s : trigrams) out.push_back(s.ngram);
  return out;
}

MweExtraction extract_mwes(const RawCorpus& corpus_a, const RawCorpus& corpus_b, LanguageId language,
                           const MweOptions& options) {
  MweExtraction result;
  result.mwes.language = language;
  const auto family_a = count_ngrams(corpus_a);
  const auto family_b = count_ngrams(corpus_b);
  const std::size_t cut = options.k * options.candidate_factor;

  for (const int order : {2, 3}) {
    auto list_a = score_ngrams(family_a, order, options.min_count);
    auto list_b = score_ngrams(family_b, order, options.min_count);
    if (list_a.size() > cut) list_a.resize(cut);
    if (list_b.size() > cut) list_b.resize(cut);
    std::unordered_set<std::string> in_b;
    for (const auto& s : list_b) in_b.insert(s.ngram);

    // list_a is already in final order (PMI3 in corpus A, then key).
    std::vector<ScoredNGram> kept;
    for (const auto& s : list_a) {
      if (kept.size() == options.k) break;
      if (in_b.count(s.ngram)) kept.push_back(s);
    }
    if (kept.empty())
      result.warnings.push_back("no shared " + std::string(order == 2 ? "bigram" : "trigram") +
                                " candidates for '" + language.code() + "'");
    (order == 2 ? result.mwes.bigrams : result.mwes.trigrams) = std::move(kept);
  }
  return result;
}

std::string serialize(const MweList& list) {
  std::string out;
  for (const int order : {2, 3})
    for (const auto& s : list.of_order(order))
      out += std::to_string(order) + "\t" + s.ngram + "\t" + text::format_double(s.score) + "\n";
  return out;
}

MweList parse_mwe_list(std::string_view input, LanguageId language, std::string_view source) {
  MweList list;
  list.language = std::move(language);
  const auto all = text::lines(input);
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (text::trim(all[i]).empty()) continue;
    const auto cols = text::split(all[i], '\t');
    const auto order = cols.size() == 3 ? text::parse_int(cols[0]) : std::nullopt;
    const auto score = cols.size() == 3 ? text::parse_double(cols[2]) : std::nullopt;
    if (!order || !score || (*order != 2 && *order != 3))
      throw FormatError(std::string(source), i + 1, "malformed MWE line");
    (*order == 2 ? list.bigrams : list.trigrams).push_back({std::string(cols[1]), *score});
  }
  return list;
}

}  // namespace pragrank
