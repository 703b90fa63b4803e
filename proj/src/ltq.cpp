#include "pragrank/ltq.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace pragrank {

namespace {

bool contains_run(const Sentence& sentence, const std::vector<std::string>& run) {
  if (run.empty() || sentence.size() < run.size()) return false;
  for (std::size_t i = 0; i + run.size() <= sentence.size(); ++i)
    if (std::equal(run.begin(), run.end(), sentence.begin() + static_cast<std::ptrdiff_t>(i)))
      return true;
  return false;
}

}  // namespace

LtqRaw ltq_raw(const std::vector<std::string>& target_mwes, const BilingualLexicon& lexicon,
               const ParallelCorpus& parallel) {
  const LanguageId& target = lexicon.source;
  const LanguageId& transfer = lexicon.target;
  const std::vector<Sentence>* target_side = nullptr;
  const std::vector<Sentence>* transfer_side = nullptr;
  if (parallel.first == target && parallel.second == transfer) {
    target_side = &parallel.first_side;
    transfer_side = &parallel.second_side;
  } else if (parallel.second == target && parallel.first == transfer) {
    target_side = &parallel.second_side;
    transfer_side = &parallel.first_side;
  } else {
    throw ValidationError("ltq_raw: parallel corpus " + parallel.first.code() + "/" +
                          parallel.second.code() + " does not match lexicon direction " +
                          target.code() + "->" + transfer.code());
  }

  // Postings of target-side tokens to sentence ids.
  std::unordered_map<std::string, std::vector<std::size_t>> postings;
  for (std::size_t s = 0; s < target_side->size(); ++s) {
    const auto& sentence = (*target_side)[s];
    for (std::size_t i = 0; i < sentence.size(); ++i) {
      auto& list = postings[sentence[i]];
      if (list.empty() || list.back() != s) list.push_back(s);
    }
  }
  std::vector<std::vector<std::string>> sorted_transfer(transfer_side->size());
  for (std::size_t s = 0; s < transfer_side->size(); ++s) {
    sorted_transfer[s] = (*transfer_side)[s];
    std::sort(sorted_transfer[s].begin(), sorted_transfer[s].end());
  }

  LtqRaw result;
  for (const auto& phrase : target_mwes) {
    const auto words = ngram_tokens(phrase);
    if (words.empty()) continue;
    const auto first = postings.find(words.front());
    if (first == postings.end()) continue;
    HitCount count;
    for (const std::size_t s : first->second) {
      if (!contains_run((*target_side)[s], words)) continue;
      const auto& other = sorted_transfer[s];
      for (const auto& word : words) {
        bool hit = false;
        if (const auto entry = lexicon.entries.find(word); entry != lexicon.entries.end()) {
          for (const auto& translation : entry->second) {
            if (std::binary_search(other.begin(), other.end(), translation)) {
              hit = true;
              break;
            }
          }
        }
        ++(hit ? count.hit : count.miss);
      }
    }
    if (count.hit + count.miss > 0) {
      auto& slot = result.stats[phrase];
      slot.hit += count.hit;
      slot.miss += count.miss;
    }
  }
  if (!result.stats.empty()) {
    double sum = 0;
    for (const auto& [phrase, count] : result.stats) sum += count.hit_ratio();
    result.raw = sum / static_cast<double>(result.stats.size());
  }
  return result;
}

LtqRaw ltq_raw(const MweList& target_mwes, const BilingualLexicon& lexicon,
               const ParallelCorpus& parallel) {
  return ltq_raw(target_mwes.phrases(), lexicon, parallel);
}

std::map<LanguageId, OptReal> ltq_normalize(const std::map<LanguageId, OptReal>& raws) {
  std::size_t n = 0;
  double sum = 0;
  for (const auto& [lang, value] : raws)
    if (value) {
      ++n;
      sum += *value;
    }
  if (n < 2) throw ValidationError("ltq_normalize: need at least two non-missing values");
  const double mean = sum / static_cast<double>(n);
  double sq = 0;
  for (const auto& [lang, value] : raws)
    if (value) sq += (*value - mean) * (*value - mean);
  bool equal = true;
  OptReal first;
  for (const auto& [lang, value] : raws)
    if (value) {
      if (!first) first = value;
      equal = equal && *value == *first;
    }
  // Equal inputs can still leave rounding residue in the mean.
  const double sigma = equal ? 0.0 : std::sqrt(sq / static_cast<double>(n));

  std::map<LanguageId, OptReal> out;
  for (const auto& [lang, value] : raws) {
    if (!value)
      out[lang] = std::nullopt;
    else
      out[lang] = sigma > 0 ? (*value - mean) / sigma : 0.0;
  }
  return out;
}

}  // namespace pragrank
