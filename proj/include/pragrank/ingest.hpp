#pragma once

// Parsers and serializers for every external resource the pipeline reads.
// All parsers are pure: text in, validated value out. Word material is
// lowercased on the way in; malformed lines raise FormatError with the
// source name and line number.

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "pragrank/common.hpp"

namespace pragrank {

/// The 17 universal part-of-speech tags.
enum class Upos {
  ADJ, ADP, ADV, AUX, CCONJ, DET, INTJ, NOUN, NUM, PART, PRON, PROPN, PUNCT, SCONJ, SYM, VERB, X
};

std::optional<Upos> parse_upos(std::string_view tag);
std::string_view upos_name(Upos tag);

struct TaggedToken {
  std::string surface;
  Upos upos = Upos::X;
  friend bool operator==(const TaggedToken&, const TaggedToken&) = default;
};

struct TaggedCorpus {
  std::vector<std::vector<TaggedToken>> sentences;

  std::size_t token_count() const;
  friend bool operator==(const TaggedCorpus&, const TaggedCorpus&) = default;
};

using Sentence = std::vector<std::string>;

/// Whitespace-tokenized, lowercased, untagged sentences.
struct RawCorpus {
  std::vector<Sentence> sentences;

  std::size_t token_count() const;
  friend bool operator==(const RawCorpus&, const RawCorpus&) = default;
};

/// Word -> translations, directed source -> target.
struct BilingualLexicon {
  LanguageId source;
  LanguageId target;
  std::map<std::string, std::set<std::string>> entries;

  /// Same entries with source and target swapped.
  BilingualLexicon inverted() const;
  friend bool operator==(const BilingualLexicon&, const BilingualLexicon&) = default;
};

struct ParallelCorpus {
  LanguageId first;
  LanguageId second;
  std::vector<Sentence> first_side;
  std::vector<Sentence> second_side;

  std::size_t size() const { return first_side.size(); }
  friend bool operator==(const ParallelCorpus&, const ParallelCorpus&) = default;
};

/// Word vectors, unit-L2-normalized at load. Rows are stored contiguously
/// in insertion order.
class EmbeddingSet {
 public:
  EmbeddingSet() = default;
  EmbeddingSet(LanguageId language, std::size_t dim);

  /// Adds a word; returns false (and keeps the existing row) if the word is
  /// already present. Throws ValidationError on a zero or wrong-length vector.
  bool add(const std::string& word, std::span<const double> vector);

  const LanguageId& language() const { return language_; }
  void set_language(LanguageId language) { language_ = std::move(language); }
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return words_.size(); }
  const std::vector<std::string>& words() const { return words_; }
  bool contains(const std::string& word) const { return index_.count(word) > 0; }
  std::optional<std::span<const double>> find(const std::string& word) const;
  std::span<const double> row(std::size_t i) const;

  /// Number of duplicate rows dropped while parsing.
  std::size_t duplicates_dropped() const { return duplicates_; }
  void note_duplicate() { ++duplicates_; }

  friend bool operator==(const EmbeddingSet& a, const EmbeddingSet& b) {
    return a.language_ == b.language_ && a.dim_ == b.dim_ && a.words_ == b.words_ &&
           a.data_ == b.data_;
  }

 private:
  LanguageId language_;
  std::size_t dim_ = 0;
  std::vector<std::string> words_;
  std::vector<double> data_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t duplicates_ = 0;
};

struct EmotionLexicon {
  /// Concept names in first-seen order.
  std::vector<std::string> concepts;
  /// language -> concept -> words (deduplicated, first-seen order).
  std::map<LanguageId, std::map<std::string, std::vector<std::string>>> words;

  /// All emotion words listed for a language.
  std::set<std::string> vocabulary(const LanguageId& language) const;
  friend bool operator==(const EmotionLexicon&, const EmotionLexicon&) = default;
};

enum class DistanceFacet { Geo, Gen, Inv, Syn, Phon, Feat };

std::optional<DistanceFacet> parse_facet(std::string_view name);
std::string_view facet_name(DistanceFacet facet);

/// One facet of URIEL-style pairwise distances. Lookups are symmetric.
struct DistanceTable {
  DistanceFacet facet = DistanceFacet::Geo;
  std::map<std::pair<LanguageId, LanguageId>, double> values;

  OptReal lookup(const LanguageId& a, const LanguageId& b) const;
  friend bool operator==(const DistanceTable&, const DistanceTable&) = default;
};

using DistanceTables = std::map<DistanceFacet, DistanceTable>;

struct ZeroShotTable {
  std::string task;
  std::map<LanguagePair, double> scores;

  OptReal lookup(const LanguageId& transfer, const LanguageId& target) const;
  std::set<LanguageId> languages() const;
  friend bool operator==(const ZeroShotTable&, const ZeroShotTable&) = default;
};

struct LanguageVectorSet {
  std::size_t dim = 0;
  std::map<LanguageId, std::vector<double>> vectors;
  friend bool operator==(const LanguageVectorSet&, const LanguageVectorSet&) = default;
};

struct CulturalAreaMap {
  std::map<LanguageId, std::string> areas;
  friend bool operator==(const CulturalAreaMap&, const CulturalAreaMap&) = default;
};

/// language -> numeric value (Wikipedia article counts, task dataset sizes).
struct LanguageScalarTable {
  std::map<LanguageId, double> values;
  friend bool operator==(const LanguageScalarTable&, const LanguageScalarTable&) = default;
};

// ---------------------------------------------------------------------------
// Parsers. `source` names the input in diagnostics (usually the file path).

TaggedCorpus parse_conllu(std::string_view text, std::string_view source = {});
RawCorpus parse_raw_corpus(std::string_view text, std::string_view source = {});
EmbeddingSet parse_embeddings(std::string_view text, LanguageId language = {},
                              std::string_view source = {});

/// Lexicon TSV. The direction comes from the caller (see lexicon_direction).
BilingualLexicon parse_lexicon(std::string_view text, LanguageId source_lang,
                               LanguageId target_lang, std::string_view source = {});

/// Reads the direction from a file name of the form ".../src-tgt.tsv".
std::pair<LanguageId, LanguageId> lexicon_direction(std::string_view path);

/// Two line-aligned files. Empty sentences and unequal line counts are errors.
ParallelCorpus parse_parallel(std::string_view first_text, std::string_view second_text,
                              LanguageId first, LanguageId second,
                              std::string_view source = {});

ZeroShotTable parse_zero_shot(std::string_view text, std::string task = {},
                              std::string_view source = {});
DistanceTables parse_distances(std::string_view text, std::string_view source = {});
EmotionLexicon parse_emotion_lexicon(std::string_view text, std::string_view source = {});
CulturalAreaMap parse_areas(std::string_view text, std::string_view source = {});
LanguageVectorSet parse_language_vectors(std::string_view text, std::string_view source = {});
LanguageScalarTable parse_scalar_table(std::string_view text, std::string_view source = {});

/// One phrase per line, lowercased; blank lines and '#' comments skipped.
std::vector<std::string> parse_phrase_list(std::string_view text, std::string_view source = {});

enum class ResourceKind {
  Lexicon, Parallel, Distances, ZeroShot, EmotionLexicon, Areas, LanguageVectors, ScalarTable
};

std::optional<ResourceKind> parse_resource_kind(std::string_view name);

using Resource = std::variant<BilingualLexicon, ParallelCorpus, DistanceTables, ZeroShotTable,
                              EmotionLexicon, CulturalAreaMap, LanguageVectorSet,
                              LanguageScalarTable>;

/// Kind-dispatching entry point for the tabular formats. `kind` is one of
/// lexicon, parallel, distances, zero_shot, emotion_lexicon, areas,
/// language_vectors, scalar_table. Lexicon direction is inferred from
/// `source` (the file name); a parallel corpus expects both sides joined by
/// a line containing only "|||".
Resource parse_tabular_resource(std::string_view text, std::string_view kind,
                                std::string_view source = {});

// ---------------------------------------------------------------------------
// Serializers. parse(serialize(x)) == x for every resource type.

std::string serialize(const TaggedCorpus& corpus);
std::string serialize(const RawCorpus& corpus);
std::string serialize(const EmbeddingSet& embeddings);
std::string serialize(const BilingualLexicon& lexicon);
std::pair<std::string, std::string> serialize(const ParallelCorpus& corpus);
std::string serialize(const ZeroShotTable& table);
std::string serialize(const DistanceTables& tables);
std::string serialize(const EmotionLexicon& lexicon);
std::string serialize(const CulturalAreaMap& areas);
std::string serialize(const LanguageVectorSet& vectors);
std::string serialize(const LanguageScalarTable& table);

}  // namespace pragrank
