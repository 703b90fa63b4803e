#include "pragrank/ingest.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>

#include "pragrank/text.hpp"

namespace pragrank {

namespace {

constexpr std::array<std::string_view, 17> kUposNames = {
    "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM",
    "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X"};

constexpr std::array<std::string_view, 6> kFacetNames = {"geo", "gen", "inv", "syn", "phon", "feat"};

std::string src_name(std::string_view source) {
  return source.empty() ? std::string("<input>") : std::string(source);
}

[[noreturn]] void fail(std::string_view source, std::size_t line, const std::string& what) {
  throw FormatError(src_name(source), line, what);
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

LanguageId language_field(std::string_view field, std::string_view source, std::size_t line) {
  const auto trimmed = text::trim(field);
  if (trimmed.empty()) fail(source, line, "empty language id");
  return LanguageId(trimmed);
}

std::string word_field(std::string_view field, std::string_view source, std::size_t line) {
  auto word = text::to_lower(text::trim(field));
  if (word.empty()) fail(source, line, "empty word");
  return word;
}

double number_field(std::string_view field, std::string_view source, std::size_t line) {
  const auto value = text::parse_double(field);
  if (!value) fail(source, line, "non-numeric value '" + std::string(text::trim(field)) + "'");
  if (!std::isfinite(*value)) fail(source, line, "non-finite value");
  return *value;
}

void expect_header(const std::vector<std::string_view>& lines, std::string_view expected,
                   std::string_view source) {
  if (lines.empty()) fail(source, 1, "missing header '" + std::string(expected) + "'");
  std::string header(text::trim(lines.front()));
  header.erase(std::remove(header.begin(), header.end(), ' '), header.end());
  if (header != expected)
    fail(source, 1, "expected header '" + std::string(expected) + "', got '" +
                        std::string(lines.front()) + "'");
}

std::vector<std::string_view> fields(std::string_view line, char delim, std::size_t expected,
                                     std::string_view source, std::size_t line_no) {
  auto parts = text::split(line, delim);
  if (parts.size() != expected)
    fail(source, line_no,
         "expected " + std::to_string(expected) + " fields, got " + std::to_string(parts.size()));
  return parts;
}

}  // namespace

std::optional<Upos> parse_upos(std::string_view tag) {
  for (std::size_t i = 0; i < kUposNames.size(); ++i)
    if (kUposNames[i] == tag) return static_cast<Upos>(i);
  return std::nullopt;
}

std::string_view upos_name(Upos tag) { return kUposNames[static_cast<std::size_t>(tag)]; }

std::optional<DistanceFacet> parse_facet(std::string_view name) {
  const auto lowered = text::to_lower(text::trim(name));
  for (std::size_t i = 0; i < kFacetNames.size(); ++i)
    if (kFacetNames[i] == lowered) return static_cast<DistanceFacet>(i);
  return std::nullopt;
}

std::string_view facet_name(DistanceFacet facet) {
  return kFacetNames[static_cast<std::size_t>(facet)];
}

std::size_t TaggedCorpus::token_count() const {
  std::size_t n = 0;
  for (const auto& s : sentences) n += s.size();
  return n;
}

std::size_t RawCorpus::token_count() const {
  std::size_t n = 0;
  for (const auto& s : sentences) n += s.size();
  return n;
}

BilingualLexicon BilingualLexicon::inverted() const {
  BilingualLexicon out{target, source, {}};
  for (const auto& [word, translations] : entries)
    for (const auto& t : translations) out.entries[t].insert(word);
  return out;
}

EmbeddingSet::EmbeddingSet(LanguageId language, std::size_t dim)
    : language_(std::move(language)), dim_(dim) {
  if (dim == 0) throw ValidationError("embedding dimension must be positive");
}

bool EmbeddingSet::add(const std::string& word, std::span<const double> vector) {
  if (vector.size() != dim_)
    throw ValidationError("vector for '" + word + "' has length " + std::to_string(vector.size()) +
                          ", expected " + std::to_string(dim_));
  if (index_.count(word)) return false;
  double sq = 0;
  for (const double v : vector) sq += v * v;
  const double norm = std::sqrt(sq);
  if (!(norm > 0) || !std::isfinite(norm))
    throw ValidationError("zero vector for '" + word + "' cannot be normalized");
  // Already-unit rows are stored as-is so that serialize/parse is exact.
  const bool unit = std::abs(norm - 1.0) <= 1e-15;
  for (const double v : vector) data_.push_back(unit ? v : v / norm);
  index_.emplace(word, words_.size());
  words_.push_back(word);
  return true;
}

std::optional<std::span<const double>> EmbeddingSet::find(const std::string& word) const {
  const auto it = index_.find(word);
  if (it == index_.end()) return std::nullopt;
  return row(it->second);
}

std::span<const double> EmbeddingSet::row(std::size_t i) const {
  return std::span<const double>(data_).subspan(i * dim_, dim_);
}

std::set<std::string> EmotionLexicon::vocabulary(const LanguageId& language) const {
  std::set<std::string> out;
  const auto it = words.find(language);
  if (it == words.end()) return out;
  for (const auto& [concept_name, list] : it->second) out.insert(list.begin(), list.end());
  return out;
}

OptReal DistanceTable::lookup(const LanguageId& a, const LanguageId& b) const {
  if (auto it = values.find({a, b}); it != values.end()) return it->second;
  if (auto it = values.find({b, a}); it != values.end()) return it->second;
  if (a == b) return 0.0;
  return std::nullopt;
}

OptReal ZeroShotTable::lookup(const LanguageId& transfer, const LanguageId& target) const {
  const auto it = scores.find({transfer, target});
  if (it == scores.end()) return std::nullopt;
  return it->second;
}

std::set<LanguageId> ZeroShotTable::languages() const {
  std::set<LanguageId> out;
  for (const auto& [pair, score] : scores) {
    out.insert(pair.transfer);
    out.insert(pair.target);
  }
  return out;
}

// ---------------------------------------------------------------------------

TaggedCorpus parse_conllu(std::string_view input, std::string_view source) {
  TaggedCorpus corpus;
  std::vector<TaggedToken> current;
  const auto all = text::lines(input);
  for (std::size_t i = 0; i < all.size(); ++i) {
    const auto line = all[i];
    const std::size_t line_no = i + 1;
    if (text::trim(line).empty()) {
      if (!current.empty()) corpus.sentences.push_back(std::move(current));
      current.clear();
      continue;
    }
    if (line.front() == '#') continue;
    const auto cols = text::split(line, '\t');
    const auto id = cols.front();
    if (id.find('-') != std::string_view::npos || id.find('.') != std::string_view::npos) continue;
    if (!all_digits(id)) fail(source, line_no, "invalid token id '" + std::string(id) + "'");
    if (cols.size() != 10)
      fail(source, line_no, "expected 10 tab-separated columns, got " + std::to_string(cols.size()));
    if (cols[1].empty()) fail(source, line_no, "empty FORM");
    const auto tag = parse_upos(cols[3]);
    if (!tag) fail(source, line_no, "unknown UPOS tag '" + std::string(cols[3]) + "'");
    current.push_back({std::string(cols[1]), *tag});
  }
  if (!current.empty()) corpus.sentences.push_back(std::move(current));
  return corpus;
}

RawCorpus parse_raw_corpus(std::string_view input, std::string_view) {
  RawCorpus corpus;
  for (const auto line : text::lines(input)) {
    auto tokens = text::split_whitespace(text::to_lower(line));
    if (!tokens.empty()) corpus.sentences.push_back(std::move(tokens));
  }
  return corpus;
}

EmbeddingSet parse_embeddings(std::string_view input, LanguageId language, std::string_view source) {
  const auto all = text::lines(input);
  if (all.empty()) fail(source, 1, "missing header 'vocab_size dim'");
  const auto header = text::split_whitespace(all.front());
  if (header.size() != 2) fail(source, 1, "header must be 'vocab_size dim'");
  const auto count = text::parse_int(header[0]);
  const auto dim = text::parse_int(header[1]);
  if (!count || !dim || *count < 0 || *dim <= 0) fail(source, 1, "invalid header values");

  EmbeddingSet set(std::move(language), static_cast<std::size_t>(*dim));
  std::vector<double> row(static_cast<std::size_t>(*dim));
  std::size_t rows = 0;
  for (std::size_t i = 1; i < all.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (text::trim(all[i]).empty()) continue;
    const auto tokens = text::split_whitespace(all[i]);
    if (tokens.size() - 1 != row.size())
      fail(source, line_no,
           "dimension mismatch: expected " + std::to_string(row.size()) + " values, got " +
               std::to_string(tokens.size() - 1));
    for (std::size_t d = 0; d < row.size(); ++d) row[d] = number_field(tokens[d + 1], source, line_no);
    try {
      if (!set.add(text::to_lower(tokens[0]), row)) set.note_duplicate();
    } catch (const ValidationError& e) {
      fail(source, line_no, e.what());
    }
    ++rows;
  }
  if (rows != static_cast<std::size_t>(*count))
    fail(source, all.size(), "header declares " + std::to_string(*count) + " rows, found " +
                                 std::to_string(rows));
  return set;
}

BilingualLexicon parse_lexicon(std::string_view input, LanguageId source_lang,
                               LanguageId target_lang, std::string_view source) {
  BilingualLexicon lex{std::move(source_lang), std::move(target_lang), {}};
  const auto all = text::lines(input);
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (text::trim(all[i]).empty()) continue;
    const auto cols = fields(all[i], '\t', 2, source, i + 1);
    lex.entries[word_field(cols[0], source, i + 1)].insert(word_field(cols[1], source, i + 1));
  }
  return lex;
}

std::pair<LanguageId, LanguageId> lexicon_direction(std::string_view path) {
  const auto stem = std::filesystem::path(std::string(path)).stem().string();
  const auto parts = text::split(stem, '-');
  if (parts.size() != 2 || parts[0].empty() || parts[1].empty())
    throw FormatError(std::string(path), 0, "lexicon file name must look like 'src-tgt.tsv'");
  return {LanguageId(parts[0]), LanguageId(parts[1])};
}

ParallelCorpus parse_parallel(std::string_view first_text, std::string_view second_text,
                              LanguageId first, LanguageId second, std::string_view source) {
  const auto a = text::lines(first_text);
  const auto b = text::lines(second_text);
  if (a.size() != b.size())
    fail(source, 0, "parallel sides have different line counts (" + std::to_string(a.size()) +
                        " vs " + std::to_string(b.size()) + ")");
  ParallelCorpus corpus{std::move(first), std::move(second), {}, {}};
  corpus.first_side.reserve(a.size());
  corpus.second_side.reserve(b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto left = text::split_whitespace(text::to_lower(a[i]));
    auto right = text::split_whitespace(text::to_lower(b[i]));
    if (left.empty() || right.empty()) fail(source, i + 1, "empty sentence in parallel corpus");
    corpus.first_side.push_back(std::move(left));
    corpus.second_side.push_back(std::move(right));
  }
  return corpus;
}

ZeroShotTable parse_zero_shot(std::string_view input, std::string task, std::string_view source) {
  const auto all = text::lines(input);
  expect_header(all, "transfer,target,score", source);
  ZeroShotTable table{std::move(task), {}};
  for (std::size_t i = 1; i < all.size(); ++i) {
    if (text::trim(all[i]).empty()) continue;
    const auto cols = fields(all[i], ',', 3, source, i + 1);
    LanguagePair key{language_field(cols[0], source, i + 1), language_field(cols[1], source, i + 1)};
    const double score = number_field(cols[2], source, i + 1);
    if (!table.scores.emplace(key, score).second)
      fail(source, i + 1, "duplicate entry for " + to_string(key));
  }
  return table;
}

DistanceTables parse_distances(std::string_view input, std::string_view source) {
  const auto all = text::lines(input);
  expect_header(all, "facet,lang1,lang2,value", source);
  DistanceTables tables;
  for (std::size_t i = 1; i < all.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (text::trim(all[i]).empty()) continue;
    const auto cols = fields(all[i], ',', 4, source, line_no);
    const auto facet = parse_facet(cols[0]);
    if (!facet) fail(source, line_no, "unknown facet '" + std::string(cols[0]) + "'");
    auto a = language_field(cols[1], source, line_no);
    auto b = language_field(cols[2], source, line_no);
    const double value = number_field(cols[3], source, line_no);
    if (value < 0.0 || value > 1.0)
      fail(source, line_no, "distance " + text::format_double(value) + " outside [0,1]");
    if (a == b && value != 0.0) fail(source, line_no, "non-zero diagonal distance");
    auto& table = tables[*facet];
    table.facet = *facet;
    if (auto it = table.values.find({b, a}); it != table.values.end() && it->second != value)
      fail(source, line_no, "asymmetric distance for " + a.code() + "/" + b.code());
    if (!table.values.emplace(std::pair{a, b}, value).second)
      fail(source, line_no, "duplicate distance for " + a.code() + "/" + b.code());
  }
  return tables;
}

EmotionLexicon parse_emotion_lexicon(std::string_view input, std::string_view source) {
  EmotionLexicon lex;
  const auto all = text::lines(input);
  for (std::size_t i = 0; i < all.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (text::trim(all[i]).empty()) continue;
    const auto cols = fields(all[i], '\t', 3, source, line_no);
    const std::string concept_name = text::to_lower(text::trim(cols[0]));
    if (concept_name.empty()) fail(source, line_no, "empty concept name");
    auto lang = language_field(cols[1], source, line_no);
    auto word = word_field(cols[2], source, line_no);
    if (std::find(lex.concepts.begin(), lex.concepts.end(), concept_name) == lex.concepts.end())
      lex.concepts.push_back(concept_name);
    auto& list = lex.words[lang][concept_name];
    if (std::find(list.begin(), list.end(), word) == list.end()) list.push_back(std::move(word));
  }
  return lex;
}

CulturalAreaMap parse_areas(std::string_view input, std::string_view source) {
  CulturalAreaMap map;
  const auto all = text::lines(input);
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (text::trim(all[i]).empty()) continue;
    const auto cols = fields(all[i], '\t', 2, source, i + 1);
    auto lang = language_field(cols[0], source, i + 1);
    const std::string area(text::trim(cols[1]));
    if (area.empty()) fail(source, i + 1, "empty area label");
    if (!map.areas.emplace(lang, area).second)
      fail(source, i + 1, "language '" + lang.code() + "' assigned to more than one area");
  }
  return map;
}

LanguageVectorSet parse_language_vectors(std::string_view input, std::string_view source) {
  LanguageVectorSet set;
  const auto all = text::lines(input);
  for (std::size_t i = 0; i < all.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (text::trim(all[i]).empty()) continue;
    const auto cols = fields(all[i], '\t', 2, source, line_no);
    auto lang = language_field(cols[0], source, line_no);
    std::vector<double> vec;
    for (const auto& tok : text::split_whitespace(cols[1]))
      vec.push_back(number_field(tok, source, line_no));
    if (vec.empty()) fail(source, line_no, "empty language vector");
    if (set.dim == 0) set.dim = vec.size();
    if (vec.size() != set.dim)
      fail(source, line_no, "vector length " + std::to_string(vec.size()) + ", expected " +
                                std::to_string(set.dim));
    if (!set.vectors.emplace(lang, std::move(vec)).second)
      fail(source, line_no, "duplicate language '" + lang.code() + "'");
  }
  return set;
}

LanguageScalarTable parse_scalar_table(std::string_view input, std::string_view source) {
  LanguageScalarTable table;
  const auto all = text::lines(input);
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (text::trim(all[i]).empty()) continue;
    const auto cols = fields(all[i], '\t', 2, source, i + 1);
    auto lang = language_field(cols[0], source, i + 1);
    if (!table.values.emplace(lang, number_field(cols[1], source, i + 1)).second)
      fail(source, i + 1, "duplicate language '" + lang.code() + "'");
  }
  return table;
}

std::vector<std::string> parse_phrase_list(std::string_view input, std::string_view) {
  std::vector<std::string> out;
  for (const auto line : text::lines(input)) {
    const auto trimmed = text::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    out.push_back(text::join(text::split_whitespace(text::to_lower(trimmed)), " "));
  }
  return out;
}

std::optional<ResourceKind> parse_resource_kind(std::string_view name) {
  static const std::map<std::string_view, ResourceKind> kinds = {
      {"lexicon", ResourceKind::Lexicon},
      {"parallel", ResourceKind::Parallel},
      {"distances", ResourceKind::Distances},
      {"zero_shot", ResourceKind::ZeroShot},
      {"emotion_lexicon", ResourceKind::EmotionLexicon},
      {"areas", ResourceKind::Areas},
      {"language_vectors", ResourceKind::LanguageVectors},
      {"scalar_table", ResourceKind::ScalarTable},
  };
  const auto it = kinds.find(name);
  if (it == kinds.end()) return std::nullopt;
  return it->second;
}

Resource parse_tabular_resource(std::string_view input, std::string_view kind,
                                std::string_view source) {
  const auto parsed = parse_resource_kind(kind);
  if (!parsed) throw ValidationError("unknown resource kind '" + std::string(kind) + "'");
  switch (*parsed) {
    case ResourceKind::Lexicon: {
      auto [from, to] = lexicon_direction(source);
      return parse_lexicon(input, from, to, source);
    }
    case ResourceKind::Parallel: {
      const auto sep = input.find("\n|||\n");
      if (sep == std::string_view::npos) fail(source, 0, "parallel resource needs a '|||' separator line");
      auto [first, second] = lexicon_direction(source);
      return parse_parallel(input.substr(0, sep + 1), input.substr(sep + 5), first, second, source);
    }
    case ResourceKind::Distances: return parse_distances(input, source);
    case ResourceKind::ZeroShot: return parse_zero_shot(input, {}, source);
    case ResourceKind::EmotionLexicon: return parse_emotion_lexicon(input, source);
    case ResourceKind::Areas: return parse_areas(input, source);
    case ResourceKind::LanguageVectors: return parse_language_vectors(input, source);
    case ResourceKind::ScalarTable: return parse_scalar_table(input, source);
  }
  throw ValidationError("unhandled resource kind");
}

// ---------------------------------------------------------------------------

std::string serialize(const TaggedCorpus& corpus) {
  std::string out;
  for (const auto& sentence : corpus.sentences) {
    for (std::size_t i = 0; i < sentence.size(); ++i) {
      out += std::to_string(i + 1) + "\t" + sentence[i].surface + "\t_\t" +
             std::string(upos_name(sentence[i].upos)) + "\t_\t_\t_\t_\t_\t_\n";
    }
    out += "\n";
  }
  return out;
}

std::string serialize(const RawCorpus& corpus) {
  std::string out;
  for (const auto& sentence : corpus.sentences) out += text::join(sentence, " ") + "\n";
  return out;
}

std::string serialize(const EmbeddingSet& embeddings) {
  std::string out = std::to_string(embeddings.size()) + " " + std::to_string(embeddings.dim()) + "\n";
  for (std::size_t i = 0; i < embeddings.size(); ++i) {
    out += embeddings.words()[i];
    for (const double v : embeddings.row(i)) out += " " + text::format_double(v);
    out += "\n";
  }
  return out;
}

std::string serialize(const BilingualLexicon& lexicon) {
  std::string out;
  for (const auto& [word, translations] : lexicon.entries)
    for (const auto& t : translations) out += word + "\t" + t + "\n";
  return out;
}

std::pair<std::string, std::string> serialize(const ParallelCorpus& corpus) {
  std::string a, b;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    a += text::join(corpus.first_side[i], " ") + "\n";
    b += text::join(corpus.second_side[i], " ") + "\n";
  }
  return {a, b};
}

std::string serialize(const ZeroShotTable& table) {
  std::string out = "transfer,target,score\n";
  for (const auto& [pair, score] : table.scores)
    out += pair.transfer.code() + "," + pair.target.code() + "," + text::format_double(score) + "\n";
  return out;
}

std::string serialize(const DistanceTables& tables) {
  std::string out = "facet,lang1,lang2,value\n";
  for (const auto& [facet, table] : tables)
    for (const auto& [pair, value] : table.values)
      out += std::string(facet_name(facet)) + "," + pair.first.code() + "," + pair.second.code() +
             "," + text::format_double(value) + "\n";
  return out;
}

std::string serialize(const EmotionLexicon& lexicon) {
  std::string out;
  for (const auto& concept_name : lexicon.concepts)
    for (const auto& [lang, concepts] : lexicon.words)
      if (auto it = concepts.find(concept_name); it != concepts.end())
        for (const auto& word : it->second) out += concept_name + "\t" + lang.code() + "\t" + word + "\n";
  return out;
}

std::string serialize(const CulturalAreaMap& areas) {
  std::string out;
  for (const auto& [lang, area] : areas.areas) out += lang.code() + "\t" + area + "\n";
  return out;
}

std::string serialize(const LanguageVectorSet& vectors) {
  std::string out;
  for (const auto& [lang, vec] : vectors.vectors) {
    out += lang.code() + "\t";
    for (std::size_t i = 0; i < vec.size(); ++i) {
      if (i) out += " ";
      out += text::format_double(vec[i]);
    }
    out += "\n";
  }
  return out;
}

std::string serialize(const LanguageScalarTable& table) {
  std::string out;
  for (const auto& [lang, value] : table.values) out += lang.code() + "\t" + text::format_double(value) + "\n";
  return out;
}

}  // namespace pragrank
