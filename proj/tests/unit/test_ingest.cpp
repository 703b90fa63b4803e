#include <doctest.h>

#include <cmath>

#include "pragrank/ingest.hpp"
#include "pragrank/synthetic.hpp"
#include "pragrank/text.hpp"

using namespace pragrank;

namespace {

std::string token_line(int id, const std::string& form, const std::string& upos) {
  return std::to_string(id) + "\t" + form + "\t_\t" + upos + "\t_\t_\t_\t_\t_\t_\n";
}

}  // namespace

TEST_CASE("parse_conllu extracts tokens and tags") {
  const auto corpus = parse_conllu("# sent_id = 1\n" + token_line(1, "Did", "AUX") + token_line(2, "eat", "VERB") + "\n");
  REQUIRE(corpus.sentences.size() == 1);
  REQUIRE(corpus.sentences[0].size() == 2);
  CHECK(corpus.sentences[0][0].upos == Upos::AUX);
  CHECK(corpus.sentences[0][1].upos == Upos::VERB);
  CHECK(corpus.sentences[0][0].surface == "Did");
}

TEST_CASE("parse_conllu skips multiword ranges and empty nodes") {
  const auto corpus = parse_conllu(token_line(1, "je", "PRON") + "2-3\tdu\t_\t_\t_\t_\t_\t_\t_\t_\n" +
                                   token_line(2, "de", "ADP") + token_line(3, "le", "DET") +
                                   "3.1\tx\t_\tX\t_\t_\t_\t_\t_\t_\n");
  REQUIRE(corpus.sentences.size() == 1);
  CHECK(corpus.token_count() == 3);
}

TEST_CASE("parse_conllu errors name the line") {
  try {
    parse_conllu(token_line(1, "a", "NOUN") + "2\tb\t_\tNOUN\n");
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse_conllu(token_line(1, "a", "NOTATAG")), FormatError);
  CHECK(parse_conllu("").sentences.empty());
}

TEST_CASE("parse_conllu token count matches a line-count oracle") {
  synthetic::Rng rng(3);
  std::string text;
  std::size_t expected = 0;
  const char* tags[] = {"NOUN", "VERB", "PRON", "AUX", "ADJ"};
  while (expected < 500) {
    text += "# comment\n";
    const int len = 1 + static_cast<int>(rng.below(12));
    for (int i = 1; i <= len; ++i) {
      if (rng.uniform() < 0.1) text += std::to_string(i) + "-" + std::to_string(i + 1) + "\tmw\t_\t_\t_\t_\t_\t_\t_\t_\n";
      text += token_line(i, "w" + std::to_string(rng.below(50)), tags[rng.below(5)]);
    }
    text += "\n";
    expected += static_cast<std::size_t>(len);
  }
  std::size_t oracle = 0;
  for (const auto line : text::lines(text)) {
    if (line.empty() || line.front() == '#') continue;
    const auto id = line.substr(0, line.find('\t'));
    if (id.find_first_of("-.") == std::string_view::npos) ++oracle;
  }
  CHECK(oracle == expected);
  CHECK(parse_conllu(text).token_count() == oracle);
}

TEST_CASE("parse_embeddings normalizes rows") {
  const auto e = parse_embeddings("2 3\na 1 0 0\nb 0 2 0\n");
  REQUIRE(e.size() == 2);
  const auto b = e.find("b");
  REQUIRE(b);
  CHECK((*b)[0] == 0.0);
  CHECK((*b)[1] == 1.0);
  CHECK_THROWS_AS(parse_embeddings("1 3\na 1 2\n"), FormatError);
  CHECK_THROWS(parse_embeddings("1 2\na 0 0\n"));
}

TEST_CASE("parse_embeddings random rows have unit norm") {
  synthetic::Rng rng(5);
  std::string text = "100 50\n";
  for (int i = 0; i < 100; ++i) {
    text += "w" + std::to_string(i);
    for (int j = 0; j < 50; ++j) text += " " + text::format_double(rng.normal() * 3.0);
    text += "\n";
  }
  const auto e = parse_embeddings(text);
  REQUIRE(e.size() == 100);
  for (std::size_t i = 0; i < e.size(); ++i) {
    double n = 0;
    for (const double v : e.row(i)) n += v * v;
    CHECK(std::abs(std::sqrt(n) - 1.0) <= 1e-9);
  }
}

TEST_CASE("lexicon rows merge into sets") {
  const auto lex = parse_lexicon("love\tliebe\nlove\tlieben\n", LanguageId("en"), LanguageId("de"));
  REQUIRE(lex.entries.count("love"));
  CHECK(lex.entries.at("love") == std::set<std::string>{"liebe", "lieben"});
  const auto inv = lex.inverted();
  CHECK(inv.source == LanguageId("de"));
  CHECK(inv.entries.at("liebe") == std::set<std::string>{"love"});
  CHECK(lexicon_direction("dir/en-de.tsv") == std::pair{LanguageId("en"), LanguageId("de")});
}

TEST_CASE("zero-shot table contract") {
  const auto t = parse_zero_shot("transfer,target,score\nar,tr,0.61\nko,tr,0.58\nja,tr,0.55\n", "sa");
  CHECK(t.lookup(LanguageId("ar"), LanguageId("tr")) == 0.61);
  CHECK_FALSE(t.lookup(LanguageId("tr"), LanguageId("ar")));
  CHECK_THROWS_AS(parse_zero_shot("transfer,target,score\nar,tr,0.61\nar,tr,0.6\n"), FormatError);
  CHECK_THROWS_AS(parse_zero_shot("transfer,target,score\nar,tr,high\n"), FormatError);
}

TEST_CASE("distance tables check range and symmetry") {
  CHECK_THROWS_AS(parse_distances("facet,lang1,lang2,value\ngeo,ar,tr,1.2\n"), FormatError);
  CHECK_THROWS_AS(parse_distances("facet,lang1,lang2,value\ngeo,ar,tr,0.2\ngeo,tr,ar,0.3\n"), FormatError);
  const auto t = parse_distances("facet,lang1,lang2,value\nsyn,ar,tr,0.2\n");
  const auto& syn = t.at(DistanceFacet::Syn);
  CHECK(syn.lookup(LanguageId("tr"), LanguageId("ar")) == 0.2);
  CHECK(syn.lookup(LanguageId("ar"), LanguageId("ar")) == 0.0);
}

TEST_CASE("tabular dispatch rejects unknown kinds") {
  CHECK_THROWS_AS(parse_tabular_resource("", "spreadsheet"), ValidationError);
  const auto r = parse_tabular_resource("love\tliebe\n", "lexicon", "en-de.tsv");
  CHECK(std::holds_alternative<BilingualLexicon>(r));
  const auto p = parse_tabular_resource("a b\n|||\nc d\n", "parallel", "en-de.txt");
  REQUIRE(std::holds_alternative<ParallelCorpus>(p));
  CHECK(std::get<ParallelCorpus>(p).size() == 1);
}

TEST_CASE("serialize/parse round-trips on random resources") {
  synthetic::Rng rng(17);
  const auto word = [&] { return "w" + std::to_string(rng.below(400)); };
  for (int round = 0; round < 20; ++round) {
    TaggedCorpus tc;
    for (int s = 0; s < 5; ++s) {
      std::vector<TaggedToken> sent;
      for (int i = 0; i < 1 + static_cast<int>(rng.below(6)); ++i)
        sent.push_back({word(), static_cast<Upos>(rng.below(17))});
      tc.sentences.push_back(sent);
    }
    CHECK(parse_conllu(serialize(tc)) == tc);

    RawCorpus rc;
    for (int s = 0; s < 5; ++s) {
      Sentence sent;
      for (int i = 0; i < 1 + static_cast<int>(rng.below(6)); ++i) sent.push_back(word());
      rc.sentences.push_back(sent);
    }
    CHECK(parse_raw_corpus(serialize(rc)) == rc);

    EmbeddingSet es(LanguageId("xx"), 4);
    for (int i = 0; i < 10; ++i) {
      std::vector<double> v{rng.normal(), rng.normal(), rng.normal(), rng.normal()};
      es.add("e" + std::to_string(i), v);
    }
    CHECK(parse_embeddings(serialize(es), LanguageId("xx")) == es);

    BilingualLexicon lex{LanguageId("en"), LanguageId("de"), {}};
    for (int i = 0; i < 10; ++i) lex.entries[word()].insert(word());
    CHECK(parse_lexicon(serialize(lex), LanguageId("en"), LanguageId("de")) == lex);

    ParallelCorpus pc{LanguageId("en"), LanguageId("de"), {}, {}};
    for (int i = 0; i < 4; ++i) {
      pc.first_side.push_back({word(), word()});
      pc.second_side.push_back({word()});
    }
    const auto [a, b] = serialize(pc);
    CHECK(parse_parallel(a, b, LanguageId("en"), LanguageId("de")) == pc);

    ZeroShotTable zt{"sa", {}};
    DistanceTables dt;
    LanguageScalarTable st;
    CulturalAreaMap am;
    LanguageVectorSet lv{3, {}};
    const auto langs = synthetic::language_codes(6);
    for (const auto& x : langs) {
      st.values[x] = rng.uniform(0, 1e6);
      am.areas[x] = synthetic::area_of(x);
      lv.vectors[x] = {rng.normal(), rng.normal(), rng.normal()};
      for (const auto& y : langs) {
        if (x == y) continue;
        zt.scores[{x, y}] = rng.uniform(0, 100);
        if (x < y) {
          dt[DistanceFacet::Geo].facet = DistanceFacet::Geo;
          dt[DistanceFacet::Geo].values[{x, y}] = rng.uniform();
        }
      }
    }
    CHECK(parse_zero_shot(serialize(zt), "sa") == zt);
    CHECK(parse_distances(serialize(dt)) == dt);
    CHECK(parse_scalar_table(serialize(st)) == st);
    CHECK(parse_areas(serialize(am)) == am);
    CHECK(parse_language_vectors(serialize(lv)) == lv);

    EmotionLexicon el;
    el.concepts = {"joy", "fear"};
    el.words[LanguageId("en")]["joy"] = {"joy", "delight"};
    el.words[LanguageId("en")]["fear"] = {"fear"};
    el.words[LanguageId("de")]["joy"] = {"freude"};
    CHECK(parse_emotion_lexicon(serialize(el)) == el);
  }
}
