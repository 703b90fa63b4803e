#include <doctest.h>

#include <cmath>

#include "pragrank/context_level.hpp"
#include "pragrank/synthetic.hpp"

using namespace pragrank;

namespace {

TaggedCorpus corpus_of(std::vector<std::vector<TaggedToken>> sentences) { return TaggedCorpus{std::move(sentences)}; }

CorpusStats with_rates(double ptr, double vtr) {
  CorpusStats s;
  s.ptr = ptr;
  s.vtr = vtr;
  return s;
}

}  // namespace

TEST_CASE("ptr and vtr count PRON and VERB, not AUX") {
  const auto s = corpus_stats(corpus_of({{{"did", Upos::AUX}, {"you", Upos::PRON}, {"eat", Upos::VERB}, {"lunch", Upos::NOUN}}}));
  CHECK(s.tokens == 4);
  CHECK(s.ptr == 0.25);
  CHECK(s.vtr == 0.25);
}

TEST_CASE("zero-pronoun sentence") {
  const auto s = corpus_stats(corpus_of({{{"먹었니", Upos::VERB}, {"점심", Upos::NOUN}}}));
  CHECK(s.ptr == 0.0);
  CHECK(s.vtr == 0.5);
}

TEST_CASE("empty corpus is an error") {
  CHECK_THROWS_AS(corpus_stats(TaggedCorpus{}), ValidationError);
  CHECK_THROWS_AS(corpus_stats(corpus_of({{}})), ValidationError);
}

TEST_CASE("rates match an independent tag-counting oracle") {
  synthetic::Rng rng(9);
  TaggedCorpus c;
  std::size_t pron = 0, verb = 0, total = 0;
  while (total < 1000) {
    std::vector<TaggedToken> sent;
    for (int i = 0; i < 10 && total < 1000; ++i, ++total) {
      const auto tag = static_cast<Upos>(rng.below(17));
      pron += tag == Upos::PRON;
      verb += tag == Upos::VERB;
      sent.push_back({"w" + std::to_string(rng.below(300)), tag});
    }
    c.sentences.push_back(sent);
  }
  const auto s = corpus_stats(c);
  CHECK(std::abs(s.ptr - static_cast<double>(pron) / 1000.0) <= 1e-12);
  CHECK(std::abs(s.vtr - static_cast<double>(verb) / 1000.0) <= 1e-12);
}

TEST_CASE("ttr is over lowercased forms within the cap") {
  const auto c = corpus_of({{{"The", Upos::DET}, {"the", Upos::DET}, {"cat", Upos::NOUN}, {"Cat", Upos::NOUN}}});
  CHECK(corpus_stats(c).ttr == 0.5);
  const auto capped = corpus_stats(c, LanguageId("en"), 2);
  CHECK(capped.ttr_window == 2);
  CHECK(capped.ttr == 0.5);
}

TEST_CASE("lcr ratios") {
  const auto same = with_rates(0.1, 0.2);
  const auto r = lcr(same, same);
  CHECK(r.pron == 1.0);
  CHECK(r.verb == 1.0);

  const auto hand = lcr(with_rates(0.10, 0.12), with_rates(0.05, 0.18));
  REQUIRE(hand.pron);
  REQUIRE(hand.verb);
  CHECK(*hand.pron == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(*hand.verb == doctest::Approx(1.5).epsilon(1e-15));

  const auto missing = lcr(with_rates(0.0, 0.1), with_rates(0.05, 0.1));
  CHECK_FALSE(missing.pron);
  CHECK(missing.verb == 1.0);
}
