#include "pragrank/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <map>
#include <set>

#include "pragrank/ingest.hpp"
#include "pragrank/text.hpp"

namespace pragrank::synthetic {

namespace fs = std::filesystem;

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::size_t Rng::below(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }

Eigen::MatrixXd random_rotation(std::size_t dim, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < n; ++i)
    if (r(i, i) < 0) q.col(i) = -q.col(i);
  if (q.determinant() < 0) q.col(0) = -q.col(0);
  return q;
}

namespace {

struct AreaInfo {
  const char* name;
  std::array<const char*, 4> codes;
  double x, y;
};

const std::array<AreaInfo, 4> kAreas{{
    {"West Europe", {"en", "de", "fr", "es"}, -1.0, 0.6},
    {"East Asia", {"ja", "ko", "zh", "vi"}, 1.0, 0.8},
    {"Middle East", {"ar", "tr", "fa", "he"}, -0.2, -0.9},
    {"South Asia", {"hi", "bn", "ta", "ur"}, 0.9, -0.7},
}};

const std::array<const char*, 24> kEmotionConcepts{
    "joy",    "sadness", "anger",   "fear",    "surprise", "disgust", "trust",   "shame",
    "guilt",  "pride",   "love",    "envy",    "grief",    "hope",    "anxiety", "relief",
    "regret", "awe",     "longing", "comfort", "contempt", "delight", "worry",   "calm"};

constexpr std::size_t kEmotionWords = 2;
constexpr std::size_t kPronounConcepts = 8;
constexpr std::size_t kVerbConcepts = 24;
constexpr std::size_t kAuxConcepts = 4;
constexpr std::size_t kIdioms = 12;

std::string concept_form(const LanguageId& lang, std::size_t area, std::size_t c) {
  // Some general concepts share one form across an area.
  const std::size_t general_start = kEmotionConcepts.size() * kEmotionWords + kPronounConcepts + kVerbConcepts;
  if (c >= general_start && c % 5 == 0) return "a" + std::to_string(area) + "w" + std::to_string(c);
  return lang.code() + "w" + std::to_string(c);
}

struct Lang {
  LanguageId id;
  std::size_t area;
  double cx, cy;  // cultural position
  double gx, gy;  // geographic position
  double pron_rate, verb_rate;
  std::vector<std::vector<std::size_t>> idioms;
  Eigen::MatrixXd rotation;
  std::vector<std::string> forms;
};

double culture_distance(const Lang& a, const Lang& b) { return std::hypot(a.cx - b.cx, a.cy - b.cy); }
double geo_distance(const Lang& a, const Lang& b) { return std::hypot(a.gx - b.gx, a.gy - b.gy); }

}  // namespace

std::vector<LanguageId> language_codes(std::size_t count) {
  if (count > 16) throw ValidationError("language_codes: at most 16 synthetic languages");
  std::vector<LanguageId> out;
  for (std::size_t i = 0; i < count; ++i) out.emplace_back(kAreas[i % 4].codes[i / 4]);
  return out;
}

std::string area_of(const LanguageId& language) {
  for (const auto& a : kAreas)
    for (const auto* c : a.codes)
      if (language.code() == c) return a.name;
  throw ValidationError("area_of: unknown synthetic language '" + language.code() + "'");
}

std::string write_corpus_fixture(const std::string& dir, const CorpusFixtureOptions& o) {
  Rng rng(o.seed);
  const auto codes = language_codes(o.languages);
  const std::size_t emotion_end = kEmotionConcepts.size() * kEmotionWords;
  const std::size_t pron_end = emotion_end + kPronounConcepts;
  const std::size_t verb_end = pron_end + kVerbConcepts;
  const std::size_t aux_end = verb_end + kAuxConcepts;
  if (o.vocabulary < aux_end + 40) throw ValidationError("write_corpus_fixture: vocabulary too small");
  const std::size_t general = o.vocabulary - aux_end;

  std::vector<Lang> langs;
  for (const auto& id : codes) {
    Lang l;
    l.id = id;
    for (std::size_t a = 0; a < kAreas.size(); ++a)
      if (area_of(id) == kAreas[a].name) l.area = a;
    l.cx = kAreas[l.area].x + 0.25 * rng.normal();
    l.cy = kAreas[l.area].y + 0.25 * rng.normal();
    l.gx = kAreas[l.area].x + 0.35 * rng.normal();
    l.gy = kAreas[l.area].y + 0.35 * rng.normal();
    l.pron_rate = 0.03 + 0.05 / (1.0 + std::exp(-2.0 * l.cx));
    l.verb_rate = 0.08 + 0.06 / (1.0 + std::exp(-2.0 * l.cy));
    for (std::size_t k = 0; k < kIdioms; ++k) {
      std::vector<std::size_t> idiom(2 + k % 2);
      for (auto& c : idiom) c = aux_end + rng.below(general);
      l.idioms.push_back(idiom);
    }
    l.rotation = random_rotation(o.embedding_dim, rng);
    for (std::size_t c = 0; c < o.vocabulary; ++c) l.forms.push_back(concept_form(id, l.area, c));
    langs.push_back(std::move(l));
  }

  // Zipf-like pick over general concepts.
  const auto general_word = [&](Rng& r) {
    const double u = r.uniform();
    return aux_end + std::min(general - 1, static_cast<std::size_t>(std::pow(u, 2.0) * static_cast<double>(general)));
  };
  const auto concept_sentence = [&](const Lang& l, Rng& r, bool with_idiom) {
    std::vector<std::size_t> s;
    const std::size_t len = 6 + r.below(8);
    for (std::size_t i = 0; i < len; ++i) s.push_back(general_word(r));
    if (with_idiom) {
      const auto& idiom = l.idioms[r.below(l.idioms.size())];
      const std::size_t at = r.below(s.size() + 1);
      s.insert(s.begin() + static_cast<std::ptrdiff_t>(at), idiom.begin(), idiom.end());
    }
    return s;
  };

  const fs::path root(dir);
  std::string manifest = "[run]\nseed = " + std::to_string(o.seed) + "\noutput = \"out\"\nlanguages = [";
  for (std::size_t i = 0; i < langs.size(); ++i) manifest += (i ? ", \"" : "\"") + langs[i].id.code() + "\"";
  manifest += "]\n\n[global]\ndistances = \"distances.csv\"\nemotion_lexicon = \"emotions.tsv\"\n"
              "areas = \"areas.tsv\"\nlanguage_vectors = \"language_vectors.tsv\"\nwiki_sizes = \"wiki_sizes.csv\"\n\n"
              "[task.sa]\nzero_shot = \"zero_shot_sa.csv\"\nsizes = \"sizes_sa.csv\"\n\n"
              "[task.dep]\nzero_shot = \"zero_shot_dep.csv\"\nsizes = \"sizes_dep.csv\"\n";

  // Shared concept vectors; emotion concepts drift with cultural position.
  std::vector<Eigen::VectorXd> base(o.vocabulary);
  for (auto& v : base) {
    v.resize(static_cast<Eigen::Index>(o.embedding_dim));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.normal();
    v.normalize();
  }
  std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> drift(kEmotionConcepts.size());
  for (auto& [u, w] : drift) {
    u.resize(static_cast<Eigen::Index>(o.embedding_dim));
    w.resize(static_cast<Eigen::Index>(o.embedding_dim));
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      u(i) = rng.normal();
      w(i) = rng.normal();
    }
    u.normalize();
    w.normalize();
  }

  EmotionLexicon emotions;
  for (const auto* name : kEmotionConcepts) emotions.concepts.emplace_back(name);

  for (auto& l : langs) {
    const std::string code = l.id.code();
    Rng lr(o.seed * 1000003 + text::fnv1a64(code) % 1000);

    TaggedCorpus tagged;
    for (std::size_t s = 0; s < o.tagged_sentences; ++s) {
      std::vector<TaggedToken> sent;
      const std::size_t len = 6 + lr.below(10);
      for (std::size_t i = 0; i < len; ++i) {
        const double u = lr.uniform();
        if (u < l.pron_rate) {
          sent.push_back({l.forms[emotion_end + lr.below(kPronounConcepts)], Upos::PRON});
        } else if (u < l.pron_rate + l.verb_rate) {
          sent.push_back({l.forms[pron_end + lr.below(kVerbConcepts)], Upos::VERB});
        } else if (u < l.pron_rate + l.verb_rate + 0.03) {
          sent.push_back({l.forms[verb_end + lr.below(kAuxConcepts)], Upos::AUX});
        } else {
          static constexpr std::array<Upos, 4> kOpen{Upos::NOUN, Upos::ADJ, Upos::ADP, Upos::ADV};
          sent.push_back({l.forms[general_word(lr)], kOpen[lr.below(kOpen.size())]});
        }
      }
      tagged.sentences.push_back(std::move(sent));
    }
    text::write_file((root / "tagged" / (code + ".conllu")).string(), serialize(tagged));

    for (const char* domain : {"a", "b"}) {
      RawCorpus raw;
      for (std::size_t s = 0; s < o.raw_sentences; ++s) {
        Sentence words;
        for (const auto c : concept_sentence(l, lr, lr.uniform() < 0.35)) words.push_back(l.forms[c]);
        raw.sentences.push_back(std::move(words));
      }
      text::write_file((root / "raw" / (code + "." + domain + ".txt")).string(), serialize(raw));
    }

    EmbeddingSet emb(l.id, o.embedding_dim);
    for (std::size_t c = 0; c < o.vocabulary; ++c) {
      Eigen::VectorXd v = base[c];
      for (Eigen::Index i = 0; i < v.size(); ++i) v(i) += 0.02 * lr.normal();
      if (c < emotion_end) {
        const auto& [u, w] = drift[c / kEmotionWords];
        v += 0.6 * (l.cx * u + l.cy * w);
      }
      v.normalize();
      const Eigen::VectorXd r = l.rotation * v;
      emb.add(l.forms[c], std::span<const double>(r.data(), static_cast<std::size_t>(r.size())));
    }
    text::write_file((root / "embeddings" / (code + ".vec")).string(), serialize(emb));

    for (std::size_t k = 0; k < kEmotionConcepts.size(); ++k)
      for (std::size_t j = 0; j < kEmotionWords; ++j)
        emotions.words[l.id][kEmotionConcepts[k]].push_back(l.forms[k * kEmotionWords + j]);

    manifest += "\n[language." + code + "]\ntagged = \"tagged/" + code + ".conllu\"\nraw_a = \"raw/" + code +
                ".a.txt\"\nraw_b = \"raw/" + code + ".b.txt\"\nembeddings = \"embeddings/" + code + ".vec\"\n";
  }

  // Gold MWE lists: the planted idioms, some extended by a word, plus noise.
  for (std::size_t i = 0; i < std::min(o.gold_languages, langs.size()); ++i) {
    const auto& l = langs[i];
    Rng gr(o.seed + 17 * (i + 1));
    std::string gold = "# gold phrases\n";
    for (std::size_t k = 0; k < l.idioms.size(); ++k) {
      std::vector<std::string> words;
      for (const auto c : l.idioms[k]) words.push_back(l.forms[c]);
      if (k % 3 == 0) words.push_back(l.forms[general_word(gr)]);
      gold += text::join(words, " ") + "\n";
    }
    for (std::size_t k = 0; k < 20; ++k)
      gold += l.forms[general_word(gr)] + " " + l.forms[general_word(gr)] + " " + l.forms[general_word(gr)] + "\n";
    const auto path = "gold/" + l.id.code() + ".txt";
    text::write_file((root / path).string(), gold);
    const auto pos = manifest.find("[language." + l.id.code() + "]\n");
    const auto end = manifest.find("\n\n", pos);
    manifest.insert(end == std::string::npos ? manifest.size() - 1 : end, "\ngold_mwes = \"" + path + "\"");
  }

  text::write_file((root / "emotions.tsv").string(), serialize(emotions));

  std::string lexicon_section = "\n[lexicon]\n", parallel_section = "\n[parallel]\n";
  DistanceTables distances;
  for (const auto f : {DistanceFacet::Geo, DistanceFacet::Gen, DistanceFacet::Inv, DistanceFacet::Syn,
                       DistanceFacet::Phon, DistanceFacet::Feat})
    distances[f].facet = f;
  ZeroShotTable sa{"sa", {}}, dep{"dep", {}};

  double max_culture = 1e-9, max_geo = 1e-9;
  for (const auto& a : langs)
    for (const auto& b : langs) {
      max_culture = std::max(max_culture, culture_distance(a, b));
      max_geo = std::max(max_geo, geo_distance(a, b));
    }

  LanguageScalarTable sizes_sa, sizes_dep, wiki;
  LanguageVectorSet vectors{o.language_vector_dim, {}};
  Rng tr(o.seed * 31 + 5);
  for (const auto& l : langs) {
    sizes_sa.values[l.id] = std::round(tr.uniform(2000, 40000));
    sizes_dep.values[l.id] = std::round(tr.uniform(1000, 20000));
    wiki.values[l.id] = std::round(std::pow(10.0, tr.uniform(4.5, 6.8)));
    std::vector<double> v(o.language_vector_dim);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = (i % 2 ? l.cy : l.cx) * 0.3 + 0.1 * tr.normal();
    vectors.vectors[l.id] = v;
  }

  for (std::size_t i = 0; i < langs.size(); ++i) {
    for (std::size_t j = i + 1; j < langs.size(); ++j) {
      const auto& a = langs[i];
      const auto& b = langs[j];
      const auto key = std::minmax(a.id, b.id);
      const double cd = culture_distance(a, b) / max_culture;
      const double gd = geo_distance(a, b) / max_geo;
      const bool same_area = a.area == b.area;
      const auto clip = [](double v) { return std::clamp(v, 0.0, 1.0); };
      distances[DistanceFacet::Geo].values[{key.first, key.second}] = clip(gd);
      distances[DistanceFacet::Gen].values[{key.first, key.second}] = clip((same_area ? 0.4 : 0.85) + 0.05 * tr.normal());
      distances[DistanceFacet::Inv].values[{key.first, key.second}] = clip(0.5 + 0.15 * tr.normal());
      distances[DistanceFacet::Syn].values[{key.first, key.second}] = clip(0.2 + 0.6 * cd + 0.08 * tr.normal());
      distances[DistanceFacet::Phon].values[{key.first, key.second}] = clip(0.5 + 0.15 * tr.normal());
      distances[DistanceFacet::Feat].values[{key.first, key.second}] = clip(0.3 + 0.4 * cd + 0.1 * tr.normal());

      for (const auto& [tf, tg] : {std::pair{&a, &b}, std::pair{&b, &a}}) {
        const double c = culture_distance(*tf, *tg) / max_culture;
        const double g = geo_distance(*tf, *tg) / max_geo;
        const double size = std::log10(sizes_sa.values[tf->id]);
        sa.scores[{tf->id, tg->id}] = 85.0 - 35.0 * c - 8.0 * g + 2.0 * size + 0.5 * tr.normal();
        const double syn = distances[DistanceFacet::Syn].values[{key.first, key.second}];
        dep.scores[{tf->id, tg->id}] = 75.0 - 30.0 * syn - 5.0 * g + 0.5 * tr.normal();
      }

      // Full concept lexicon, stored once per unordered pair.
      BilingualLexicon lex{key.first, key.second, {}};
      const Lang& src = a.id == key.first ? a : b;
      const Lang& dst = a.id == key.first ? b : a;
      for (std::size_t c = 0; c < o.vocabulary; ++c) lex.entries[src.forms[c]].insert(dst.forms[c]);
      const std::string stem = key.first.code() + "-" + key.second.code();
      text::write_file((root / "lexicons" / (stem + ".tsv")).string(), serialize(lex));
      lexicon_section += stem + " = \"lexicons/" + stem + ".tsv\"\n";

      // Idioms render literally with a probability that falls with cultural
      // distance.
      const double literal = 0.95 - 0.7 * cd;
      Rng pr(o.seed * 7919 + i * 131 + j);
      ParallelCorpus par{src.id, dst.id, {}, {}};
      for (std::size_t s = 0; s < o.parallel_sentences; ++s) {
        const Lang& owner = pr.uniform() < 0.5 ? src : dst;
        const auto concepts = concept_sentence(owner, pr, pr.uniform() < 0.7);
        std::set<std::size_t> idiom_words;
        for (const auto& idiom : owner.idioms) idiom_words.insert(idiom.begin(), idiom.end());
        Sentence own, other;
        for (const auto c : concepts) {
          own.push_back(owner.forms[c]);
          const Lang& partner = &owner == &src ? dst : src;
          std::size_t rendered = c;
          if (idiom_words.count(c) && pr.uniform() >= literal) rendered = aux_end + pr.below(general);
          other.push_back(partner.forms[rendered]);
        }
        if (&owner == &src) {
          par.first_side.push_back(std::move(own));
          par.second_side.push_back(std::move(other));
        } else {
          par.first_side.push_back(std::move(other));
          par.second_side.push_back(std::move(own));
        }
      }
      const auto [first_text, second_text] = serialize(par);
      const auto first_path = "parallel/" + stem + "." + src.id.code() + ".txt";
      const auto second_path = "parallel/" + stem + "." + dst.id.code() + ".txt";
      text::write_file((root / first_path).string(), first_text);
      text::write_file((root / second_path).string(), second_text);
      parallel_section += stem + " = [\"" + first_path + "\", \"" + second_path + "\"]\n";
    }
  }

  text::write_file((root / "distances.csv").string(), serialize(distances));
  text::write_file((root / "zero_shot_sa.csv").string(), serialize(sa));
  text::write_file((root / "zero_shot_dep.csv").string(), serialize(dep));
  text::write_file((root / "sizes_sa.csv").string(), serialize(sizes_sa));
  text::write_file((root / "sizes_dep.csv").string(), serialize(sizes_dep));
  text::write_file((root / "wiki_sizes.csv").string(), serialize(wiki));
  text::write_file((root / "language_vectors.tsv").string(), serialize(vectors));
  CulturalAreaMap areas;
  for (const auto& l : langs) areas.areas[l.id] = kAreas[l.area].name;
  text::write_file((root / "areas.tsv").string(), serialize(areas));

  manifest += lexicon_section + parallel_section;
  const auto manifest_path = (root / "manifest.toml").string();
  text::write_file(manifest_path, manifest);
  return manifest_path;
}

RankingDataset RankingFixture::dataset(const FeatureConfig& config) const {
  RankingDataset d;
  d.languages = languages;
  for (const auto& f : features) d.features[{f.transfer, f.target}] = project(f, config);
  d.zero_shot = zero_shot;
  return d;
}

RankingFixture ranking_fixture(std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  RankingFixture fx;
  fx.languages = language_codes(count);
  fx.zero_shot.task = "sa";
  struct Point {
    double x, y, size;
  };
  std::map<LanguageId, Point> pos;
  for (std::size_t i = 0; i < fx.languages.size(); ++i) {
    const auto& area = kAreas[i % 4];
    pos[fx.languages[i]] = {area.x + 0.3 * rng.normal(), area.y + 0.3 * rng.normal(), rng.uniform(3.0, 4.5)};
  }
  for (const auto& tf : fx.languages) {
    for (const auto& tg : fx.languages) {
      if (tf == tg) continue;
      const auto& a = pos[tf];
      const auto& b = pos[tg];
      const double cost = std::hypot(a.x - b.x, a.y - b.y) - 0.1 * a.size;
      fx.zero_shot.scores[{tf, tg}] = 100.0 - 20.0 * cost;
      PairFeatures f{tf, tg, {}, std::nullopt};
      f.slots[Slot::TfSize] = a.size;
      f.slots[Slot::TgSize] = b.size;
      f.slots[Slot::RatioSize] = a.size / b.size;
      f.slots[Slot::TtrTf] = 0.5 + 0.1 * a.size;
      f.slots[Slot::TtrTg] = 0.5 + 0.1 * b.size;
      f.slots[Slot::TtrDist] = 0.25 * cost * cost;
      f.slots[Slot::WordOverlap] = 0.5 / (1.0 + std::exp(4.0 * cost));
      f.slots[Slot::Geo] = cost;
      f.slots[Slot::Gen] = std::exp(cost);
      f.slots[Slot::Inv] = 1.0 - 3.0 * cost;
      f.slots[Slot::Syn] = 2.0 * cost;
      f.slots[Slot::Phon] = std::tanh(cost);
      f.slots[Slot::Feat] = cost * cost * cost;
      f.slots[Slot::LcrPron] = std::exp(-cost);
      f.slots[Slot::LcrVerb] = 1.0 + 0.5 * cost;
      f.slots[Slot::Ltq] = -cost;
      f.slots[Slot::Esd] = 0.5 + 0.25 * cost;
      f.slots[Slot::WikiSizeTf] = a.size + 2.0;
      fx.features.push_back(std::move(f));
    }
  }
  return fx;
}

}  // namespace pragrank::synthetic
