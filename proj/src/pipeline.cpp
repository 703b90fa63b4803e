#include "pragrank/pipeline.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <set>

#include "pragrank/alignment.hpp"
#include "pragrank/context_level.hpp"
#include "pragrank/ltq.hpp"
#include "pragrank/parallel.hpp"
#include "pragrank/text.hpp"

namespace pragrank {

namespace fs = std::filesystem;

namespace {

constexpr const char* kCacheVersion = "1";

struct Cache {
  std::string dir;
  std::size_t hits = 0;
  std::size_t misses = 0;

  std::string file(const std::string& kind, const std::string& key) const {
    return (fs::path(dir) / (kind + "-" + text::hex64(text::fnv1a64(key)) + ".txt")).string();
  }
  std::optional<std::string> get(const std::string& path) {
    if (!fs::is_regular_file(path)) return std::nullopt;
    return text::read_file(path);
  }
  // Written through a temporary so a concurrent or interrupted run never
  // sees a partial entry.
  static void put(const std::string& path, const std::string& contents) {
    const auto tmp = path + ".tmp" + text::hex64(text::fnv1a64(contents));
    text::write_file(tmp, contents);
    fs::rename(tmp, path);
  }
};

std::string content_key(const std::string& path) { return text::hex64(text::fnv1a64(text::read_file(path))); }

// Loaded per-language resources shared by featurize and analyze.
struct Loaded {
  std::vector<LanguageId> languages;
  std::map<LanguageId, CorpusStats> stats;
  std::map<LanguageId, std::set<std::string>> vocab;
  std::map<LanguageId, MweList> mwes;
  std::map<LanguageId, EmbeddingSet> embeddings;
  std::map<LanguageId, std::string> embedding_keys;
  std::optional<EmotionLexicon> emotions;
  std::optional<DistanceTables> distances;
  std::vector<std::string> warnings;
};

const std::string* lexicon_path(const RunManifest& m, const LanguageId& src, const LanguageId& tgt, bool& inverted) {
  if (const auto it = m.lexicons.find({src, tgt}); it != m.lexicons.end()) {
    inverted = false;
    return &it->second;
  }
  if (const auto it = m.lexicons.find({tgt, src}); it != m.lexicons.end()) {
    inverted = true;
    return &it->second;
  }
  return nullptr;
}

// Lexicon translating src -> tgt, from either stored direction.
std::optional<BilingualLexicon> load_lexicon(const RunManifest& m, const LanguageId& src, const LanguageId& tgt) {
  bool inverted = false;
  const auto* path = lexicon_path(m, src, tgt, inverted);
  if (!path) return std::nullopt;
  if (inverted) return parse_lexicon(text::read_file(*path), tgt, src, *path).inverted();
  return parse_lexicon(text::read_file(*path), src, tgt, *path);
}

std::optional<ParallelCorpus> load_parallel(const RunManifest& m, const LanguageId& a, const LanguageId& b) {
  for (const auto& key : {LanguagePair{a, b}, LanguagePair{b, a}}) {
    const auto it = m.parallel.find(key);
    if (it == m.parallel.end()) continue;
    return parse_parallel(text::read_file(it->second.first_path), text::read_file(it->second.second_path),
                          key.transfer, key.target, it->second.first_path);
  }
  return std::nullopt;
}

MweList cached_mwes(const LanguageId& lang, const LanguageResources& r, const MweOptions& opts, Cache& cache,
                    std::vector<std::string>& warnings) {
  const auto key = std::string("mwe|") + kCacheVersion + "|" + lang.code() + "|" + std::to_string(opts.k) + "|" +
                   std::to_string(opts.min_count) + "|" + std::to_string(opts.candidate_factor) + "|" +
                   content_key(*r.raw_a) + "|" + content_key(*r.raw_b);
  const auto path = cache.file("mwe", key);
  if (const auto hit = cache.get(path)) {
    ++cache.hits;
    return parse_mwe_list(*hit, lang, path);
  }
  ++cache.misses;
  auto extraction = extract_mwes(parse_raw_corpus(text::read_file(*r.raw_a), *r.raw_a),
                                 parse_raw_corpus(text::read_file(*r.raw_b), *r.raw_b), lang, opts);
  for (auto& w : extraction.warnings) warnings.push_back(lang.code() + ": " + w);
  Cache::put(path, serialize(extraction.mwes));
  return extraction.mwes;
}

Loaded load(const RunManifest& m, const PipelineOptions& options, Cache& cache, bool need_mwes, bool need_embeddings) {
  Loaded d;
  d.languages = m.languages;
  std::sort(d.languages.begin(), d.languages.end());

  std::vector<CorpusStats> stats(d.languages.size());
  std::vector<std::set<std::string>> vocab(d.languages.size());
  parallel_for(d.languages.size(), options.jobs, [&](std::size_t i) {
    const auto& lang = d.languages[i];
    const auto& path = *m.language.at(lang).tagged;
    const auto corpus = parse_conllu(text::read_file(path), path);
    stats[i] = corpus_stats(corpus, lang);
    for (const auto& s : corpus.sentences)
      for (const auto& t : s) vocab[i].insert(text::to_lower(t.surface));
  });
  for (std::size_t i = 0; i < d.languages.size(); ++i) {
    d.stats[d.languages[i]] = stats[i];
    d.vocab[d.languages[i]] = std::move(vocab[i]);
  }

  if (m.distances) d.distances = parse_distances(text::read_file(*m.distances), *m.distances);

  if (need_mwes) {
    std::vector<std::optional<MweList>> lists(d.languages.size());
    std::vector<std::vector<std::string>> warns(d.languages.size());
    std::vector<Cache> caches(d.languages.size(), Cache{cache.dir});
    parallel_for(d.languages.size(), options.jobs, [&](std::size_t i) {
      const auto& r = m.language.at(d.languages[i]);
      if (!r.raw_a || !r.raw_b) return;
      lists[i] = cached_mwes(d.languages[i], r, options.mwe, caches[i], warns[i]);
    });
    for (std::size_t i = 0; i < d.languages.size(); ++i) {
      cache.hits += caches[i].hits;
      cache.misses += caches[i].misses;
      d.warnings.insert(d.warnings.end(), warns[i].begin(), warns[i].end());
      if (lists[i])
        d.mwes[d.languages[i]] = std::move(*lists[i]);
      else
        d.warnings.push_back(d.languages[i].code() + ": no raw corpora, LTQ unavailable as target");
    }
  }

  if (need_embeddings) {
    if (m.emotion_lexicon) d.emotions = parse_emotion_lexicon(text::read_file(*m.emotion_lexicon), *m.emotion_lexicon);
    std::vector<std::optional<EmbeddingSet>> sets(d.languages.size());
    std::vector<std::string> keys(d.languages.size());
    parallel_for(d.languages.size(), options.jobs, [&](std::size_t i) {
      const auto& r = m.language.at(d.languages[i]);
      if (!r.embeddings) return;
      const auto contents = text::read_file(*r.embeddings);
      keys[i] = text::hex64(text::fnv1a64(contents));
      sets[i] = parse_embeddings(contents, d.languages[i], *r.embeddings);
    });
    for (std::size_t i = 0; i < d.languages.size(); ++i) {
      if (!sets[i]) {
        d.warnings.push_back(d.languages[i].code() + ": no embeddings, ESD unavailable");
        continue;
      }
      d.embeddings.emplace(d.languages[i], std::move(*sets[i]));
      d.embedding_keys[d.languages[i]] = keys[i];
    }
  }
  return d;
}

std::vector<LanguagePair> ordered_pairs(const std::vector<LanguageId>& langs) {
  std::vector<LanguagePair> out;
  for (const auto& tf : langs)
    for (const auto& tg : langs)
      if (tf != tg) out.push_back({tf, tg});
  return out;
}

// Raw LTQ for every ordered pair from per-target phrase lists, then
// z-normalized per target over its candidates.
std::map<LanguagePair, OptReal> compute_ltq(const RunManifest& m, const std::vector<LanguageId>& langs,
                                            const std::map<LanguageId, std::vector<std::string>>& phrases,
                                            unsigned jobs, std::vector<std::string>& warnings) {
  const auto pairs = ordered_pairs(langs);
  std::vector<OptReal> raw(pairs.size());
  std::vector<std::string> notes(pairs.size());
  parallel_for(pairs.size(), jobs, [&](std::size_t i) {
    const auto& [tf, tg] = pairs[i];
    const auto list = phrases.find(tg);
    if (list == phrases.end()) return;
    const auto lexicon = load_lexicon(m, tg, tf);
    const auto parallel = load_parallel(m, tf, tg);
    if (!lexicon || !parallel) {
      notes[i] = to_string(pairs[i]) + ": no " + std::string(!lexicon ? "lexicon" : "parallel corpus") + ", LTQ is NA";
      return;
    }
    raw[i] = ltq_raw(list->second, *lexicon, *parallel).raw;
    if (!raw[i]) notes[i] = to_string(pairs[i]) + ": no MWE occurs in the parallel corpus, LTQ is NA";
  });
  for (const auto& n : notes)
    if (!n.empty()) warnings.push_back(n);

  std::map<LanguageId, std::map<LanguageId, OptReal>> by_target;
  for (std::size_t i = 0; i < pairs.size(); ++i) by_target[pairs[i].target][pairs[i].transfer] = raw[i];
  std::map<LanguagePair, OptReal> out;
  for (const auto& [tg, raws] : by_target) {
    const auto present = std::count_if(raws.begin(), raws.end(), [](const auto& kv) { return kv.second.has_value(); });
    if (present < 2) {
      if (phrases.count(tg))
        warnings.push_back(tg.code() + ": fewer than two candidates with raw LTQ, LTQ is NA for this target");
      for (const auto& [tf, v] : raws) out[{tf, tg}] = std::nullopt;
      continue;
    }
    for (const auto& [tf, z] : ltq_normalize(raws)) out[{tf, tg}] = z;
  }
  return out;
}

std::map<LanguagePair, OptReal> compute_esd(const RunManifest& m, const Loaded& d, Cache& cache, unsigned jobs,
                                            std::vector<std::string>& warnings) {
  std::map<LanguagePair, OptReal> out;
  const auto pairs = ordered_pairs(d.languages);
  if (!d.emotions) {
    warnings.push_back("no emotion lexicon, ESD is NA for all pairs");
    for (const auto& p : pairs) out[p] = std::nullopt;
    return out;
  }
  std::vector<OptReal> values(pairs.size());
  std::vector<std::string> notes(pairs.size());
  std::vector<Cache> caches(pairs.size(), Cache{cache.dir});
  parallel_for(pairs.size(), jobs, [&](std::size_t i) {
    const auto& [tf, tg] = pairs[i];
    const auto a = d.embeddings.find(tf), b = d.embeddings.find(tg);
    if (a == d.embeddings.end() || b == d.embeddings.end()) return;
    const auto lexicon = load_lexicon(m, tf, tg);
    if (!lexicon) {
      notes[i] = to_string(pairs[i]) + ": no seed lexicon, ESD is NA";
      return;
    }
    try {
      const auto seeds = emotion_free_seeds(tf, tg, *d.emotions, *lexicon);
      std::string seed_text;
      for (const auto& [x, y] : seeds) seed_text += x + "\t" + y + "\n";
      const auto key = std::string("align|") + kCacheVersion + "|" + tf.code() + "|" + tg.code() + "|" +
                       d.embedding_keys.at(tf) + "|" + d.embedding_keys.at(tg) + "|" +
                       text::hex64(text::fnv1a64(seed_text));
      const auto path = caches[i].file("align", key);
      AlignmentMatrix alignment;
      if (const auto hit = caches[i].get(path)) {
        ++caches[i].hits;
        alignment = parse_alignment(*hit, path);
      } else {
        ++caches[i].misses;
        alignment = procrustes_align(a->second, b->second, seeds);
        Cache::put(path, serialize(alignment));
      }
      values[i] = esd_with_alignment(a->second, b->second, *d.emotions, alignment).distance;
    } catch (const ValidationError& e) {
      notes[i] = to_string(pairs[i]) + ": " + e.what() + ", ESD is NA";
    }
  });
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    cache.hits += caches[i].hits;
    cache.misses += caches[i].misses;
    if (!notes[i].empty()) warnings.push_back(notes[i]);
    out[pairs[i]] = values[i];
  }
  return out;
}

}  // namespace

std::string cache_directory(const RunManifest& manifest, const PipelineOptions& options) {
  if (options.cache_dir) return *options.cache_dir;
  if (const char* env = std::getenv("PRAGRANK_CACHE"); env && *env) return env;
  return (fs::path(manifest.output) / "cache").string();
}

FeatureConfig superset_config(const RunManifest& manifest) {
  FeatureConfig c = FeatureConfig::full();
  if (manifest.language_vectors) {
    c.base = FeatureConfig::Base::MTVec;
    c.add = std::set<Slot>(all_slots().begin(), all_slots().end());
  }
  return c;
}

FeaturizeResult featurize(const RunManifest& manifest, const FeatureConfig& config, const PipelineOptions& options) {
  const auto active = config.active_slots();
  const bool need_ltq = active.count(Slot::Ltq) > 0;
  const bool need_esd = active.count(Slot::Esd) > 0;

  Cache cache{cache_directory(manifest, options)};
  auto loaded = load(manifest, options, cache, need_ltq, need_esd);
  FeaturizeResult result;
  result.warnings = loaded.warnings;

  FeatureResources res;
  res.corpus_stats = loaded.stats;
  res.vocabularies = loaded.vocab;
  if (loaded.distances) res.distances = *loaded.distances;
  if (const auto t = manifest.tasks.find(options.task); t != manifest.tasks.end() && t->second.sizes)
    res.dataset_sizes = parse_scalar_table(text::read_file(*t->second.sizes), *t->second.sizes);
  if (manifest.language_vectors)
    res.language_vectors = parse_language_vectors(text::read_file(*manifest.language_vectors), *manifest.language_vectors);
  if (manifest.wiki_sizes) res.wiki_sizes = parse_scalar_table(text::read_file(*manifest.wiki_sizes), *manifest.wiki_sizes);

  if (need_ltq) {
    std::map<LanguageId, std::vector<std::string>> phrases;
    for (const auto& [lang, list] : loaded.mwes) phrases[lang] = list.phrases();
    res.ltq = compute_ltq(manifest, loaded.languages, phrases, options.jobs, result.warnings);
  }
  if (need_esd) res.esd = compute_esd(manifest, loaded, cache, options.jobs, result.warnings);

  for (const auto& pair : ordered_pairs(loaded.languages)) {
    auto assembled = assemble_features(pair, res, config);
    result.rows.push_back(std::move(assembled.features));
    result.warnings.insert(result.warnings.end(), assembled.warnings.begin(), assembled.warnings.end());
  }
  for (const auto& [lang, s] : loaded.stats) result.stats.push_back(s);
  result.mwes = std::move(loaded.mwes);
  result.cache_hits = cache.hits;
  result.cache_misses = cache.misses;
  return result;
}

ZeroShotTable load_zero_shot(const RunManifest& manifest, const std::string& task) {
  const auto it = manifest.tasks.find(text::to_lower(task));
  if (it == manifest.tasks.end()) throw ValidationError("manifest has no [task." + task + "] section");
  return parse_zero_shot(text::read_file(it->second.zero_shot), text::to_lower(task), it->second.zero_shot);
}

RankingDataset make_dataset(const std::vector<LanguageId>& languages, const std::vector<PairFeatures>& rows,
                            const ZeroShotTable& zero_shot, const FeatureConfig& config) {
  RankingDataset d;
  d.languages = languages;
  std::sort(d.languages.begin(), d.languages.end());
  const std::set<LanguageId> keep(d.languages.begin(), d.languages.end());
  for (const auto& r : rows)
    if (keep.count(r.transfer) && keep.count(r.target)) d.features[{r.transfer, r.target}] = project(r, config);
  d.zero_shot = zero_shot;
  return d;
}

TreeEnsemble train_all(const RankingDataset& dataset, const Hyperparameters& hp, std::uint64_t seed) {
  std::vector<LanguageId> langs = dataset.languages;
  std::sort(langs.begin(), langs.end());
  std::vector<RankingQuery> queries;
  for (const auto& tg : langs) {
    std::vector<PairFeatures> candidates;
    for (const auto& tf : langs) {
      if (tf == tg) continue;
      const auto it = dataset.features.find({tf, tg});
      if (it == dataset.features.end()) throw ValidationError("no feature record for " + to_string({tf, tg}));
      candidates.push_back(it->second);
    }
    queries.push_back(make_query(tg, std::move(candidates), dataset.zero_shot));
  }
  return train_lambdarank(queries, hp, seed);
}

AnalysisOutputs analyze(const RunManifest& manifest, const PipelineOptions& options) {
  AnalysisOutputs out;
  Cache cache{cache_directory(manifest, options)};
  auto d = load(manifest, options, cache, true, true);
  out.warnings = d.warnings;

  std::optional<CulturalAreaMap> areas;
  if (manifest.areas) areas = parse_areas(text::read_file(*manifest.areas), *manifest.areas);

  // Networks.
  const std::set<LanguageId> nodes(d.languages.begin(), d.languages.end());
  const auto esd = compute_esd(manifest, d, cache, options.jobs, out.warnings);
  std::string cohesion = "network,nodes,edges,within_area_fraction,reference\n";
  const auto emit_network = [&](const std::string& name, const PairDistances& dist, double ref) {
    try {
      const auto net = knn_network(dist, 2);
      out.files["network_" + name + ".dot"] = network_to_dot(net, areas ? *areas : CulturalAreaMap{}, name);
      std::string frac = "NA";
      if (areas) frac = text::format_double(within_area_fraction(net, *areas));
      cohesion += name + "," + std::to_string(net.nodes.size()) + "," + std::to_string(net.edges.size()) + "," +
                  frac + "," + text::format_double(ref) + "\n";
    } catch (const ValidationError& e) {
      out.warnings.push_back("network " + name + ": " + e.what());
    }
  };
  PairDistances esd_dist;
  bool esd_complete = true;
  for (const auto& [pair, v] : esd) {
    if (v) esd_dist[pair] = *v;
    else esd_complete = false;
  }
  if (esd_complete && !esd_dist.empty())
    emit_network("esd", esd_dist, reference::kEsdWithinArea);
  else
    out.warnings.push_back("network esd: ESD missing for some pairs, network skipped");
  if (d.distances && d.distances->count(DistanceFacet::Syn))
    emit_network("syntactic", pair_distances(d.distances->at(DistanceFacet::Syn), nodes),
                 reference::kSyntacticWithinArea);
  else
    out.warnings.push_back("network syntactic: no syntactic distances, network skipped");
  out.files["network_cohesion.csv"] = cohesion;

  // Geographic correlations over the pragmatic features.
  std::map<LanguageId, std::vector<std::string>> phrases;
  for (const auto& [lang, list] : d.mwes) phrases[lang] = list.phrases();
  const auto ltq_pmi = compute_ltq(manifest, d.languages, phrases, options.jobs, out.warnings);
  FeatureResources res;
  res.corpus_stats = d.stats;
  res.ltq = ltq_pmi;
  res.esd = esd;
  FeatureConfig pragmatic{FeatureConfig::Base::None, std::nullopt,
                          std::set<Slot>(proposed_slots().begin(), proposed_slots().end()), {}};
  std::map<LanguagePair, PairFeatures> features;
  for (const auto& pair : ordered_pairs(d.languages))
    features[pair] = assemble_features(pair, res, pragmatic).features;
  if (d.distances && d.distances->count(DistanceFacet::Geo))
    out.files["geo_correlations.csv"] = correlations_to_csv(geo_correlations(features, d.distances->at(DistanceFacet::Geo)));
  else
    out.warnings.push_back("geo correlations: no geographic distances");

  std::vector<CorpusStats> stats;
  for (const auto& [lang, s] : d.stats) stats.push_back(s);
  out.files["ratios.csv"] = ratios_to_csv(stats);

  // Gold MWE validation.
  std::map<LanguageId, std::vector<std::string>> gold;
  for (const auto& lang : d.languages) {
    const auto& r = manifest.language.at(lang);
    if (r.gold_mwes) gold[lang] = parse_phrase_list(text::read_file(*r.gold_mwes), *r.gold_mwes);
  }
  if (!gold.empty()) {
    const auto ltq_gold = compute_ltq(manifest, d.languages, gold, options.jobs, out.warnings);
    std::string csv = "language,bigram_pct,trigram_pct,ltq_gold_r\n";
    for (const auto& [lang, phrases_gold] : gold) {
      const auto mwe = d.mwes.find(lang);
      std::string bi = "NA", tri = "NA";
      if (mwe != d.mwes.end() && !phrases_gold.empty()) {
        const auto overlap = mwe_gold_overlap(mwe->second, phrases_gold);
        bi = text::format_fixed(overlap.bigram_pct, 1);
        tri = text::format_fixed(overlap.trigram_pct, 1);
      }
      std::map<LanguageId, double> a, b;
      for (const auto& tf : d.languages) {
        if (tf == lang) continue;
        const auto x = ltq_pmi.find({tf, lang}), y = ltq_gold.find({tf, lang});
        if (x == ltq_pmi.end() || y == ltq_gold.end() || !x->second || !y->second) continue;
        a[tf] = *x->second;
        b[tf] = *y->second;
      }
      std::string r = "NA";
      if (a.size() >= 3)
        if (const auto v = ltq_gold_correlation(a, b)) r = text::format_double(*v);
      csv += lang.code() + "," + bi + "," + tri + "," + r + "\n";
    }
    out.files["gold_mwe.csv"] = csv;
  }
  return out;
}

}  // namespace pragrank
