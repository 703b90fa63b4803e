#pragma once

// Deterministic synthetic resources for tests, demos and the bundled
// fixtures. Every generator is a pure function of its options and seed.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pragrank/evaluation.hpp"
#include "pragrank/features.hpp"

namespace pragrank::synthetic {

/// mt19937_64 with toolchain-independent real conversions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  /// Uniform integer in [0, n).
  std::size_t below(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

/// Haar-distributed orthogonal matrix with determinant +1.
Eigen::MatrixXd random_rotation(std::size_t dim, Rng& rng);

/// Up to 16 codes, interleaved across four areas so any prefix is balanced.
std::vector<LanguageId> language_codes(std::size_t count);
std::string area_of(const LanguageId& language);

struct CorpusFixtureOptions {
  std::size_t languages = 8;
  std::uint64_t seed = 7;
  std::size_t tagged_sentences = 300;
  std::size_t raw_sentences = 600;
  std::size_t parallel_sentences = 200;
  std::size_t vocabulary = 240;
  std::size_t embedding_dim = 16;
  std::size_t language_vector_dim = 512;
  /// Languages (by position) that also get a gold MWE list.
  std::size_t gold_languages = 2;
};

/// Writes a complete run (corpora, embeddings, lexicons, parallel corpora,
/// tables, manifest.toml) under `dir`. Returns the manifest path.
std::string write_corpus_fixture(const std::string& dir, const CorpusFixtureOptions& options = {});

/// Feature records whose slots encode the zero-shot order: every slot is a
/// deterministic function of the latent transfer cost behind the zero-shot
/// score (or of the language sizes that enter it).
struct RankingFixture {
  std::vector<LanguageId> languages;
  std::vector<PairFeatures> features;
  ZeroShotTable zero_shot;

  RankingDataset dataset(const FeatureConfig& config = FeatureConfig::langrank()) const;
};

RankingFixture ranking_fixture(std::size_t languages = 16, std::uint64_t seed = 11);

}  // namespace pragrank::synthetic
