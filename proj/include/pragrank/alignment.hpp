#pragma once

// Supervised orthogonal alignment of two embedding spaces and the emotion
// semantics distance built on top of it.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pragrank/common.hpp"
#include "pragrank/ingest.hpp"

namespace pragrank {

/// Orthogonal map from the source embedding space into the target space.
struct AlignmentMatrix {
  LanguageId source;
  LanguageId target;
  Eigen::MatrixXd W;

  /// max |W^T W - I|
  double orthogonality_error() const;
};

using SeedPairs = std::vector<std::pair<std::string, std::string>>;

/// Solves min ||W X - Y||_F over orthogonal W where the columns of X and Y
/// are the seed pairs' vectors; W = U V^T from the SVD U S V^T of Y X^T.
/// Pairs with a word missing on either side are skipped. Throws
/// ValidationError when fewer than dim pairs remain or the seed matrix is
/// rank-deficient.
AlignmentMatrix procrustes_align(const EmbeddingSet& source, const EmbeddingSet& target,
                                 const SeedPairs& seed_pairs);

/// All (word, translation) pairs of a lexicon, in sorted order.
SeedPairs seed_pairs_from(const BilingualLexicon& lexicon);

inline constexpr std::size_t kDefaultMinConcepts = 8;

struct EsdResult {
  double distance = 0;
  std::size_t concepts_used = 0;
  std::size_t seed_pairs_used = 0;
};

/// Emotion semantics distance between a transfer and a target language:
/// aligns the transfer space onto the target space using the seed lexicon
/// with all emotion-word pairs removed, builds one unit vector per concept
/// and language (renormalized mean of in-vocabulary emotion words), and
/// averages 1 - cos(W v_tf, v_tg) over concepts present on both sides.
///
/// `seed_lexicon` may be given in either direction between the two
/// languages. Throws ValidationError with fewer than `min_concepts` usable
/// concepts.
EsdResult esd(const EmbeddingSet& transfer, const EmbeddingSet& target,
              const EmotionLexicon& emotions, const BilingualLexicon& seed_lexicon,
              std::size_t min_concepts = kDefaultMinConcepts);

/// Same as esd() with a precomputed alignment (transfer -> target).
EsdResult esd_with_alignment(const EmbeddingSet& transfer, const EmbeddingSet& target,
                             const EmotionLexicon& emotions, const AlignmentMatrix& alignment,
                             std::size_t min_concepts = kDefaultMinConcepts);

/// Seed pairs for ESD: the lexicon oriented transfer -> target, minus every
/// pair touching an emotion word of either language.
SeedPairs emotion_free_seeds(const LanguageId& transfer, const LanguageId& target,
                             const EmotionLexicon& emotions, const BilingualLexicon& seed_lexicon);

std::string serialize(const AlignmentMatrix& alignment);
AlignmentMatrix parse_alignment(std::string_view text, std::string_view source = {});

}  // namespace pragrank
