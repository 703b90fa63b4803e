#include "pragrank/alignment.hpp"

#include <cmath>

#include "pragrank/text.hpp"

namespace pragrank {

namespace {

Eigen::Map<const Eigen::VectorXd> as_vector(std::span<const double> row) {
  return Eigen::Map<const Eigen::VectorXd>(row.data(), static_cast<Eigen::Index>(row.size()));
}

// Renormalized mean of the in-vocabulary vectors; empty when none is found
// or the mean vanishes.
std::optional<Eigen::VectorXd> concept_vector(const EmbeddingSet& emb,
                                              const std::vector<std::string>& words) {
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(emb.dim()));
  std::size_t found = 0;
  for (const auto& w : words) {
    if (const auto row = emb.find(w)) {
      sum += as_vector(*row);
      ++found;
    }
  }
  if (found == 0) return std::nullopt;
  const double norm = sum.norm();
  if (!(norm > 0)) return std::nullopt;
  return Eigen::VectorXd(sum / norm);
}

}  // namespace

double AlignmentMatrix::orthogonality_error() const {
  const auto n = W.cols();
  return (W.transpose() * W - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
}

AlignmentMatrix procrustes_align(const EmbeddingSet& source, const EmbeddingSet& target,
                                 const SeedPairs& seed_pairs) {
  if (source.dim() != target.dim())
    throw ValidationError("procrustes_align: dimension mismatch (" + std::to_string(source.dim()) +
                          " vs " + std::to_string(target.dim()) + ")");
  const auto dim = static_cast<Eigen::Index>(source.dim());

  std::vector<std::pair<std::span<const double>, std::span<const double>>> usable;
  for (const auto& [s, t] : seed_pairs) {
    const auto a = source.find(s);
    const auto b = target.find(t);
    if (a && b) usable.emplace_back(*a, *b);
  }
  if (usable.size() < source.dim())
    throw ValidationError("procrustes_align: " + std::to_string(usable.size()) +
                          " usable seed pairs, need at least " + std::to_string(source.dim()));

  // M = Y X^T accumulated column by column in seed order.
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& [x, y] : usable) M.noalias() += as_vector(y) * as_vector(x).transpose();

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || !(sv(0) > 0) || sv(sv.size() - 1) <= 1e-10 * sv(0))
    throw ValidationError("procrustes_align: rank-deficient seed matrix");

  AlignmentMatrix out{source.language(), target.language(), svd.matrixU() * svd.matrixV().transpose()};
  return out;
}

SeedPairs seed_pairs_from(const BilingualLexicon& lexicon) {
  SeedPairs out;
  for (const auto& [word, translations] : lexicon.entries)
    for (const auto& t : translations) out.emplace_back(word, t);
  return out;
}

SeedPairs emotion_free_seeds(const LanguageId& transfer, const LanguageId& target,
                             const EmotionLexicon& emotions, const BilingualLexicon& seed_lexicon) {
  BilingualLexicon oriented;
  if (seed_lexicon.source == transfer && seed_lexicon.target == target)
    oriented = seed_lexicon;
  else if (seed_lexicon.source == target && seed_lexicon.target == transfer)
    oriented = seed_lexicon.inverted();
  else
    throw ValidationError("esd: seed lexicon " + seed_lexicon.source.code() + "->" +
                          seed_lexicon.target.code() + " does not cover " + transfer.code() + "/" +
                          target.code());
  const auto tf_emotion = emotions.vocabulary(transfer);
  const auto tg_emotion = emotions.vocabulary(target);
  SeedPairs out;
  for (auto& [s, t] : seed_pairs_from(oriented))
    if (!tf_emotion.count(s) && !tg_emotion.count(t)) out.emplace_back(std::move(s), std::move(t));
  return out;
}

EsdResult esd_with_alignment(const EmbeddingSet& transfer, const EmbeddingSet& target,
                             const EmotionLexicon& emotions, const AlignmentMatrix& alignment,
                             std::size_t min_concepts) {
  const auto tf_words = emotions.words.find(LanguageId(transfer.language()));
  const auto tg_words = emotions.words.find(LanguageId(target.language()));
  EsdResult result;
  double sum = 0;
  if (tf_words != emotions.words.end() && tg_words != emotions.words.end()) {
    for (const auto& concept_name : emotions.concepts) {
      const auto a = tf_words->second.find(concept_name);
      const auto b = tg_words->second.find(concept_name);
      if (a == tf_words->second.end() || b == tg_words->second.end()) continue;
      const auto va = concept_vector(transfer, a->second);
      const auto vb = concept_vector(target, b->second);
      if (!va || !vb) continue;
      const Eigen::VectorXd mapped = alignment.W * *va;
      const double cosine = mapped.dot(*vb) / (mapped.norm() * vb->norm());
      sum += 1.0 - cosine;
      ++result.concepts_used;
    }
  }
  if (result.concepts_used < min_concepts)
    throw ValidationError("esd: only " + std::to_string(result.concepts_used) +
                          " emotion concepts available for " + transfer.language().code() + "/" +
                          target.language().code() + ", need " + std::to_string(min_concepts));
  result.distance = sum / static_cast<double>(result.concepts_used);
  return result;
}

EsdResult esd(const EmbeddingSet& transfer, const EmbeddingSet& target,
              const EmotionLexicon& emotions, const BilingualLexicon& seed_lexicon,
              std::size_t min_concepts) {
  const auto seeds = emotion_free_seeds(transfer.language(), target.language(), emotions, seed_lexicon);
  const auto alignment = procrustes_align(transfer, target, seeds);
  auto result = esd_with_alignment(transfer, target, emotions, alignment, min_concepts);
  result.seed_pairs_used = seeds.size();
  return result;
}

std::string serialize(const AlignmentMatrix& alignment) {
  std::string out = alignment.source.code() + " " + alignment.target.code() + " " +
                    std::to_string(alignment.W.rows()) + "\n";
  for (Eigen::Index r = 0; r < alignment.W.rows(); ++r) {
    for (Eigen::Index c = 0; c < alignment.W.cols(); ++c) {
      if (c) out += " ";
      out += text::format_double(alignment.W(r, c));
    }
    out += "\n";
  }
  return out;
}

AlignmentMatrix parse_alignment(std::string_view input, std::string_view source) {
  const auto all = text::lines(input);
  const auto fail = [&](std::size_t line) -> AlignmentMatrix {
    throw FormatError(std::string(source), line, "malformed alignment matrix");
  };
  if (all.empty()) return fail(1);
  const auto header = text::split_whitespace(all[0]);
  if (header.size() != 3) return fail(1);
  const auto n = text::parse_int(header[2]);
  if (!n || *n <= 0 || all.size() < static_cast<std::size_t>(*n) + 1) return fail(1);
  AlignmentMatrix out{LanguageId(header[0]), LanguageId(header[1]), Eigen::MatrixXd(*n, *n)};
  for (long long r = 0; r < *n; ++r) {
    const auto cells = text::split_whitespace(all[static_cast<std::size_t>(r) + 1]);
    if (cells.size() != static_cast<std::size_t>(*n)) return fail(static_cast<std::size_t>(r) + 2);
    for (long long c = 0; c < *n; ++c) {
      const auto v = text::parse_double(cells[static_cast<std::size_t>(c)]);
      if (!v) return fail(static_cast<std::size_t>(r) + 2);
      out.W(r, c) = *v;
    }
  }
  return out;
}

}  // namespace pragrank
