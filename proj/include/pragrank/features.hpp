#pragma once

// Per-pair feature records: the LangRank baseline slots, the pragmatic
// slots, the Wikipedia-size slot and optional MTVec language vectors, plus
// the configuration language that selects which of them a run uses.

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pragrank/common.hpp"
#include "pragrank/context_level.hpp"
#include "pragrank/ingest.hpp"

namespace pragrank {

enum class Slot {
  TfSize, TgSize, RatioSize, TtrTf, TtrTg, TtrDist, WordOverlap,
  Geo, Gen, Inv, Syn, Phon, Feat,
  LcrPron, LcrVerb, Ltq, Esd, WikiSizeTf
};

inline constexpr std::size_t kSlotCount = 18;

std::string_view slot_name(Slot slot);
std::optional<Slot> parse_slot(std::string_view name);
const std::array<Slot, kSlotCount>& all_slots();

/// The 13 LangRank baseline slots.
const std::vector<Slot>& langrank_slots();
/// lcr_pron, lcr_verb, ltq, esd.
const std::vector<Slot>& proposed_slots();

enum class FeatureGroup { PretrainSpecific, DataSpecific, Typology, Geography, Orthography, Pragmatic };

std::string_view group_name(FeatureGroup group);
std::optional<FeatureGroup> parse_group(std::string_view name);
const std::vector<FeatureGroup>& all_groups();
const std::vector<Slot>& group_slots(FeatureGroup group);
/// Groups listing the slot. geo sits in both Typology and Geography; gen
/// belongs to none.
std::vector<FeatureGroup> groups_of(Slot slot);

struct PairFeatures {
  LanguageId transfer;
  LanguageId target;
  /// Active slots only; nullopt marks a missing value.
  std::map<Slot, OptReal> slots;
  /// Concatenated [v_tf ; v_tg] when the configuration uses MTVec.
  std::optional<std::vector<double>> mtvec;

  OptReal get(Slot slot) const;
  bool has(Slot slot) const { return slots.count(slot) > 0; }

  /// Flat feature names: active slot names in slot order, then mtvec_<i>.
  std::vector<std::string> names() const;
  /// Values aligned with names(); NaN for missing.
  std::vector<double> values() const;

  friend bool operator==(const PairFeatures&, const PairFeatures&) = default;
};

/// Which slots a run uses. Parsed from "key=value" text or a compact label
/// such as "langrank+all-esd" or "group:pragmatic".
struct FeatureConfig {
  enum class Base { LangRank, MTVec, Group, None };

  Base base = Base::LangRank;
  std::optional<FeatureGroup> group;
  std::set<Slot> add;
  std::set<Slot> remove;

  std::set<Slot> active_slots() const;
  bool uses_mtvec() const { return base == Base::MTVec; }
  std::string label() const;

  static FeatureConfig langrank();
  static FeatureConfig mtvec();
  static FeatureConfig of_group(FeatureGroup group);
  /// Everything: the 13 baseline slots, the proposed slots and wiki size.
  static FeatureConfig full();

  /// "key=value" lines with keys base, add, remove ('#' comments allowed).
  static FeatureConfig parse(std::string_view text, std::string_view source = {});
  /// Compact label form, e.g. "langrank", "mtvec+all", "langrank+all-ltq",
  /// "group:typology".
  static FeatureConfig from_label(std::string_view label);

  friend bool operator==(const FeatureConfig&, const FeatureConfig&) = default;
};

/// Expands a slot or a toggle name (lcr, ltq, esd, ttr, all) to slots.
std::vector<Slot> expand_slot_names(std::string_view name);

/// |A n B| / (|A| + |B|); missing when either vocabulary is empty.
OptReal word_overlap(const std::set<std::string>& a, const std::set<std::string>& b);

/// (1 - ttr_tf/ttr_tg)^2; missing when ttr_tg is zero.
OptReal ttr_distance(double ttr_tf, double ttr_tg);

/// [v_tf ; v_tg]. Throws ValidationError naming a missing language.
std::vector<double> mtvec_pair(const LanguageVectorSet& vectors, const LanguageId& transfer,
                               const LanguageId& target);

/// Everything assemble_features reads. LTQ and ESD arrive precomputed
/// because they need whole candidate sets or expensive alignments.
struct FeatureResources {
  std::map<LanguageId, CorpusStats> corpus_stats;
  std::map<LanguageId, std::set<std::string>> vocabularies;
  std::optional<LanguageScalarTable> dataset_sizes;
  DistanceTables distances;
  std::map<LanguagePair, OptReal> ltq;
  std::map<LanguagePair, OptReal> esd;
  std::optional<LanguageVectorSet> language_vectors;
  std::optional<LanguageScalarTable> wiki_sizes;
};

struct AssembledFeatures {
  PairFeatures features;
  std::vector<std::string> warnings;
};

AssembledFeatures assemble_features(const LanguagePair& pair, const FeatureResources& resources,
                                    const FeatureConfig& config);

/// Restricts a full record to the slots of `config`.
PairFeatures project(const PairFeatures& full, const FeatureConfig& config);

/// Long-format CSV "transfer,target,feature,value" sorted by pair, then
/// feature order; missing values are written as NA.
std::string features_to_csv(const std::vector<PairFeatures>& rows);
std::vector<PairFeatures> features_from_csv(std::string_view text, std::string_view source = {});

}  // namespace pragrank
