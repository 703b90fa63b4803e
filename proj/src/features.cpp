#include "pragrank/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pragrank/text.hpp"

namespace pragrank {

namespace {

constexpr std::array<std::string_view, kSlotCount> kSlotNames = {
    "tf_size", "tg_size", "ratio_size", "ttr_tf", "ttr_tg", "ttr_dist", "word_overlap",
    "geo", "gen", "inv", "syn", "phon", "feat",
    "lcr_pron", "lcr_verb", "ltq", "esd", "wiki_size_tf"};

constexpr std::array<std::string_view, 6> kGroupNames = {
    "Pretrain-specific", "Data-specific", "Typology", "Geography", "Orthography", "Pragmatic"};

std::string normalize_name(std::string_view s) {
  auto out = text::to_lower(text::trim(s));
  std::replace(out.begin(), out.end(), '_', '-');
  std::replace(out.begin(), out.end(), ' ', '-');
  return out;
}

OptReal distance(const FeatureResources& r, DistanceFacet facet, const LanguagePair& pair) {
  const auto it = r.distances.find(facet);
  if (it == r.distances.end()) return std::nullopt;
  return it->second.lookup(pair.transfer, pair.target);
}

OptReal scalar(const std::optional<LanguageScalarTable>& table, const LanguageId& lang) {
  if (!table) return std::nullopt;
  const auto it = table->values.find(lang);
  if (it == table->values.end()) return std::nullopt;
  return it->second;
}

const CorpusStats* stats_of(const FeatureResources& r, const LanguageId& lang) {
  const auto it = r.corpus_stats.find(lang);
  return it == r.corpus_stats.end() ? nullptr : &it->second;
}

}  // namespace

std::string_view slot_name(Slot slot) { return kSlotNames[static_cast<std::size_t>(slot)]; }

std::optional<Slot> parse_slot(std::string_view name) {
  auto lowered = text::to_lower(text::trim(name));
  std::replace(lowered.begin(), lowered.end(), '-', '_');
  for (std::size_t i = 0; i < kSlotNames.size(); ++i)
    if (kSlotNames[i] == lowered) return static_cast<Slot>(i);
  return std::nullopt;
}

const std::array<Slot, kSlotCount>& all_slots() {
  static const auto slots = [] {
    std::array<Slot, kSlotCount> out{};
    for (std::size_t i = 0; i < kSlotCount; ++i) out[i] = static_cast<Slot>(i);
    return out;
  }();
  return slots;
}

const std::vector<Slot>& langrank_slots() {
  static const std::vector<Slot> slots = {Slot::TfSize, Slot::TgSize,  Slot::RatioSize, Slot::TtrTf,
                                          Slot::TtrTg,  Slot::TtrDist, Slot::WordOverlap, Slot::Geo,
                                          Slot::Gen,    Slot::Inv,     Slot::Syn,       Slot::Phon,
                                          Slot::Feat};
  return slots;
}

const std::vector<Slot>& proposed_slots() {
  static const std::vector<Slot> slots = {Slot::LcrPron, Slot::LcrVerb, Slot::Ltq, Slot::Esd};
  return slots;
}

std::string_view group_name(FeatureGroup group) { return kGroupNames[static_cast<std::size_t>(group)]; }

std::optional<FeatureGroup> parse_group(std::string_view name) {
  const auto wanted = normalize_name(name);
  for (std::size_t i = 0; i < kGroupNames.size(); ++i)
    if (normalize_name(kGroupNames[i]) == wanted) return static_cast<FeatureGroup>(i);
  return std::nullopt;
}

const std::vector<FeatureGroup>& all_groups() {
  static const std::vector<FeatureGroup> groups = {
      FeatureGroup::PretrainSpecific, FeatureGroup::DataSpecific, FeatureGroup::Typology,
      FeatureGroup::Geography,        FeatureGroup::Orthography,  FeatureGroup::Pragmatic};
  return groups;
}

const std::vector<Slot>& group_slots(FeatureGroup group) {
  static const std::map<FeatureGroup, std::vector<Slot>> table = {
      {FeatureGroup::PretrainSpecific, {Slot::WikiSizeTf}},
      {FeatureGroup::DataSpecific, {Slot::TfSize, Slot::TgSize, Slot::RatioSize}},
      {FeatureGroup::Typology, {Slot::Geo, Slot::Syn, Slot::Feat, Slot::Phon, Slot::Inv}},
      {FeatureGroup::Geography, {Slot::Geo}},
      {FeatureGroup::Orthography, {Slot::WordOverlap}},
      {FeatureGroup::Pragmatic,
       {Slot::TtrTf, Slot::TtrTg, Slot::TtrDist, Slot::LcrPron, Slot::LcrVerb, Slot::Ltq, Slot::Esd}},
  };
  return table.at(group);
}

std::vector<FeatureGroup> groups_of(Slot slot) {
  std::vector<FeatureGroup> out;
  for (const auto g : all_groups()) {
    const auto& slots = group_slots(g);
    if (std::find(slots.begin(), slots.end(), slot) != slots.end()) out.push_back(g);
  }
  return out;
}

// ---------------------------------------------------------------------------

OptReal PairFeatures::get(Slot slot) const {
  const auto it = slots.find(slot);
  return it == slots.end() ? std::nullopt : it->second;
}

std::vector<std::string> PairFeatures::names() const {
  std::vector<std::string> out;
  for (const auto& [slot, value] : slots) out.emplace_back(slot_name(slot));
  if (mtvec)
    for (std::size_t i = 0; i < mtvec->size(); ++i) out.push_back("mtvec_" + std::to_string(i));
  return out;
}

std::vector<double> PairFeatures::values() const {
  std::vector<double> out;
  for (const auto& [slot, value] : slots) out.push_back(value ? *value : std::numeric_limits<double>::quiet_NaN());
  if (mtvec) out.insert(out.end(), mtvec->begin(), mtvec->end());
  return out;
}

// ---------------------------------------------------------------------------

std::vector<Slot> expand_slot_names(std::string_view name) {
  const auto key = normalize_name(name);
  if (key == "all") return proposed_slots();
  if (key == "lcr") return {Slot::LcrPron, Slot::LcrVerb};
  if (key == "ttr") return {Slot::TtrTf, Slot::TtrTg, Slot::TtrDist};
  if (key == "wiki" || key == "wiki-size") return {Slot::WikiSizeTf};
  if (const auto slot = parse_slot(name)) return {*slot};
  throw ValidationError("unknown feature or toggle '" + std::string(name) + "'");
}

std::set<Slot> FeatureConfig::active_slots() const {
  std::set<Slot> out;
  switch (base) {
    case Base::LangRank: out.insert(langrank_slots().begin(), langrank_slots().end()); break;
    case Base::Group: {
      const auto& slots = group_slots(group.value());
      out.insert(slots.begin(), slots.end());
      break;
    }
    case Base::MTVec:
    case Base::None: break;
  }
  for (const auto s : add) out.insert(s);
  for (const auto s : remove) out.erase(s);
  return out;
}

std::string FeatureConfig::label() const {
  std::string out;
  switch (base) {
    case Base::LangRank: out = "LangRank"; break;
    case Base::MTVec: out = "MTVec"; break;
    case Base::Group: out = "group:" + std::string(group_name(group.value())); break;
    case Base::None: out = "none"; break;
  }
  std::set<Slot> added = add;
  const std::set<Slot> proposed(proposed_slots().begin(), proposed_slots().end());
  if (std::includes(added.begin(), added.end(), proposed.begin(), proposed.end())) {
    out += "+All";
    for (const auto s : proposed) added.erase(s);
  }
  for (const auto s : added) out += "+" + std::string(slot_name(s));
  std::set<Slot> removed = remove;
  if (removed.count(Slot::LcrPron) && removed.count(Slot::LcrVerb)) {
    out += "-LCR";
    removed.erase(Slot::LcrPron);
    removed.erase(Slot::LcrVerb);
  }
  for (const auto s : removed) {
    if (s == Slot::Ltq)
      out += "-LTQ";
    else if (s == Slot::Esd)
      out += "-ESD";
    else
      out += "-" + std::string(slot_name(s));
  }
  return out;
}

FeatureConfig FeatureConfig::langrank() { return {}; }

FeatureConfig FeatureConfig::mtvec() {
  FeatureConfig c;
  c.base = Base::MTVec;
  return c;
}

FeatureConfig FeatureConfig::of_group(FeatureGroup group) {
  FeatureConfig c;
  c.base = Base::Group;
  c.group = group;
  return c;
}

FeatureConfig FeatureConfig::full() {
  FeatureConfig c;
  c.base = Base::LangRank;
  c.add.insert(proposed_slots().begin(), proposed_slots().end());
  c.add.insert(Slot::WikiSizeTf);
  return c;
}

namespace {

void set_base(FeatureConfig& c, std::string_view value) {
  const auto v = normalize_name(value);
  if (v == "langrank") {
    c.base = FeatureConfig::Base::LangRank;
  } else if (v == "mtvec") {
    c.base = FeatureConfig::Base::MTVec;
  } else if (v == "none") {
    c.base = FeatureConfig::Base::None;
  } else if (v.rfind("group:", 0) == 0) {
    const auto g = parse_group(v.substr(6));
    if (!g) throw ValidationError("unknown feature group '" + std::string(v.substr(6)) + "'");
    c.base = FeatureConfig::Base::Group;
    c.group = *g;
  } else {
    throw ValidationError("unknown feature base '" + std::string(value) + "'");
  }
}

}  // namespace

FeatureConfig FeatureConfig::parse(std::string_view input, std::string_view source) {
  FeatureConfig c;
  const auto all = text::lines(input);
  for (std::size_t i = 0; i < all.size(); ++i) {
    auto line = all[i];
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = text::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw FormatError(std::string(source), i + 1, "expected key=value");
    const auto key = normalize_name(line.substr(0, eq));
    const auto value = text::trim(line.substr(eq + 1));
    try {
      if (key == "base") {
        set_base(c, value);
      } else if (key == "add" || key == "remove") {
        for (const auto item : text::split(value, ',')) {
          if (text::trim(item).empty()) continue;
          for (const auto s : expand_slot_names(item)) (key == "add" ? c.add : c.remove).insert(s);
        }
      } else {
        throw ValidationError("unknown key '" + key + "'");
      }
    } catch (const ValidationError& e) {
      throw FormatError(std::string(source), i + 1, e.what());
    }
  }
  return c;
}

FeatureConfig FeatureConfig::from_label(std::string_view label) {
  FeatureConfig c;
  const auto lowered = text::to_lower(text::trim(label));
  if (lowered == "full") return full();
  if (lowered.rfind("group:", 0) == 0) {
    set_base(c, lowered);
    return c;
  }
  std::size_t pos = lowered.find_first_of("+-");
  set_base(c, lowered.substr(0, pos));
  while (pos != std::string::npos) {
    const char op = lowered[pos];
    const auto next = lowered.find_first_of("+-", pos + 1);
    const auto item = lowered.substr(pos + 1, next == std::string::npos ? std::string::npos : next - pos - 1);
    for (const auto s : expand_slot_names(item)) (op == '+' ? c.add : c.remove).insert(s);
    pos = next;
  }
  return c;
}

// ---------------------------------------------------------------------------

OptReal word_overlap(const std::set<std::string>& a, const std::set<std::string>& b) {
  if (a.empty() || b.empty()) return std::nullopt;
  std::size_t shared = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++shared;
      ++ia;
      ++ib;
    }
  }
  return static_cast<double>(shared) / static_cast<double>(a.size() + b.size());
}

OptReal ttr_distance(double ttr_tf, double ttr_tg) {
  if (ttr_tg == 0) return std::nullopt;
  const double d = 1.0 - ttr_tf / ttr_tg;
  return d * d;
}

std::vector<double> mtvec_pair(const LanguageVectorSet& vectors, const LanguageId& transfer,
                               const LanguageId& target) {
  const auto a = vectors.vectors.find(transfer);
  if (a == vectors.vectors.end()) throw ValidationError("no language vector for '" + transfer.code() + "'");
  const auto b = vectors.vectors.find(target);
  if (b == vectors.vectors.end()) throw ValidationError("no language vector for '" + target.code() + "'");
  std::vector<double> out(a->second);
  out.insert(out.end(), b->second.begin(), b->second.end());
  return out;
}

AssembledFeatures assemble_features(const LanguagePair& pair, const FeatureResources& r,
                                    const FeatureConfig& config) {
  AssembledFeatures out;
  auto& f = out.features;
  f.transfer = pair.transfer;
  f.target = pair.target;
  const auto warn = [&](std::string_view what) {
    out.warnings.push_back(to_string(pair) + ": " + std::string(what));
  };

  const CorpusStats* tf_stats = stats_of(r, pair.transfer);
  const CorpusStats* tg_stats = stats_of(r, pair.target);

  for (const Slot slot : config.active_slots()) {
    OptReal value;
    switch (slot) {
      case Slot::TfSize:
      case Slot::TgSize:
      case Slot::RatioSize: {
        if (!r.dataset_sizes) {
          warn("no dataset size table");
          break;
        }
        const auto tf = scalar(r.dataset_sizes, pair.transfer);
        const auto tg = scalar(r.dataset_sizes, pair.target);
        if (slot == Slot::TfSize) value = tf;
        if (slot == Slot::TgSize) value = tg;
        if (slot == Slot::RatioSize && tf && tg && *tg != 0) value = *tf / *tg;
        break;
      }
      case Slot::TtrTf:
        if (tf_stats) value = tf_stats->ttr; else warn("no tagged corpus for transfer language");
        break;
      case Slot::TtrTg:
        if (tg_stats) value = tg_stats->ttr; else warn("no tagged corpus for target language");
        break;
      case Slot::TtrDist:
        if (tf_stats && tg_stats) value = ttr_distance(tf_stats->ttr, tg_stats->ttr);
        break;
      case Slot::WordOverlap: {
        const auto a = r.vocabularies.find(pair.transfer);
        const auto b = r.vocabularies.find(pair.target);
        if (a != r.vocabularies.end() && b != r.vocabularies.end())
          value = word_overlap(a->second, b->second);
        else
          warn("no vocabulary for word_overlap");
        break;
      }
      case Slot::Geo: value = distance(r, DistanceFacet::Geo, pair); break;
      case Slot::Gen: value = distance(r, DistanceFacet::Gen, pair); break;
      case Slot::Inv: value = distance(r, DistanceFacet::Inv, pair); break;
      case Slot::Syn: value = distance(r, DistanceFacet::Syn, pair); break;
      case Slot::Phon: value = distance(r, DistanceFacet::Phon, pair); break;
      case Slot::Feat: value = distance(r, DistanceFacet::Feat, pair); break;
      case Slot::LcrPron:
      case Slot::LcrVerb:
        if (tf_stats && tg_stats) {
          const auto ratio = lcr(*tf_stats, *tg_stats);
          value = slot == Slot::LcrPron ? ratio.pron : ratio.verb;
        } else {
          warn("no tagged corpus for LCR");
        }
        break;
      case Slot::Ltq: {
        const auto it = r.ltq.find(pair);
        if (it != r.ltq.end()) value = it->second; else warn("no LTQ value");
        break;
      }
      case Slot::Esd: {
        const auto it = r.esd.find(pair);
        if (it != r.esd.end()) value = it->second; else warn("no ESD value");
        break;
      }
      case Slot::WikiSizeTf: {
        if (!r.wiki_sizes) {
          warn("no Wikipedia size table");
          break;
        }
        const auto count = scalar(r.wiki_sizes, pair.transfer);
        if (count && *count > 0) value = std::log10(*count);
        break;
      }
    }
    f.slots[slot] = value;
  }

  if (config.uses_mtvec()) {
    if (!r.language_vectors) {
      warn("no language vectors");
    } else {
      try {
        f.mtvec = mtvec_pair(*r.language_vectors, pair.transfer, pair.target);
      } catch (const ValidationError& e) {
        warn(e.what());
      }
    }
  }
  return out;
}

PairFeatures project(const PairFeatures& full, const FeatureConfig& config) {
  PairFeatures out{full.transfer, full.target, {}, std::nullopt};
  for (const Slot s : config.active_slots()) {
    const auto it = full.slots.find(s);
    out.slots[s] = it == full.slots.end() ? std::nullopt : it->second;
  }
  if (config.uses_mtvec()) out.mtvec = full.mtvec;
  return out;
}

std::string features_to_csv(const std::vector<PairFeatures>& rows) {
  std::vector<const PairFeatures*> sorted;
  for (const auto& r : rows) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(), [](const PairFeatures* a, const PairFeatures* b) {
    return LanguagePair{a->transfer, a->target} < LanguagePair{b->transfer, b->target};
  });
  std::string out = "transfer,target,feature,value\n";
  for (const auto* r : sorted) {
    const std::string prefix = r->transfer.code() + "," + r->target.code() + ",";
    for (const auto& [slot, value] : r->slots)
      out += prefix + std::string(slot_name(slot)) + "," + (value ? text::format_double(*value) : "NA") + "\n";
    if (r->mtvec)
      for (std::size_t i = 0; i < r->mtvec->size(); ++i)
        out += prefix + "mtvec_" + std::to_string(i) + "," + text::format_double((*r->mtvec)[i]) + "\n";
  }
  return out;
}

std::vector<PairFeatures> features_from_csv(std::string_view input, std::string_view source) {
  const auto all = text::lines(input);
  const auto fail = [&](std::size_t line, const std::string& what) {
    throw FormatError(std::string(source), line, what);
  };
  if (all.empty() || text::trim(all[0]) != "transfer,target,feature,value")
    fail(1, "expected header 'transfer,target,feature,value'");
  std::map<LanguagePair, PairFeatures> rows;
  for (std::size_t i = 1; i < all.size(); ++i) {
    if (text::trim(all[i]).empty()) continue;
    const auto cols = text::split(all[i], ',');
    if (cols.size() != 4) fail(i + 1, "expected 4 fields");
    LanguagePair key{LanguageId(cols[0]), LanguageId(cols[1])};
    auto& row = rows[key];
    row.transfer = key.transfer;
    row.target = key.target;
    const auto name = text::trim(cols[2]);
    const auto raw = text::trim(cols[3]);
    OptReal value;
    if (raw != "NA") {
      value = text::parse_double(raw);
      if (!value) fail(i + 1, "non-numeric value '" + std::string(raw) + "'");
    }
    if (name.rfind("mtvec_", 0) == 0) {
      const auto index = text::parse_int(name.substr(6));
      if (!row.mtvec) row.mtvec.emplace();
      if (!index || static_cast<std::size_t>(*index) != row.mtvec->size() || !value)
        fail(i + 1, "mtvec components must be numeric and in order");
      row.mtvec->push_back(*value);
    } else {
      const auto slot = parse_slot(name);
      if (!slot) fail(i + 1, "unknown feature '" + std::string(name) + "'");
      if (!row.slots.emplace(*slot, value).second) fail(i + 1, "duplicate feature '" + std::string(name) + "'");
    }
  }
  std::vector<PairFeatures> out;
  for (auto& [key, row] : rows) out.push_back(std::move(row));
  return out;
}

}  // namespace pragrank
