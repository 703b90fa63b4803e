#pragma once

// Run manifest: which resource files describe each language, language pair
// and task. A small TOML subset:
//
//   [run]            seed = 1, output = "out", languages = ["ar", "tr"]
//   [global]         distances, emotion_lexicon, areas, language_vectors, wiki_sizes
//   [task.<name>]    zero_shot, sizes
//   [language.<id>]  tagged, raw_a, raw_b, embeddings, gold_mwes
//   [lexicon]        <src>-<tgt> = "path"
//   [parallel]       <a>-<b> = ["path_a", "path_b"]
//
// Relative paths resolve against the manifest's directory.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pragrank/common.hpp"

namespace pragrank {

struct LanguageResources {
  std::optional<std::string> tagged;
  std::optional<std::string> raw_a;
  std::optional<std::string> raw_b;
  std::optional<std::string> embeddings;
  std::optional<std::string> gold_mwes;
};

struct TaskResources {
  std::string zero_shot;
  std::optional<std::string> sizes;
};

struct ParallelPaths {
  std::string first_path;
  std::string second_path;
};

struct RunManifest {
  std::string path;
  std::uint64_t seed = 0;
  std::string output = "out";
  std::vector<LanguageId> languages;
  std::map<LanguageId, LanguageResources> language;

  std::optional<std::string> distances;
  std::optional<std::string> emotion_lexicon;
  std::optional<std::string> areas;
  std::optional<std::string> language_vectors;
  std::optional<std::string> wiki_sizes;

  std::map<std::string, TaskResources> tasks;
  /// Keyed by (source, target) translation direction.
  std::map<LanguagePair, std::string> lexicons;
  /// Keyed by (first, second) file order.
  std::map<LanguagePair, ParallelPaths> parallel;
};

/// Parses and resolves paths. Throws FormatError on syntax errors and
/// unknown sections or keys.
RunManifest parse_manifest(std::string_view text, const std::string& path = {});
RunManifest load_manifest(const std::string& path);

/// Every contract violation at once: duplicate or unknown languages,
/// missing required entries, paths that do not exist. Empty when valid.
std::vector<std::string> validate_manifest(const RunManifest& manifest);

}  // namespace pragrank
