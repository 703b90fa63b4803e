#include "pragrank/manifest.hpp"

#include <cctype>
#include <filesystem>
#include <set>

#include "pragrank/text.hpp"

namespace pragrank {

namespace fs = std::filesystem;

namespace {

struct Value {
  std::vector<std::string> items;
  bool is_list = false;
  bool is_string = false;
};

// Reads one quoted string starting at s[pos] == '"'; advances pos past it.
std::string read_quoted(std::string_view s, std::size_t& pos, const std::string& source, std::size_t line) {
  std::string out;
  for (++pos; pos < s.size(); ++pos) {
    const char c = s[pos];
    if (c == '"') {
      ++pos;
      return out;
    }
    if (c == '\\') {
      if (++pos >= s.size()) break;
      switch (s[pos]) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        default: throw FormatError(source, line, "unsupported escape sequence");
      }
    } else {
      out += c;
    }
  }
  throw FormatError(source, line, "unterminated string");
}

std::string_view strip_comment(std::string_view s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && quoted) {
      ++i;
    } else if (s[i] == '"') {
      quoted = !quoted;
    } else if (s[i] == '#' && !quoted) {
      return s.substr(0, i);
    }
  }
  return s;
}

Value parse_value(std::string_view s, const std::string& source, std::size_t line) {
  Value v;
  s = text::trim(s);
  if (s.empty()) throw FormatError(source, line, "missing value");
  if (s.front() == '"') {
    std::size_t pos = 0;
    v.items.push_back(read_quoted(s, pos, source, line));
    v.is_string = true;
    if (!text::trim(s.substr(pos)).empty()) throw FormatError(source, line, "trailing characters after string");
    return v;
  }
  if (s.front() == '[') {
    v.is_list = true;
    std::size_t pos = 1;
    bool expect_item = true;
    while (true) {
      while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
      if (pos >= s.size()) throw FormatError(source, line, "unterminated list");
      if (s[pos] == ']') {
        ++pos;
        break;
      }
      if (s[pos] == ',' && !expect_item) {
        ++pos;
        expect_item = true;
        continue;
      }
      if (s[pos] != '"' || !expect_item) throw FormatError(source, line, "lists must contain quoted strings");
      v.items.push_back(read_quoted(s, pos, source, line));
      expect_item = false;
    }
    if (!text::trim(s.substr(pos)).empty()) throw FormatError(source, line, "trailing characters after list");
    return v;
  }
  v.items.emplace_back(s);
  return v;
}

std::string key_of(std::string_view raw, const std::string& source, std::size_t line) {
  raw = text::trim(raw);
  if (!raw.empty() && raw.front() == '"') {
    std::size_t pos = 0;
    auto k = read_quoted(raw, pos, source, line);
    if (!text::trim(raw.substr(pos)).empty()) throw FormatError(source, line, "malformed key");
    return k;
  }
  if (raw.empty()) throw FormatError(source, line, "empty key");
  for (const char c : raw)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.'))
      throw FormatError(source, line, "invalid character in key '" + std::string(raw) + "'");
  return std::string(raw);
}

LanguagePair pair_key(const std::string& key, const std::string& source, std::size_t line) {
  const auto dash = key.find('-');
  if (dash == std::string::npos || dash == 0 || dash + 1 == key.size() || key.find('-', dash + 1) != std::string::npos)
    throw FormatError(source, line, "pair key must look like 'xx-yy', got '" + key + "'");
  return {LanguageId(key.substr(0, dash)), LanguageId(key.substr(dash + 1))};
}

}  // namespace

RunManifest parse_manifest(std::string_view text, const std::string& path) {
  RunManifest m;
  m.path = path;
  const fs::path base = path.empty() ? fs::path(".") : fs::path(path).parent_path();
  const auto resolve = [&](const std::string& p) {
    const fs::path q(p);
    if (q.is_absolute()) return q.lexically_normal().string();
    return (base / q).lexically_normal().string();
  };

  std::string section;
  std::vector<std::string> section_parts;
  std::set<std::string> seen_sections;
  std::set<std::string> seen_keys;
  bool explicit_languages = false;
  std::vector<LanguageId> section_languages;

  const auto as_string = [&](const Value& v, const std::string& key, std::size_t line) {
    if (v.is_list || !v.is_string) throw FormatError(path, line, "'" + key + "' must be a quoted string");
    return v.items.front();
  };

  const auto ls = text::lines(text);
  for (std::size_t i = 0; i < ls.size(); ++i) {
    const std::size_t line = i + 1;
    const auto s = text::trim(strip_comment(ls[i]));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']' || s.size() < 3) throw FormatError(path, line, "malformed section header");
      section = text::to_lower(text::trim(s.substr(1, s.size() - 2)));
      if (!seen_sections.insert(section).second) throw FormatError(path, line, "duplicate section [" + section + "]");
      section_parts.clear();
      const auto dot = section.find('.');
      section_parts.push_back(section.substr(0, dot));
      if (dot != std::string::npos) section_parts.push_back(section.substr(dot + 1));
      const auto& head = section_parts.front();
      if (section_parts.size() == 1) {
        if (head != "run" && head != "global" && head != "lexicon" && head != "parallel")
          throw FormatError(path, line, "unknown section [" + section + "]");
      } else if (head == "language") {
        const LanguageId id(section_parts[1]);
        section_languages.push_back(id);
        m.language[id];
      } else if (head == "task") {
        m.tasks[text::to_lower(section_parts[1])];
      } else {
        throw FormatError(path, line, "unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) throw FormatError(path, line, "expected 'key = value'");
    if (section.empty()) throw FormatError(path, line, "key outside of any section");
    const auto key = key_of(s.substr(0, eq), path, line);
    const auto value = parse_value(s.substr(eq + 1), path, line);
    if (!seen_keys.insert(section + "\x1f" + key).second) throw FormatError(path, line, "duplicate key '" + key + "'");
    const auto& head = section_parts.front();

    if (head == "run") {
      if (key == "seed") {
        const auto n = text::parse_int(value.items.front());
        if (value.is_list || value.is_string || !n || *n < 0) throw FormatError(path, line, "seed must be a non-negative integer");
        m.seed = static_cast<std::uint64_t>(*n);
      } else if (key == "output") {
        m.output = resolve(as_string(value, key, line));
      } else if (key == "languages") {
        if (!value.is_list) throw FormatError(path, line, "languages must be a list");
        for (const auto& l : value.items) m.languages.emplace_back(l);
        explicit_languages = true;
      } else {
        throw FormatError(path, line, "unknown key '" + key + "' in [run]");
      }
    } else if (head == "global") {
      const auto p = resolve(as_string(value, key, line));
      if (key == "distances") m.distances = p;
      else if (key == "emotion_lexicon") m.emotion_lexicon = p;
      else if (key == "areas") m.areas = p;
      else if (key == "language_vectors") m.language_vectors = p;
      else if (key == "wiki_sizes") m.wiki_sizes = p;
      else throw FormatError(path, line, "unknown key '" + key + "' in [global]");
    } else if (head == "task") {
      auto& t = m.tasks[text::to_lower(section_parts[1])];
      const auto p = resolve(as_string(value, key, line));
      if (key == "zero_shot") t.zero_shot = p;
      else if (key == "sizes") t.sizes = p;
      else throw FormatError(path, line, "unknown key '" + key + "' in [" + section + "]");
    } else if (head == "language") {
      auto& r = m.language[LanguageId(section_parts[1])];
      const auto p = resolve(as_string(value, key, line));
      if (key == "tagged") r.tagged = p;
      else if (key == "raw_a") r.raw_a = p;
      else if (key == "raw_b") r.raw_b = p;
      else if (key == "embeddings") r.embeddings = p;
      else if (key == "gold_mwes") r.gold_mwes = p;
      else throw FormatError(path, line, "unknown key '" + key + "' in [" + section + "]");
    } else if (head == "lexicon") {
      m.lexicons[pair_key(key, path, line)] = resolve(as_string(value, key, line));
    } else if (head == "parallel") {
      if (!value.is_list || value.items.size() != 2)
        throw FormatError(path, line, "parallel entries need a list of two paths");
      m.parallel[pair_key(key, path, line)] = {resolve(value.items[0]), resolve(value.items[1])};
    }
  }
  if (!explicit_languages) m.languages = section_languages;
  if (m.output == "out") m.output = resolve("out");
  return m;
}

RunManifest load_manifest(const std::string& path) {
  if (!fs::exists(path)) throw ValidationError("manifest not found: " + path);
  return parse_manifest(text::read_file(path), path);
}

std::vector<std::string> validate_manifest(const RunManifest& m) {
  std::vector<std::string> errors;
  const auto check = [&](const std::optional<std::string>& p, const std::string& what) {
    if (p && !fs::is_regular_file(*p)) errors.push_back(what + ": file not found: " + *p);
  };
  std::set<LanguageId> langs;
  for (const auto& l : m.languages)
    if (!langs.insert(l).second) errors.push_back("duplicate language '" + l.code() + "'");
  if (langs.empty()) errors.push_back("no languages declared");
  for (const auto& l : langs) {
    const auto it = m.language.find(l);
    if (it == m.language.end()) {
      errors.push_back("language '" + l.code() + "' has no [language." + l.code() + "] section");
      continue;
    }
    const auto& r = it->second;
    if (!r.tagged) errors.push_back("language '" + l.code() + "': missing tagged corpus");
    if (r.raw_a.has_value() != r.raw_b.has_value())
      errors.push_back("language '" + l.code() + "': raw_a and raw_b must be given together");
    const std::string prefix = "language '" + l.code() + "' ";
    check(r.tagged, prefix + "tagged");
    check(r.raw_a, prefix + "raw_a");
    check(r.raw_b, prefix + "raw_b");
    check(r.embeddings, prefix + "embeddings");
    check(r.gold_mwes, prefix + "gold_mwes");
  }
  for (const auto& [l, r] : m.language)
    if (!langs.count(l)) errors.push_back("section [language." + l.code() + "] is not in run.languages");
  check(m.distances, "global distances");
  check(m.emotion_lexicon, "global emotion_lexicon");
  check(m.areas, "global areas");
  check(m.language_vectors, "global language_vectors");
  check(m.wiki_sizes, "global wiki_sizes");
  for (const auto& [name, t] : m.tasks) {
    if (t.zero_shot.empty()) errors.push_back("task '" + name + "': missing zero_shot");
    else check(t.zero_shot, "task '" + name + "' zero_shot");
    check(t.sizes, "task '" + name + "' sizes");
  }
  const auto known = [&](const LanguagePair& p, const std::string& what) {
    for (const auto& l : {p.transfer, p.target})
      if (!langs.count(l)) errors.push_back(what + " " + to_string(p) + ": unknown language '" + l.code() + "'");
  };
  for (const auto& [p, file] : m.lexicons) {
    known(p, "lexicon");
    check(file, "lexicon " + p.transfer.code() + "-" + p.target.code());
  }
  for (const auto& [p, files] : m.parallel) {
    known(p, "parallel");
    check(files.first_path, "parallel " + p.transfer.code() + "-" + p.target.code());
    check(files.second_path, "parallel " + p.transfer.code() + "-" + p.target.code());
  }
  return errors;
}

}  // namespace pragrank
