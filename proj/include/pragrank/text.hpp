#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pragrank::text {

/// Lowercases UTF-8 text. Covers ASCII, Latin-1, Latin Extended-A, Greek,
/// Cyrillic and Armenian; other code points pass through unchanged.
/// Invalid byte sequences are copied verbatim.
std::string to_lower(std::string_view utf8);

/// Splits on runs of ASCII whitespace; no empty fields.
std::vector<std::string> split_whitespace(std::string_view line);

/// Splits on a single delimiter character, keeping empty fields.
std::vector<std::string_view> split(std::string_view line, char delim);

std::string_view trim(std::string_view s);

/// Splits text into lines, stripping a trailing '\r' from each. A final
/// newline does not produce an extra empty line.
std::vector<std::string_view> lines(std::string_view text);

/// Strict numeric parse of the whole field (after trimming).
std::optional<double> parse_double(std::string_view field);
std::optional<long long> parse_int(std::string_view field);

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double value);

/// Fixed-point rendering with the given number of decimals.
std::string format_fixed(double value, int decimals);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// FNV-1a 64-bit; stable across platforms, used for cache keys.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t value);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace pragrank::text
