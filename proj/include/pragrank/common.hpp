#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace pragrank {

/// A real value that may be absent. Missing features travel end-to-end as
/// std::nullopt and are never imputed at feature time.
using OptReal = std::optional<double>;

/// Raised for malformed input. Carries the source name and 1-based line
/// number (0 when the error is not tied to a line).
class FormatError : public std::runtime_error {
 public:
  FormatError(std::string source, std::size_t line, const std::string& what);

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

/// Raised when inputs are well-formed but violate a contract (missing
/// resource, empty corpus, degenerate labels, ...).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// ISO-639-style language code, lowercased on construction.
class LanguageId {
 public:
  LanguageId() = default;
  explicit LanguageId(std::string_view code);

  const std::string& code() const noexcept { return code_; }
  bool empty() const noexcept { return code_.empty(); }

  friend auto operator<=>(const LanguageId&, const LanguageId&) = default;
  friend bool operator==(const LanguageId&, const LanguageId&) = default;

 private:
  std::string code_;
};

/// Ordered (transfer, target) pair.
struct LanguagePair {
  LanguageId transfer;
  LanguageId target;

  friend auto operator<=>(const LanguagePair&, const LanguagePair&) = default;
  friend bool operator==(const LanguagePair&, const LanguagePair&) = default;
};

std::string to_string(const LanguagePair& pair);

}  // namespace pragrank

template <>
struct std::hash<pragrank::LanguageId> {
  std::size_t operator()(const pragrank::LanguageId& id) const noexcept {
    return std::hash<std::string>{}(id.code());
  }
};
