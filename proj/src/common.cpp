#include "pragrank/common.hpp"

#include "pragrank/text.hpp"

namespace pragrank {

namespace {

std::string describe(const std::string& source, std::size_t line, const std::string& what) {
  std::string out = source.empty() ? std::string("<input>") : source;
  if (line > 0) out += ":" + std::to_string(line);
  return out + ": " + what;
}

}  // namespace

FormatError::FormatError(std::string source, std::size_t line, const std::string& what)
    : std::runtime_error(describe(source, line, what)), source_(std::move(source)), line_(line) {}

LanguageId::LanguageId(std::string_view code) : code_(text::to_lower(text::trim(code))) {
  if (code_.empty()) throw ValidationError("language id must be non-empty");
}

std::string to_string(const LanguagePair& pair) {
  return pair.transfer.code() + "->" + pair.target.code();
}

}  // namespace pragrank
