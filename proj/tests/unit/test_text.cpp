#include <doctest.h>

#include <cmath>
#include <limits>

#include "pragrank/common.hpp"
#include "pragrank/text.hpp"

using namespace pragrank;

TEST_CASE("to_lower handles ASCII and common scripts") {
  CHECK(text::to_lower("Keep An EYE") == "keep an eye");
  CHECK(text::to_lower("ÉCOLE") == "école");
  CHECK(text::to_lower("ΑΒΓ") == "αβγ");
  CHECK(text::to_lower("ЛЮБОВЬ") == "любовь");
  CHECK(text::to_lower("점심") == "점심");
}

TEST_CASE("split and trim") {
  CHECK(text::split_whitespace("  a \tb  c ") == std::vector<std::string>{"a", "b", "c"});
  const auto parts = text::split("a,,b", ',');
  REQUIRE(parts.size() == 3);
  CHECK(parts[1].empty());
  CHECK(text::trim("  x  ") == "x");
  const auto ls = text::lines("a\r\nb\n\nc\n");
  REQUIRE(ls.size() == 4);
  CHECK(ls[0] == "a");
  CHECK(ls[2].empty());
}

TEST_CASE("strict number parsing") {
  CHECK(text::parse_double("0.25") == 0.25);
  CHECK(text::parse_double("-1e3") == -1000.0);
  CHECK_FALSE(text::parse_double("1.5x"));
  CHECK_FALSE(text::parse_double(""));
  CHECK(text::parse_int("42") == 42);
  CHECK_FALSE(text::parse_int("4.2"));
}

TEST_CASE("format_double round-trips exactly") {
  for (const double v : {0.1, 1.0 / 3.0, -2.5e-300, 123456789.123, 0.0}) {
    const auto s = text::format_double(v);
    CHECK(text::parse_double(s) == v);
  }
  CHECK(text::format_fixed(76.04, 1) == "76.0");
  CHECK(text::format_fixed(0.8425, 2) == "0.84");
}

TEST_CASE("fnv1a64 known vectors") {
  CHECK(text::fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(text::fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(text::hex64(0xabcULL) == "0000000000000abc");
}

TEST_CASE("LanguageId normalizes and validates") {
  CHECK(LanguageId(" TR ").code() == "tr");
  CHECK(LanguageId("ar") < LanguageId("ko"));
  CHECK_THROWS_AS(LanguageId("  "), ValidationError);
  CHECK(to_string(LanguagePair{LanguageId("ar"), LanguageId("tr")}) == "ar->tr");
}

TEST_CASE("FormatError carries source and line") {
  const FormatError e("file.tsv", 7, "bad row");
  CHECK(e.source() == "file.tsv");
  CHECK(e.line() == 7);
  CHECK(std::string(e.what()).find("file.tsv:7") != std::string::npos);
}
