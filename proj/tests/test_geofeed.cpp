// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The geofeedkit Authors

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <string>

#include "geofeedkit/geofeed.hpp"

using namespace gfk;
using namespace gfk::geofeed;

TEST_CASE("a fully populated line validates") {
  auto line = validate_line("192.0.2.0/24,US,US-WA,Seattle,98101", 1);
  CHECK(line.valid());
  CHECK(line.ip_prefix->to_string() == "192.0.2.0/24");
  CHECK(line.alpha2code == "US");
  CHECK(line.region == "US-WA");
  CHECK(line.city == "Seattle");
  CHECK(line.postal_code == "98101");
  CHECK(line.raw == "192.0.2.0/24,US,US-WA,Seattle,98101");
}

TEST_CASE("optional fields may be empty") {
  CHECK(validate_line("192.0.2.0/24,US,,,").valid());
  CHECK(validate_line("192.0.2.0/24,,,,").valid());
  CHECK(validate_line("2001:db8::/32,DE,,,").valid());
}

TEST_CASE("fewer than five fields fails the field-count check") {
  auto line = validate_line("192.0.2.0/24,US");
  CHECK_FALSE(line.valid());
  CHECK(line.reasons.not_enough_fields);
  CHECK(validate_line("192.0.2.0/24,US,US-WA,Seattle").reasons.not_enough_fields);
  CHECK_FALSE(validate_line("192.0.2.0/24,US,US-WA,Seattle,").reasons.not_enough_fields);
}

TEST_CASE("bare addresses take the host length") {
  auto v4 = validate_line("192.0.2.7,US,,,");
  REQUIRE(v4.ip_prefix);
  CHECK(v4.ip_prefix->length() == 32);
  auto v6 = validate_line("2001:db8::1,US,,,");
  REQUIRE(v6.ip_prefix);
  CHECK(v6.ip_prefix->length() == 128);
}

TEST_CASE("host bits below the mask invalidate the prefix") {
  auto line = validate_line("192.0.2.1/24,US,,,");
  CHECK(line.reasons.malformed_ip_prefix);
  CHECK_FALSE(line.ip_prefix);
}

TEST_CASE("unassigned country codes are rejected") {
  CHECK(validate_line("10.0.0.0/8,XQ,,,").reasons.malformed_country_code);
  CHECK(validate_line("10.0.0.0/8,ZZ,,,").reasons.malformed_country_code);
  CHECK(validate_line("10.0.0.0/8,us,,,").reasons.malformed_country_code);
  CHECK(validate_line("10.0.0.0/8,USA,,,").reasons.malformed_country_code);
  CHECK_FALSE(validate_line("10.0.0.0/8,TH,,,").reasons.malformed_country_code);
}

TEST_CASE("region codes must be shaped and match the country") {
  CHECK(validate_line("10.0.0.0/8,US,US-CA,,").valid());
  CHECK(validate_line("10.0.0.0/8,US,ZZ-99,,").reasons.malformed_region_code);
  CHECK(validate_line("10.0.0.0/8,US,DE-BY,,").reasons.malformed_region_code);
  CHECK(validate_line("10.0.0.0/8,US,US-,,").reasons.malformed_region_code);
  CHECK(validate_line("10.0.0.0/8,US,california,,").reasons.malformed_region_code);
}

TEST_CASE("several failures accumulate on one line") {
  auto line = validate_line("not-a-prefix,QQ,XX-,,");
  CHECK(line.reasons.malformed_ip_prefix);
  CHECK(line.reasons.malformed_country_code);
  CHECK(line.reasons.malformed_region_code);
  CHECK(line.reasons.count() == 3);
  CHECK_FALSE(line.valid());
}

TEST_CASE("extra fields are noted, not fatal") {
  auto line = validate_line("10.0.0.0/8,US,US-OR,Portland,97201,surplus");
  CHECK(line.valid());
  CHECK(line.extra_fields);
}

TEST_CASE("whitespace is not trimmed") {
  CHECK(validate_line("10.0.0.0/8, US,,,").reasons.malformed_country_code);
  CHECK(validate_line(" 10.0.0.0/8,US,,,").reasons.malformed_ip_prefix);
}

TEST_CASE("decode separates data, comment, and blank lines") {
  std::string body =
      "# header comment\r\n"
      "\r\n"
      "192.0.2.0/24,US,,,\r\n"
      "2001:db8::/32,DE,,,\r\n";
  auto file = decode_file(body, "https://example.com/geo.csv");
  CHECK(file.source_url == "https://example.com/geo.csv");
  CHECK(file.encoding_ok);
  CHECK(file.crlf_ok);
  CHECK(file.comment_count == 1);
  CHECK(file.blank_count == 1);
  CHECK(file.physical_line_count == 4);
  REQUIRE(file.lines.size() == 2);
  CHECK(file.lines[0].line_number == 3);
  CHECK(file.lines[1].line_number == 4);
}

TEST_CASE("lf terminators clear the crlf flag") {
  auto lf = decode_file("192.0.2.0/24,US,,,\n", "u");
  CHECK_FALSE(lf.crlf_ok);
  auto mixed = decode_file("192.0.2.0/24,US,,,\r\n10.0.0.0/8,DE,,,\n", "u");
  CHECK_FALSE(mixed.crlf_ok);
  auto crlf = decode_file("192.0.2.0/24,US,,,\r\n", "u");
  CHECK(crlf.crlf_ok);
}

TEST_CASE("a final line without a terminator still counts") {
  auto file = decode_file("192.0.2.0/24,US,,,", "u");
  REQUIRE(file.lines.size() == 1);
  CHECK(file.lines[0].valid());
  // The flag covers terminators; with none present it stays set.
  CHECK(file.crlf_ok);
  auto partial = decode_file("192.0.2.0/24,US,,,\r\n10.0.0.0/8,DE,,,", "u");
  CHECK(partial.crlf_ok);
  REQUIRE(partial.lines.size() == 2);
}

TEST_CASE("invalid utf8 clears the encoding flag but lines still validate") {
  std::string body = "192.0.2.0/24,US,,,\xff\xfe\r\n10.0.0.0/8,DE,,,\r\n";
  auto file = decode_file(body, "u");
  CHECK_FALSE(file.encoding_ok);
  REQUIRE(file.lines.size() == 2);
  CHECK(file.lines[1].valid());
}

TEST_CASE("utf8 multibyte content is accepted") {
  std::string body = "192.0.2.0/24,DE,DE-BY,M\xc3\xbcnchen,\r\n";
  auto file = decode_file(body, "u");
  CHECK(file.encoding_ok);
  REQUIRE(file.lines.size() == 1);
  CHECK(file.lines[0].valid());
  CHECK(file.lines[0].city == "M\xc3\xbcnchen");
}

TEST_CASE("file report totals partition into valid and malformed") {
  std::string body =
      "# c\r\n"
      "192.0.2.0/24,US,,,\r\n"
      "bad,US,,,\r\n"
      "10.0.0.0/8,QQ,XX-,,\r\n";
  auto report = validate_file(decode_file(body, "u"));
  CHECK(report.total == 3);
  CHECK(report.valid == 1);
  CHECK(report.malformed == 2);
  CHECK(report.valid + report.malformed == report.total);
  CHECK(report.malformed_ip_prefix == 1);
  CHECK(report.malformed_country_code == 1);
  CHECK(report.malformed_region_code == 1);
}

TEST_CASE("file report json round-trips") {
  auto report = validate_file(decode_file("192.0.2.0/24,US,,,\r\n", "https://e/x.csv"));
  auto text = report.to_json();
  auto back = FileReport::from_json(text);
  REQUIRE(back.ok());
  CHECK(back.value().url == "https://e/x.csv");
  CHECK(back.value().total == 1);
  CHECK(back.value().valid == 1);
  CHECK(back.value().crlf_ok);
  CHECK(back.value().to_json() == text);
  CHECK_FALSE(FileReport::from_json("{") .ok());
}

TEST_CASE("fuzzed lines always partition into valid plus malformed") {
  std::mt19937 rng(42);
  const std::string alphabet = "0123456789abcdef.:/,-ABCDEFGHIJ \t#";
  std::uint64_t total = 0, valid = 0, malformed = 0;
  for (int i = 0; i < 20000; ++i) {
    std::string text;
    std::size_t len = rng() % 40;
    for (std::size_t k = 0; k < len; ++k) text += alphabet[rng() % alphabet.size()];
    auto line = validate_line(text, 1);
    ++total;
    if (line.valid()) {
      ++valid;
      CHECK(line.reasons.count() == 0);
    } else {
      ++malformed;
      CHECK(line.reasons.count() >= 1);
    }
    // A failed prefix parse never leaves a parsed prefix behind.
    if (line.reasons.malformed_ip_prefix) CHECK_FALSE(line.ip_prefix);
  }
  CHECK(total == valid + malformed);
}

TEST_CASE("reason names match the report fields") {
  auto line = validate_line("x");
  auto names = line.reasons.names();
  REQUIRE(!names.empty());
  for (const auto& name : names) {
    bool known = name == "not_enough_fields" || name == "malformed_ip_prefix" ||
                 name == "malformed_country_code" || name == "malformed_region_code";
    CHECK(known);
  }
}
