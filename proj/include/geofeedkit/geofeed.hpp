// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The geofeedkit Authors

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "geofeedkit/ip.hpp"
#include "geofeedkit/iso3166.hpp"

namespace gfk::geofeed {

/// Why a geofeed CSV line was rejected. A line can fail several checks.
struct ReasonSet {
  bool not_enough_fields = false;
  bool malformed_ip_prefix = false;
  bool malformed_country_code = false;
  bool malformed_region_code = false;

  bool empty() const {
    return !not_enough_fields && !malformed_ip_prefix && !malformed_country_code &&
           !malformed_region_code;
  }
  unsigned count() const {
    return unsigned(not_enough_fields) + unsigned(malformed_ip_prefix) +
           unsigned(malformed_country_code) + unsigned(malformed_region_code);
  }
  std::vector<std::string> names() const;

  friend bool operator==(const ReasonSet&, const ReasonSet&) = default;
};

struct GeofeedLine {
  std::size_t line_number = 0;  // 1-based physical line index
  std::string raw;              // line text without its terminator
  std::optional<net::Prefix> ip_prefix;
  std::string alpha2code;
  std::string region;
  std::string city;
  std::string postal_code;
  ReasonSet reasons;
  // More than five fields is tolerated but noted.
  bool extra_fields = false;

  bool valid() const { return reasons.empty(); }
};

struct GeofeedFile {
  std::string source_url;
  std::string raw_digest_hex;
  bool encoding_ok = true;  // whole buffer decodes as UTF-8
  bool crlf_ok = true;      // every terminator is CRLF
  std::vector<GeofeedLine> lines;  // data lines only
  std::size_t comment_count = 0;
  std::size_t blank_count = 0;
  std::size_t physical_line_count = 0;
};

struct ValidationContext {
  const iso3166::CountryTable* countries = &iso3166::CountryTable::builtin();
  const iso3166::SubdivisionTable* subdivisions = nullptr;
};

/// Strict CIDR parse for the ip_prefix field; bare addresses become /32 or /128.
inline Result<net::Prefix> parse_prefix(std::string_view text) {
  return net::Prefix::parse(text);
}

/// Validates one data line (terminator already stripped). Splits on commas
/// with no whitespace trimming; empty optional fields are fine.
GeofeedLine validate_line(std::string_view fields_text, std::size_t line_number = 0,
                          const ValidationContext& ctx = {});

/// Decodes a raw buffer: UTF-8 and CRLF checks over the whole file, then
/// per-line validation. Defects are flags, never errors; invalid UTF-8 is
/// replaced so line checks still run.
GeofeedFile decode_file(std::span<const std::uint8_t> raw, std::string source_url,
                        const ValidationContext& ctx = {});
GeofeedFile decode_file(std::string_view raw, std::string source_url,
                        const ValidationContext& ctx = {});

struct FileReport {
  std::string url;
  std::uint64_t total = 0;
  std::uint64_t valid = 0;
  std::uint64_t malformed = 0;
  // Per-reason counters; a line failing k checks bumps k of these but
  // `malformed` only once.
  std::uint64_t not_enough_fields = 0;
  std::uint64_t malformed_ip_prefix = 0;
  std::uint64_t malformed_country_code = 0;
  std::uint64_t malformed_region_code = 0;
  std::uint64_t extra_field_lines = 0;
  bool encoding_ok = true;
  bool crlf_ok = true;

  std::string to_json() const;
  static Result<FileReport> from_json(std::string_view text);
};

FileReport validate_file(const GeofeedFile& file);

}  // namespace gfk::geofeed
