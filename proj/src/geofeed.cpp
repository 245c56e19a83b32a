// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The geofeedkit Authors

#include "geofeedkit/geofeed.hpp"

#include <nlohmann/json.hpp>

#include "geofeedkit/digest.hpp"

namespace gfk::geofeed {

std::vector<std::string> ReasonSet::names() const {
  std::vector<std::string> out;
  if (not_enough_fields) out.push_back("not_enough_fields");
  if (malformed_ip_prefix) out.push_back("malformed_ip_prefix");
  if (malformed_country_code) out.push_back("malformed_country_code");
  if (malformed_region_code) out.push_back("malformed_region_code");
  return out;
}

namespace {

std::vector<std::string_view> split_fields(std::string_view text) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    auto comma = text.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(text.substr(start));
      break;
    }
    fields.push_back(text.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

bool utf8_valid(std::span<const std::uint8_t> data) {
  std::size_t i = 0;
  while (i < data.size()) {
    std::uint8_t b = data[i];
    std::size_t len;
    std::uint32_t cp;
    if (b < 0x80) {
      i += 1;
      continue;
    } else if ((b & 0xe0) == 0xc0) {
      len = 2;
      cp = b & 0x1f;
    } else if ((b & 0xf0) == 0xe0) {
      len = 3;
      cp = b & 0x0f;
    } else if ((b & 0xf8) == 0xf0) {
      len = 4;
      cp = b & 0x07;
    } else {
      return false;
    }
    if (i + len > data.size()) return false;
    for (std::size_t k = 1; k < len; ++k) {
      if ((data[i + k] & 0xc0) != 0x80) return false;
      cp = cp << 6 | (data[i + k] & 0x3f);
    }
    // Overlongs, surrogates, and out-of-range code points are invalid.
    static constexpr std::uint32_t kMin[] = {0, 0, 0x80, 0x800, 0x10000};
    if (cp < kMin[len] || cp > 0x10ffff || (cp >= 0xd800 && cp <= 0xdfff)) return false;
    i += len;
  }
  return true;
}

struct PhysicalLine {
  std::string_view text;  // without terminator
};

// Splits into physical lines on CRLF, LF, or CR, and reports whether every
// terminator was CRLF.
std::pair<std::vector<PhysicalLine>, bool> split_physical_lines(std::string_view raw) {
  std::vector<PhysicalLine> lines;
  bool crlf_ok = true;
  std::size_t start = 0;
  std::size_t i = 0;
  while (i < raw.size()) {
    char c = raw[i];
    if (c == '\r') {
      lines.push_back({raw.substr(start, i - start)});
      if (i + 1 < raw.size() && raw[i + 1] == '\n') {
        i += 2;
      } else {
        crlf_ok = false;  // bare CR
        i += 1;
      }
      start = i;
    } else if (c == '\n') {
      crlf_ok = false;  // bare LF
      lines.push_back({raw.substr(start, i - start)});
      i += 1;
      start = i;
    } else {
      ++i;
    }
  }
  if (start < raw.size()) {
    lines.push_back({raw.substr(start)});
  }
  return {lines, crlf_ok};
}

}  // namespace

GeofeedLine validate_line(std::string_view fields_text, std::size_t line_number,
                          const ValidationContext& ctx) {
  GeofeedLine line;
  line.line_number = line_number;
  line.raw = std::string(fields_text);
  auto fields = split_fields(fields_text);
  if (fields.size() < 5) {
    line.reasons.not_enough_fields = true;
  }
  if (fields.size() > 5) {
    line.extra_fields = true;
  }

  auto prefix = net::Prefix::parse(fields[0]);
  if (prefix.ok()) {
    line.ip_prefix = prefix.value();
  } else {
    line.reasons.malformed_ip_prefix = true;
  }

  if (fields.size() > 1) line.alpha2code = std::string(fields[1]);
  if (fields.size() > 2) line.region = std::string(fields[2]);
  if (fields.size() > 3) line.city = std::string(fields[3]);
  if (fields.size() > 4) line.postal_code = std::string(fields[4]);

  // Optional fields are checked only when non-empty; no whitespace trimming,
  // so " US" is malformed.
  if (!line.alpha2code.empty() && !ctx.countries->contains(line.alpha2code)) {
    line.reasons.malformed_country_code = true;
  }
  if (!line.region.empty()) {
    bool ok = iso3166::region_shape_ok(line.region);
    if (ok && !line.alpha2code.empty() &&
        iso3166::region_country_part(line.region) != line.alpha2code) {
      ok = false;
    }
    if (ok && ctx.subdivisions && ctx.subdivisions->loaded() &&
        !ctx.subdivisions->contains(line.region)) {
      ok = false;
    }
    if (!ok) line.reasons.malformed_region_code = true;
  }
  return line;
}

GeofeedFile decode_file(std::span<const std::uint8_t> raw, std::string source_url,
                        const ValidationContext& ctx) {
  GeofeedFile file;
  file.source_url = std::move(source_url);
  file.raw_digest_hex = to_hex(sha256(raw));
  file.encoding_ok = utf8_valid(raw);

  std::string text;
  if (file.encoding_ok) {
    text.assign(reinterpret_cast<const char*>(raw.data()), raw.size());
  } else {
    // Lossy fallback: non-ASCII bytes become '?' so line structure survives.
    text.reserve(raw.size());
    for (std::uint8_t b : raw) {
      text.push_back(b < 0x80 ? static_cast<char>(b) : '?');
    }
  }

  auto [physical, crlf_ok] = split_physical_lines(text);
  file.crlf_ok = crlf_ok;
  file.physical_line_count = physical.size();
  for (std::size_t i = 0; i < physical.size(); ++i) {
    std::string_view body = physical[i].text;
    if (body.empty()) {
      ++file.blank_count;
      continue;
    }
    if (body[0] == '#') {
      ++file.comment_count;
      continue;
    }
    file.lines.push_back(validate_line(body, i + 1, ctx));
  }
  return file;
}

GeofeedFile decode_file(std::string_view raw, std::string source_url,
                        const ValidationContext& ctx) {
  return decode_file(std::span<const std::uint8_t>(
                         reinterpret_cast<const std::uint8_t*>(raw.data()), raw.size()),
                     std::move(source_url), ctx);
}

FileReport validate_file(const GeofeedFile& file) {
  FileReport report;
  report.url = file.source_url;
  report.encoding_ok = file.encoding_ok;
  report.crlf_ok = file.crlf_ok;
  for (const auto& line : file.lines) {
    ++report.total;
    if (line.valid()) {
      ++report.valid;
    } else {
      ++report.malformed;
      if (line.reasons.not_enough_fields) ++report.not_enough_fields;
      if (line.reasons.malformed_ip_prefix) ++report.malformed_ip_prefix;
      if (line.reasons.malformed_country_code) ++report.malformed_country_code;
      if (line.reasons.malformed_region_code) ++report.malformed_region_code;
    }
    if (line.extra_fields) ++report.extra_field_lines;
  }
  return report;
}

std::string FileReport::to_json() const {
  nlohmann::json j{
      {"url", url},
      {"total", total},
      {"valid", valid},
      {"malformed", malformed},
      {"reasons",
       {{"not_enough_fields", not_enough_fields},
        {"malformed_ip_prefix", malformed_ip_prefix},
        {"malformed_country_code", malformed_country_code},
        {"malformed_region_code", malformed_region_code}}},
      {"extra_field_lines", extra_field_lines},
      {"encoding_ok", encoding_ok},
      {"crlf_ok", crlf_ok},
  };
  return j.dump();
}

Result<FileReport> FileReport::from_json(std::string_view text) {
  auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    return Error{Errc::ParseError, "bad file report json"};
  }
  try {
    FileReport r;
    r.url = j.value("url", "");
    r.total = j.at("total").get<std::uint64_t>();
    r.valid = j.at("valid").get<std::uint64_t>();
    r.malformed = j.at("malformed").get<std::uint64_t>();
    const auto& reasons = j.at("reasons");
    r.not_enough_fields = reasons.at("not_enough_fields").get<std::uint64_t>();
    r.malformed_ip_prefix = reasons.at("malformed_ip_prefix").get<std::uint64_t>();
    r.malformed_country_code = reasons.at("malformed_country_code").get<std::uint64_t>();
    r.malformed_region_code = reasons.at("malformed_region_code").get<std::uint64_t>();
    r.extra_field_lines = j.value("extra_field_lines", std::uint64_t{0});
    r.encoding_ok = j.at("encoding_ok").get<bool>();
    r.crlf_ok = j.at("crlf_ok").get<bool>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    return Error{Errc::ParseError, std::string("bad file report json: ") + e.what()};
  }
}

}  // namespace gfk::geofeed
