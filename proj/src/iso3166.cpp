// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The geofeedkit Authors

#include "geofeedkit/iso3166.hpp"

#include <fstream>

namespace gfk::iso3166 {

extern const char* const kAlpha2Codes[];
extern const std::size_t kAlpha2CodeCount;

namespace {

Result<std::unordered_set<std::string>> load_code_lines(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) {
    return Error{Errc::IoError, "cannot open " + file.string()};
  }
  std::unordered_set<std::string> codes;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    codes.insert(line);
  }
  return codes;
}

}  // namespace

const CountryTable& CountryTable::builtin() {
  static const CountryTable table = [] {
    CountryTable t;
    for (std::size_t i = 0; i < kAlpha2CodeCount; ++i) {
      t.codes_.insert(kAlpha2Codes[i]);
    }
    return t;
  }();
  return table;
}

Result<CountryTable> CountryTable::load(const std::filesystem::path& file) {
  auto codes = load_code_lines(file);
  if (!codes.ok()) return codes.error();
  CountryTable t;
  t.codes_ = std::move(codes).take();
  return t;
}

bool CountryTable::contains(std::string_view code) const {
  return codes_.count(std::string(code)) > 0;
}

bool region_shape_ok(std::string_view code) {
  if (code.size() < 4 || code.size() > 6) return false;
  if (code[0] < 'A' || code[0] > 'Z' || code[1] < 'A' || code[1] > 'Z') return false;
  if (code[2] != '-') return false;
  for (std::size_t i = 3; i < code.size(); ++i) {
    char c = code[i];
    bool ok = (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
    if (!ok) return false;
  }
  return true;
}

std::string_view region_country_part(std::string_view code) {
  return code.substr(0, 2);
}

Result<SubdivisionTable> SubdivisionTable::load(const std::filesystem::path& file) {
  auto codes = load_code_lines(file);
  if (!codes.ok()) return codes.error();
  SubdivisionTable t;
  t.codes_ = std::move(codes).take();
  return t;
}

bool SubdivisionTable::contains(std::string_view code) const {
  return codes_.count(std::string(code)) > 0;
}

}  // namespace gfk::iso3166
