// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The geofeedkit Authors

#pragma once

#include <filesystem>
#include <string_view>
#include <unordered_set>

#include "geofeedkit/result.hpp"

namespace gfk::iso3166 {

/// ISO 3166-1 alpha-2 code table. The builtin table is a pinned snapshot of
/// the 249 officially assigned codes; an external file can replace it.
class CountryTable {
 public:
  static const CountryTable& builtin();
  static Result<CountryTable> load(const std::filesystem::path& file);

  bool contains(std::string_view code) const;
  std::size_t size() const { return codes_.size(); }

 private:
  std::unordered_set<std::string> codes_;
};

/// Shape check for ISO 3166-2 subdivision codes: CC-XXX with an uppercase
/// two-letter country part and a 1..3 character alphanumeric suffix.
bool region_shape_ok(std::string_view code);

/// Country part of a shape-valid subdivision code ("US-CA" -> "US").
std::string_view region_country_part(std::string_view code);

/// Optional full subdivision table, one code per line. Empty = not loaded,
/// in which case only the shape and country-consistency checks apply.
class SubdivisionTable {
 public:
  SubdivisionTable() = default;
  static Result<SubdivisionTable> load(const std::filesystem::path& file);

  bool loaded() const { return !codes_.empty(); }
  bool contains(std::string_view code) const;

 private:
  std::unordered_set<std::string> codes_;
};

}  // namespace gfk::iso3166
