// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The geofeedkit Authors

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>

#include "geofeedkit/iso3166.hpp"

using namespace gfk;
using namespace gfk::iso3166;

namespace {

std::filesystem::path data_file() {
  if (const char* env = std::getenv("GEOFEEDKIT_DATA_DIR")) {
    return std::filesystem::path(env) / "iso3166_alpha2.txt";
  }
  return std::filesystem::path(__FILE__).parent_path().parent_path() / "data" /
         "iso3166_alpha2.txt";
}

}  // namespace

TEST_CASE("builtin table holds the assigned codes") {
  const auto& table = CountryTable::builtin();
  CHECK(table.size() == 249);
  for (const char* code : {"US", "DE", "TH", "AR", "RU", "CH", "ZW", "AD"}) {
    CHECK(table.contains(code));
  }
  // User-assigned and unassigned ranges are absent.
  for (const char* code : {"XQ", "XA", "ZZ", "AB", "", "USA", "us"}) {
    CHECK_FALSE(table.contains(code));
  }
}

TEST_CASE("external file agrees with the builtin snapshot") {
  auto path = data_file();
  REQUIRE(std::filesystem::exists(path));
  auto loaded = CountryTable::load(path);
  REQUIRE(loaded.ok());
  CHECK(loaded.value().size() == CountryTable::builtin().size());

  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    CHECK(CountryTable::builtin().contains(line));
    CHECK(loaded.value().contains(line));
  }
}

TEST_CASE("loading a missing file fails") {
  CHECK_FALSE(CountryTable::load("/nonexistent/alpha2.txt").ok());
}

TEST_CASE("subdivision shape") {
  for (const char* code : {"US-CA", "US-OR", "DE-BY", "GB-ENG", "FR-75", "MX-MEX"}) {
    CHECK(region_shape_ok(code));
  }
  for (const char* code : {"", "US", "US-", "USCA", "us-ca", "US-CALI", "U-CA",
                           "US_CA", "US-C A", "ÜS-CA", "US-ca!"}) {
    CHECK_FALSE(region_shape_ok(code));
  }
}

TEST_CASE("country part extraction") {
  CHECK(region_country_part("US-CA") == "US");
  CHECK(region_country_part("GB-ENG") == "GB");
}

TEST_CASE("subdivision table is optional") {
  SubdivisionTable table;
  CHECK_FALSE(table.loaded());
  CHECK_FALSE(table.contains("US-CA"));
}
