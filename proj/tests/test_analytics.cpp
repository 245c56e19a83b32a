// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The geofeedkit Authors

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "geofeedkit/analytics.hpp"

using namespace gfk;
using namespace gfk::analytics;

namespace {

rpsl::LocatorIndexEntry entry(rpsl::Rir rir, rpsl::ObjectClass oc, const std::string& start,
                              const std::string& end, bool invalid_formatting = false,
                              bool not_https = false,
                              std::optional<std::uint32_t> origin_as = std::nullopt) {
  rpsl::LocatorIndexEntry e;
  e.rir = rir;
  e.object_class = oc;
  e.range_start = start;
  e.range_end = end;
  e.url = "https://example.net/geofeed.csv";
  e.verdict.invalid_formatting = invalid_formatting;
  e.verdict.not_https = not_https;
  e.origin_as = origin_as;
  return e;
}

geofeed::GeofeedLine feed_line(const std::string& prefix_text, const std::string& country) {
  geofeed::GeofeedLine line;
  if (!prefix_text.empty()) {
    auto parsed = net::Prefix::parse(prefix_text);
    REQUIRE(parsed.ok());
    line.ip_prefix = parsed.value();
  }
  line.alpha2code = country;
  return line;
}

}  // namespace

TEST_CASE("totals parse from the nested form") {
  auto totals = RirTotals::from_json(R"({
    "denominator": "allocated and assigned objects",
    "totals": {
      "RIPE": {"inetnum": 4150000, "inet6num": 855000},
      "ARIN": {"inetnum": 74700, "inet6num": 71000}
    }
  })");
  REQUIRE(totals.ok());
  CHECK(totals.value().denominator_note == "allocated and assigned objects");
  CHECK(totals.value().inetnum_total.at(rpsl::Rir::Ripe) == 4150000);
  CHECK(totals.value().inet6num_total.at(rpsl::Rir::Arin) == 71000);
  CHECK(totals.value().inetnum_total.count(rpsl::Rir::Apnic) == 0);
}

TEST_CASE("totals parse from the flat form and skip note fields") {
  auto totals = RirTotals::from_json(R"({
    "denominator": "all objects",
    "APNIC": {"inetnum": 1200000, "inet6num": 100000},
    "lacnic": {"inetnum": 600000, "inet6num": 26500}
  })");
  REQUIRE(totals.ok());
  CHECK(totals.value().inetnum_total.at(rpsl::Rir::Apnic) == 1200000);
  CHECK(totals.value().inet6num_total.at(rpsl::Rir::Lacnic) == 26500);
}

TEST_CASE("totals reject junk") {
  CHECK_FALSE(RirTotals::from_json("[]").ok());
  CHECK_FALSE(RirTotals::from_json("not json").ok());
  CHECK_FALSE(RirTotals::from_json(R"({"RIPE": {"inetnum": "many"}})").ok());
  CHECK_FALSE(RirTotals::from_json(R"({"RIPE": {"inetnum": 5}})").ok());
}

TEST_CASE("adoption stats dedupe records and split by object class") {
  std::vector<rpsl::LocatorIndexEntry> index;
  // Two locators on the same record must count once.
  index.push_back(entry(rpsl::Rir::Ripe, rpsl::ObjectClass::Inetnum, "192.0.2.0",
                        "192.0.2.255", false, false, 64500));
  index.push_back(entry(rpsl::Rir::Ripe, rpsl::ObjectClass::Inetnum, "192.0.2.0",
                        "192.0.2.255", false, true, 64500));
  index.push_back(entry(rpsl::Rir::Ripe, rpsl::ObjectClass::Inet6num, "2001:db8::",
                        "2001:db8:ffff:ffff:ffff:ffff:ffff:ffff", false, false, 64500));
  index.push_back(entry(rpsl::Rir::Arin, rpsl::ObjectClass::NetRange, "198.51.100.0",
                        "198.51.100.255", false, false, 64501));
  index.push_back(
      entry(rpsl::Rir::Apnic, rpsl::ObjectClass::Inetnum, "203.0.113.0", "203.0.113.255"));

  RirTotals totals;
  totals.inetnum_total = {{rpsl::Rir::Afrinic, 1}, {rpsl::Rir::Apnic, 5},
                          {rpsl::Rir::Arin, 4},    {rpsl::Rir::Lacnic, 1},
                          {rpsl::Rir::Ripe, 10}};
  totals.inet6num_total = {{rpsl::Rir::Afrinic, 1}, {rpsl::Rir::Apnic, 5},
                           {rpsl::Rir::Arin, 4},    {rpsl::Rir::Lacnic, 1},
                           {rpsl::Rir::Ripe, 10}};

  auto table = rir_adoption_stats(index, totals);
  REQUIRE(table.ok());
  const auto& rows = table.value().rows;
  REQUIRE(rows.size() == 5);
  CHECK(rows[0].rir == "AFRINIC");
  CHECK(rows[4].rir == "RIPE");

  const auto& ripe = rows[4];
  CHECK(ripe.inetnum_count == 1);
  CHECK(ripe.inet6num_count == 1);
  CHECK(ripe.as_count == 1);
  CHECK(ripe.inetnum_fraction() == doctest::Approx(0.1));

  // The registry's own range class lands in the v4 column.
  const auto& arin = rows[2];
  CHECK(arin.rir == "ARIN");
  CHECK(arin.inetnum_count == 1);
  CHECK(arin.inet6num_count == 0);

  const auto& sums = table.value().totals;
  CHECK(sums.inetnum_count == 3);
  CHECK(sums.inet6num_count == 1);
  CHECK(sums.inetnum_total == 21);
  CHECK(sums.as_count == 2);
  CHECK(table.value().inetnum_share(ripe) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("adoption stats need totals only where records exist") {
  std::vector<rpsl::LocatorIndexEntry> index;
  index.push_back(
      entry(rpsl::Rir::Lacnic, rpsl::ObjectClass::Inetnum, "10.0.0.0", "10.0.0.255"));
  RirTotals totals;  // nothing supplied
  auto missing = rir_adoption_stats(index, totals);
  REQUIRE_FALSE(missing.ok());
  CHECK(missing.error().code == Errc::MissingTotals);

  auto empty = rir_adoption_stats({}, totals);
  REQUIRE(empty.ok());
  CHECK(empty.value().totals.inetnum_count == 0);
  CHECK(empty.value().totals.as_count == 0);
}

TEST_CASE("the overall as count collapses across registries") {
  std::vector<rpsl::LocatorIndexEntry> index;
  index.push_back(entry(rpsl::Rir::Ripe, rpsl::ObjectClass::Inetnum, "192.0.2.0",
                        "192.0.2.255", false, false, 64500));
  index.push_back(entry(rpsl::Rir::Arin, rpsl::ObjectClass::NetRange, "198.51.100.0",
                        "198.51.100.255", false, false, 64500));
  RirTotals totals;
  for (auto rir : {rpsl::Rir::Afrinic, rpsl::Rir::Apnic, rpsl::Rir::Arin,
                   rpsl::Rir::Lacnic, rpsl::Rir::Ripe}) {
    totals.inetnum_total[rir] = 100;
    totals.inet6num_total[rir] = 100;
  }
  auto table = rir_adoption_stats(index, totals);
  REQUIRE(table.ok());
  CHECK(table.value().rows[4].as_count == 1);
  CHECK(table.value().rows[2].as_count == 1);
  CHECK(table.value().totals.as_count == 1);
}

TEST_CASE("adoption table serializes to csv and json") {
  RirTotals totals;
  for (auto rir : {rpsl::Rir::Afrinic, rpsl::Rir::Apnic, rpsl::Rir::Arin,
                   rpsl::Rir::Lacnic, rpsl::Rir::Ripe}) {
    totals.inetnum_total[rir] = 10;
    totals.inet6num_total[rir] = 10;
  }
  auto table = rir_adoption_stats({}, totals);
  REQUIRE(table.ok());

  auto csv = table.value().to_csv();
  auto lines = std::count(csv.begin(), csv.end(), '\n');
  CHECK(lines == 7);  // header, five registries, totals
  CHECK(csv.rfind("rir,inetnum_count", 0) == 0);

  auto parsed = nlohmann::json::parse(table.value().to_json());
  REQUIRE(parsed.contains("rows"));
  CHECK(parsed["rows"].size() == 5);
  CHECK(parsed["totals"]["rir"] == "TOTAL");
}

TEST_CASE("category names round trip") {
  CHECK(as_category_name(AsCategory::Isp) == "ISP");
  CHECK(as_category_name(AsCategory::Unknown) == "Unknown");
  CHECK(as_category_from_name("isp") == AsCategory::Isp);
  CHECK(as_category_from_name("HOSTING") == AsCategory::Hosting);
  CHECK(as_category_from_name("Education") == AsCategory::Education);
  CHECK_FALSE(as_category_from_name("carrier").has_value());
}

TEST_CASE("file as-info provider answers and admits gaps") {
  std::istringstream in(
      R"({"asn": 1, "category": "ISP"})"
      "\n"
      R"({"asn": 2, "category": "Hosting"})"
      "\n");
  auto provider = FileAsInfoProvider::load(in);
  REQUIRE(provider.ok());
  CHECK(provider.value().category(1) == AsCategory::Isp);
  CHECK(provider.value().category(2) == AsCategory::Hosting);
  CHECK_FALSE(provider.value().category(3).has_value());

  std::istringstream bad(R"({"asn": 1, "category": "weird"})" "\n");
  CHECK_FALSE(FileAsInfoProvider::load(bad).ok());
}

TEST_CASE("category breakdown counts ases per registry cell") {
  std::istringstream in(
      R"({"asn": 1, "category": "ISP"})"
      "\n"
      R"({"asn": 2, "category": "Hosting"})"
      "\n"
      R"({"asn": 3, "category": "ISP"})"
      "\n");
  auto provider = FileAsInfoProvider::load(in);
  REQUIRE(provider.ok());

  std::map<rpsl::Rir, std::vector<std::uint32_t>> ases = {
      {rpsl::Rir::Ripe, {1, 2, 9}},
      {rpsl::Rir::Arin, {3}},
  };
  auto breakdown = as_category_breakdown(ases, provider.value());
  CHECK(breakdown.cells.at("RIPE").at("ISP") == 1);
  CHECK(breakdown.cells.at("RIPE").at("Hosting") == 1);
  CHECK(breakdown.cells.at("RIPE").at("Unknown") == 1);
  CHECK(breakdown.cells.at("ARIN").at("ISP") == 1);

  auto csv = breakdown.to_csv();
  CHECK(csv.rfind("rir,category,as_count\n", 0) == 0);
  CHECK(csv.find("RIPE,Unknown,1") != std::string::npos);
}

TEST_CASE("locator adherence unions verdicts per record") {
  std::vector<rpsl::LocatorIndexEntry> index;
  // Record X: one clean locator, one over plain http.
  index.push_back(
      entry(rpsl::Rir::Ripe, rpsl::ObjectClass::Inetnum, "192.0.2.0", "192.0.2.255"));
  index.push_back(entry(rpsl::Rir::Ripe, rpsl::ObjectClass::Inetnum, "192.0.2.0",
                        "192.0.2.255", false, true));
  // Record Y: clean.
  index.push_back(
      entry(rpsl::Rir::Ripe, rpsl::ObjectClass::Inetnum, "198.51.100.0", "198.51.100.255"));
  // Record Z: both failures on one locator.
  index.push_back(entry(rpsl::Rir::Arin, rpsl::ObjectClass::NetRange, "203.0.113.0",
                        "203.0.113.255", true, true));

  auto summaries = rfc_adherence_summaries(index, {});
  const auto& locator = summaries.locator;
  CHECK(locator.records == 3);
  CHECK(locator.valid == 1);
  CHECK(locator.not_https == 2);
  CHECK(locator.invalid_formatting == 1);
  CHECK(locator.valid_fraction() == doctest::Approx(1.0 / 3.0));
  CHECK(locator.not_https_fraction() == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("feed adherence sums file reports") {
  geofeed::FileReport a;
  a.url = "https://example.net/a.csv";
  a.total = 10;
  a.valid = 8;
  a.malformed = 2;
  a.not_enough_fields = 1;
  a.malformed_ip_prefix = 1;
  a.crlf_ok = true;
  geofeed::FileReport b;
  b.url = "https://example.net/b.csv";
  b.total = 5;
  b.valid = 5;
  b.crlf_ok = false;
  b.encoding_ok = false;

  auto summaries = rfc_adherence_summaries({}, {a, b});
  const auto& feed = summaries.feed;
  CHECK(feed.files == 2);
  CHECK(feed.crlf_files == 1);
  CHECK(feed.crlf_fraction() == doctest::Approx(0.5));
  CHECK(feed.encoding_bad_files == 1);
  CHECK(feed.lines_total == 15);
  CHECK(feed.lines_valid == 13);
  CHECK(feed.lines_malformed == 2);
  CHECK(feed.not_enough_fields == 1);
  CHECK(feed.malformed_ip_prefix == 1);
  CHECK(feed.valid_fraction() == doctest::Approx(13.0 / 15.0));

  auto parsed = nlohmann::json::parse(feed.to_json());
  CHECK(parsed["reasons"]["not_enough_fields"] == 1);
}

TEST_CASE("prefix histograms drop rare countries") {
  std::vector<geofeed::GeofeedLine> lines;
  for (int i = 0; i < 60; ++i) lines.push_back(feed_line("10.0.0.0/24", "US"));
  for (int i = 0; i < 36; ++i) lines.push_back(feed_line("10.1.0.0/22", "DE"));
  for (int i = 0; i < 4; ++i) lines.push_back(feed_line("10.2.0.0/24", "LU"));
  // Invalid and v6 lines stay out of a v4 histogram entirely.
  geofeed::GeofeedLine bad = feed_line("10.3.0.0/24", "US");
  bad.reasons.malformed_country_code = true;
  lines.push_back(bad);
  lines.push_back(feed_line("2001:db8::/48", "US"));

  auto histogram = prefix_length_histogram(lines, net::Family::V4);
  CHECK(histogram.prefilter_total == 100);
  CHECK(histogram.cells.at({"US", 24}) == 60);
  CHECK(histogram.cells.at({"DE", 22}) == 36);
  CHECK(histogram.cells.count({"LU", 24}) == 0);
  REQUIRE(histogram.argmax_length().has_value());
  CHECK(*histogram.argmax_length() == 24);

  HistogramFilters open;
  open.apply_country_filter = false;
  auto unfiltered = prefix_length_histogram(lines, net::Family::V4, open);
  CHECK(unfiltered.cells.at({"LU", 24}) == 4);
}

TEST_CASE("v6 histograms keep nibble-aligned lengths") {
  std::vector<geofeed::GeofeedLine> lines;
  for (int i = 0; i < 10; ++i) lines.push_back(feed_line("2001:db8::/48", "US"));
  for (int i = 0; i < 3; ++i) lines.push_back(feed_line("2001:db8:4::/46", "US"));

  auto histogram = prefix_length_histogram(lines, net::Family::V6);
  CHECK(histogram.prefilter_total == 13);
  CHECK(histogram.cells.at({"US", 48}) == 10);
  CHECK(histogram.cells.count({"US", 46}) == 0);

  HistogramFilters open;
  open.v6_lengths_multiple_of_4 = false;
  auto unfiltered = prefix_length_histogram(lines, net::Family::V6, open);
  CHECK(unfiltered.cells.at({"US", 46}) == 3);
}

TEST_CASE("histogram argmax prefers the shorter length on ties") {
  std::vector<geofeed::GeofeedLine> lines;
  for (int i = 0; i < 5; ++i) lines.push_back(feed_line("10.0.0.0/24", "US"));
  for (int i = 0; i < 5; ++i) lines.push_back(feed_line("10.0.1.0/28", "US"));
  HistogramFilters open;
  open.apply_country_filter = false;
  auto histogram = prefix_length_histogram(lines, net::Family::V4, open);
  REQUIRE(histogram.argmax_length().has_value());
  CHECK(*histogram.argmax_length() == 24);

  auto empty = prefix_length_histogram({}, net::Family::V4);
  CHECK_FALSE(empty.argmax_length().has_value());
  CHECK(empty.prefilter_total == 0);
}

TEST_CASE("histogram serialization carries the filters") {
  std::vector<geofeed::GeofeedLine> lines;
  lines.push_back(feed_line("10.0.0.0/24", "US"));
  auto histogram = prefix_length_histogram(lines, net::Family::V4);
  auto parsed = nlohmann::json::parse(histogram.to_json());
  CHECK(parsed["family"] == "v4");
  CHECK(parsed["filters"]["country_min_share"] == doctest::Approx(0.05));
  CHECK(parsed["cells"].size() == 1);
  CHECK(histogram.to_csv().rfind("country,length,count\n", 0) == 0);
}

TEST_CASE("country counts track the empty tag separately") {
  std::vector<geofeed::GeofeedLine> lines;
  lines.push_back(feed_line("10.0.0.0/24", "US"));
  lines.push_back(feed_line("10.0.1.0/24", "US"));
  lines.push_back(feed_line("10.0.2.0/24", "DE"));
  lines.push_back(feed_line("10.0.3.0/24", ""));
  geofeed::GeofeedLine bad = feed_line("10.0.4.0/24", "US");
  bad.reasons.malformed_ip_prefix = true;
  lines.push_back(bad);

  auto counts = country_prefix_counts(lines);
  CHECK(counts.countries.at("US") == 2);
  CHECK(counts.countries.at("DE") == 1);
  CHECK(counts.no_country == 1);
  REQUIRE(counts.argmax().has_value());
  CHECK(*counts.argmax() == "US");

  CountryCounts none;
  CHECK_FALSE(none.argmax().has_value());
}
