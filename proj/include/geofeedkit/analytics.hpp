// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The geofeedkit Authors

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "geofeedkit/geofeed.hpp"
#include "geofeedkit/result.hpp"
#include "geofeedkit/rpsl.hpp"

namespace gfk::analytics {

// Registry-wide object counts, the denominators for adoption fractions.
// These come from full registry dumps and are supplied as a file; the file
// documents which population (all objects vs allocated-only) it holds.
struct RirTotals {
  std::map<rpsl::Rir, std::uint64_t> inetnum_total;
  std::map<rpsl::Rir, std::uint64_t> inet6num_total;
  std::string denominator_note;

  static Result<RirTotals> load_file(const std::string& path);
  static Result<RirTotals> from_json(std::string_view text);
};

struct AdoptionRow {
  std::string rir;
  std::uint64_t inetnum_count = 0;
  std::uint64_t inetnum_total = 0;
  std::uint64_t inet6num_count = 0;
  std::uint64_t inet6num_total = 0;
  std::uint64_t as_count = 0;

  // Geofeed-bearing records over all records of that class in the RIR.
  double inetnum_fraction() const;
  double inet6num_fraction() const;
};

struct AdoptionTable {
  std::vector<AdoptionRow> rows;  // one per RIR, registry order
  AdoptionRow totals;             // column sums; as_count deduplicated overall

  // A RIR's slice of all geofeed-bearing records.
  double inetnum_share(const AdoptionRow& row) const;
  double inet6num_share(const AdoptionRow& row) const;

  std::string to_json() const;
  std::string to_csv() const;
};

// Distinct records bearing at least one locator, per RIR and object class;
// ASes counted once per RIR and once overall.
Result<AdoptionTable> rir_adoption_stats(const std::vector<rpsl::LocatorIndexEntry>& index,
                                         const RirTotals& totals);

enum class AsCategory { Isp, Business, Hosting, Education, Unknown };
std::string_view as_category_name(AsCategory category);
std::optional<AsCategory> as_category_from_name(std::string_view name);

class AsInfoProvider {
 public:
  virtual ~AsInfoProvider() = default;
  // nullopt (lookup failure, unknown AS) is reported as Unknown, never dropped.
  virtual std::optional<AsCategory> category(std::uint32_t asn) = 0;
  virtual std::string_view name() const = 0;
};

// Fixture provider: line-delimited JSON {asn, category}.
class FileAsInfoProvider : public AsInfoProvider {
 public:
  static Result<FileAsInfoProvider> load(std::istream& in);
  static Result<FileAsInfoProvider> load_file(const std::string& path);

  std::optional<AsCategory> category(std::uint32_t asn) override;
  std::string_view name() const override { return "file"; }

 private:
  std::map<std::uint32_t, AsCategory> categories_;
};

// Live adapter: GET <base_url>/as/<asn> returning {"category": "..."}.
// Responses are cached and requests spaced by the configured delay.
class HttpAsInfoProvider : public AsInfoProvider {
 public:
  HttpAsInfoProvider(std::string base_url, int timeout_seconds = 10,
                     int min_delay_ms = 200);

  std::optional<AsCategory> category(std::uint32_t asn) override;
  std::string_view name() const override { return "http"; }

 private:
  std::string base_url_;
  int timeout_seconds_;
  int min_delay_ms_;
  std::map<std::uint32_t, std::optional<AsCategory>> cache_;
  std::int64_t last_request_ms_ = 0;
};

struct CategoryBreakdown {
  // rir name -> category name -> AS count
  std::map<std::string, std::map<std::string, std::uint64_t>> cells;

  std::string to_json() const;
  std::string to_csv() const;
};

CategoryBreakdown as_category_breakdown(
    const std::map<rpsl::Rir, std::vector<std::uint32_t>>& ases_per_rir,
    AsInfoProvider& provider);

// Locator formatting adherence over records: a record fails a check when any
// of its locators does; it is valid when it has a locator and no failure.
struct LocatorAdherenceSummary {
  std::uint64_t records = 0;
  std::uint64_t valid = 0;
  std::uint64_t invalid_formatting = 0;
  std::uint64_t not_https = 0;

  double valid_fraction() const;
  double not_https_fraction() const;
  std::string to_json() const;
};

// Feed-content adherence aggregated over file reports.
struct FeedAdherenceSummary {
  std::uint64_t files = 0;
  std::uint64_t crlf_files = 0;      // files whose every terminator is CRLF
  std::uint64_t encoding_bad_files = 0;
  std::uint64_t lines_total = 0;
  std::uint64_t lines_valid = 0;
  std::uint64_t lines_malformed = 0;
  std::uint64_t not_enough_fields = 0;
  std::uint64_t malformed_ip_prefix = 0;
  std::uint64_t malformed_country_code = 0;
  std::uint64_t malformed_region_code = 0;
  std::uint64_t extra_field_lines = 0;

  double valid_fraction() const;
  double crlf_fraction() const;
  std::string to_json() const;
};

struct AdherenceSummaries {
  LocatorAdherenceSummary locator;
  FeedAdherenceSummary feed;
};

AdherenceSummaries rfc_adherence_summaries(
    const std::vector<rpsl::LocatorIndexEntry>& index,
    const std::vector<geofeed::FileReport>& reports);

struct HistogramFilters {
  bool v6_lengths_multiple_of_4 = true;
  bool apply_country_filter = true;
  double country_min_share = 0.05;  // of the family's pre-filter line count
};

struct PrefixHistogram {
  net::Family family = net::Family::V4;
  HistogramFilters filters;
  std::uint64_t prefilter_total = 0;
  // (country, prefix length) -> count, after filtering
  std::map<std::pair<std::string, unsigned>, std::uint64_t> cells;

  std::optional<unsigned> argmax_length() const;
  std::string to_json() const;
  std::string to_csv() const;
};

PrefixHistogram prefix_length_histogram(const std::vector<geofeed::GeofeedLine>& lines,
                                        net::Family family,
                                        const HistogramFilters& filters = {});

struct CountryCounts {
  std::map<std::string, std::uint64_t> countries;
  std::uint64_t no_country = 0;

  std::optional<std::string> argmax() const;
  std::string to_json() const;
  std::string to_csv() const;
};

CountryCounts country_prefix_counts(const std::vector<geofeed::GeofeedLine>& lines);

}  // namespace gfk::analytics
