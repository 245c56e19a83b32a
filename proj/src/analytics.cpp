// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The geofeedkit Authors

#include "geofeedkit/analytics.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "geofeedkit/fetch.hpp"

namespace gfk::analytics {

namespace {

constexpr rpsl::Rir kAllRirs[] = {rpsl::Rir::Afrinic, rpsl::Rir::Apnic, rpsl::Rir::Arin,
                                  rpsl::Rir::Lacnic, rpsl::Rir::Ripe};

double ratio(std::uint64_t num, std::uint64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

Result<RirTotals> RirTotals::from_json(std::string_view text) {
  auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    return Error{Errc::ParseError, "bad totals json"};
  }
  RirTotals totals;
  totals.denominator_note = j.value("denominator", "");
  const nlohmann::json& table = j.contains("totals") ? j["totals"] : j;
  for (auto it = table.begin(); it != table.end(); ++it) {
    auto rir = rpsl::rir_from_name(it.key());
    if (!rir) continue;  // skip note fields in the flat form
    try {
      totals.inetnum_total[*rir] = it.value().at("inetnum").get<std::uint64_t>();
      totals.inet6num_total[*rir] = it.value().at("inet6num").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& ex) {
      return Error{Errc::ParseError,
                   "bad totals entry for " + it.key() + ": " + ex.what()};
    }
  }
  return totals;
}

Result<RirTotals> RirTotals::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) return Error{Errc::IoError, "cannot open " + path};
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

double AdoptionRow::inetnum_fraction() const { return ratio(inetnum_count, inetnum_total); }
double AdoptionRow::inet6num_fraction() const {
  return ratio(inet6num_count, inet6num_total);
}

double AdoptionTable::inetnum_share(const AdoptionRow& row) const {
  return ratio(row.inetnum_count, totals.inetnum_count);
}
double AdoptionTable::inet6num_share(const AdoptionRow& row) const {
  return ratio(row.inet6num_count, totals.inet6num_count);
}

Result<AdoptionTable> rir_adoption_stats(const std::vector<rpsl::LocatorIndexEntry>& index,
                                         const RirTotals& totals) {
  std::map<rpsl::Rir, std::set<std::string>> inetnum_records;
  std::map<rpsl::Rir, std::set<std::string>> inet6num_records;
  std::map<rpsl::Rir, std::set<std::uint32_t>> as_per_rir;
  std::set<std::uint32_t> as_overall;

  for (const auto& entry : index) {
    // NetRange is the registry's IPv4 range class; bucket it with inetnum.
    bool v6 = entry.object_class == rpsl::ObjectClass::Inet6num;
    auto& bucket = v6 ? inet6num_records[entry.rir] : inetnum_records[entry.rir];
    bucket.insert(entry.record_key());
    if (entry.origin_as) {
      as_per_rir[entry.rir].insert(*entry.origin_as);
      as_overall.insert(*entry.origin_as);
    }
  }

  AdoptionTable table;
  table.totals.rir = "TOTAL";
  for (rpsl::Rir rir : kAllRirs) {
    AdoptionRow row;
    row.rir = std::string(rpsl::rir_name(rir));
    row.inetnum_count = inetnum_records[rir].size();
    row.inet6num_count = inet6num_records[rir].size();
    row.as_count = as_per_rir[rir].size();
    auto it4 = totals.inetnum_total.find(rir);
    auto it6 = totals.inet6num_total.find(rir);
    if ((row.inetnum_count > 0 && it4 == totals.inetnum_total.end()) ||
        (row.inet6num_count > 0 && it6 == totals.inet6num_total.end())) {
      return Error{Errc::MissingTotals,
                   "no record totals supplied for " + row.rir};
    }
    row.inetnum_total = it4 == totals.inetnum_total.end() ? 0 : it4->second;
    row.inet6num_total = it6 == totals.inet6num_total.end() ? 0 : it6->second;
    table.totals.inetnum_count += row.inetnum_count;
    table.totals.inet6num_count += row.inet6num_count;
    table.totals.inetnum_total += row.inetnum_total;
    table.totals.inet6num_total += row.inet6num_total;
    table.rows.push_back(std::move(row));
  }
  table.totals.as_count = as_overall.size();
  return table;
}

std::string AdoptionTable::to_json() const {
  auto row_json = [&](const AdoptionRow& row, bool with_share) {
    nlohmann::json j{
        {"rir", row.rir},
        {"inetnum_count", row.inetnum_count},
        {"inetnum_total", row.inetnum_total},
        {"inetnum_fraction", row.inetnum_fraction()},
        {"inet6num_count", row.inet6num_count},
        {"inet6num_total", row.inet6num_total},
        {"inet6num_fraction", row.inet6num_fraction()},
        {"as_count", row.as_count},
    };
    if (with_share) {
      j["inetnum_share"] = inetnum_share(row);
      j["inet6num_share"] = inet6num_share(row);
    }
    return j;
  };
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& row : rows) rows_json.push_back(row_json(row, true));
  nlohmann::json j{
      {"rows", rows_json},
      {"totals", row_json(totals, false)},
  };
  return j.dump(2);
}

std::string AdoptionTable::to_csv() const {
  std::ostringstream out;
  out << "rir,inetnum_count,inetnum_total,inetnum_fraction,inetnum_share,"
         "inet6num_count,inet6num_total,inet6num_fraction,inet6num_share,as_count\n";
  auto emit = [&](const AdoptionRow& row, double share4, double share6) {
    out << row.rir << "," << row.inetnum_count << "," << row.inetnum_total << ","
        << row.inetnum_fraction() << "," << share4 << "," << row.inet6num_count << ","
        << row.inet6num_total << "," << row.inet6num_fraction() << "," << share6 << ","
        << row.as_count << "\n";
  };
  for (const auto& row : rows) emit(row, inetnum_share(row), inet6num_share(row));
  emit(totals, 1.0, 1.0);
  return out.str();
}

std::string_view as_category_name(AsCategory category) {
  switch (category) {
    case AsCategory::Isp: return "ISP";
    case AsCategory::Business: return "Business";
    case AsCategory::Hosting: return "Hosting";
    case AsCategory::Education: return "Education";
    case AsCategory::Unknown: return "Unknown";
  }
  return "Unknown";
}

std::optional<AsCategory> as_category_from_name(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "isp") return AsCategory::Isp;
  if (lower == "business") return AsCategory::Business;
  if (lower == "hosting") return AsCategory::Hosting;
  if (lower == "education") return AsCategory::Education;
  if (lower == "unknown") return AsCategory::Unknown;
  return std::nullopt;
}

Result<FileAsInfoProvider> FileAsInfoProvider::load(std::istream& in) {
  FileAsInfoProvider provider;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      return Error{Errc::ParseError, "bad as-info line " + std::to_string(line_no)};
    }
    try {
      auto asn = j.at("asn").get<std::uint32_t>();
      auto category = as_category_from_name(j.at("category").get<std::string>());
      if (!category) {
        return Error{Errc::ParseError,
                     "unknown category on as-info line " + std::to_string(line_no)};
      }
      provider.categories_[asn] = *category;
    } catch (const nlohmann::json::exception& ex) {
      return Error{Errc::ParseError,
                   "bad as-info line " + std::to_string(line_no) + ": " + ex.what()};
    }
  }
  return provider;
}

Result<FileAsInfoProvider> FileAsInfoProvider::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) return Error{Errc::IoError, "cannot open " + path};
  return load(in);
}

std::optional<AsCategory> FileAsInfoProvider::category(std::uint32_t asn) {
  auto it = categories_.find(asn);
  if (it == categories_.end()) return std::nullopt;
  return it->second;
}

HttpAsInfoProvider::HttpAsInfoProvider(std::string base_url, int timeout_seconds,
                                       int min_delay_ms)
    : base_url_(std::move(base_url)),
      timeout_seconds_(timeout_seconds),
      min_delay_ms_(min_delay_ms) {}

std::optional<AsCategory> HttpAsInfoProvider::category(std::uint32_t asn) {
  auto cached = cache_.find(asn);
  if (cached != cache_.end()) return cached->second;

  auto now_ms = [] {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
  };
  std::int64_t wait = last_request_ms_ + min_delay_ms_ - now_ms();
  if (wait > 0) std::this_thread::sleep_for(std::chrono::milliseconds(wait));
  last_request_ms_ = now_ms();

  std::optional<AsCategory> result;
  auto parts = fetch::split_url(base_url_);
  if (parts) {
    httplib::Client cli(parts->scheme + "://" + parts->host + ":" +
                        std::to_string(parts->port));
    cli.set_connection_timeout(timeout_seconds_, 0);
    cli.set_read_timeout(timeout_seconds_, 0);
#ifdef CPPHTTPLIB_OPENSSL_SUPPORT
    cli.enable_server_certificate_verification(false);
#endif
    std::string target = parts->target;
    if (!target.empty() && target.back() == '/') target.pop_back();
    auto res = cli.Get(target + "/as/" + std::to_string(asn));
    if (res && res->status >= 200 && res->status < 300) {
      auto j = nlohmann::json::parse(res->body, nullptr, false);
      if (j.is_object() && j.contains("category")) {
        result = as_category_from_name(j["category"].get<std::string>());
      }
    }
  }
  cache_[asn] = result;
  return result;
}

CategoryBreakdown as_category_breakdown(
    const std::map<rpsl::Rir, std::vector<std::uint32_t>>& ases_per_rir,
    AsInfoProvider& provider) {
  CategoryBreakdown breakdown;
  for (const auto& [rir, ases] : ases_per_rir) {
    auto& cells = breakdown.cells[std::string(rpsl::rir_name(rir))];
    for (std::uint32_t asn : ases) {
      auto category = provider.category(asn);
      AsCategory resolved = category.value_or(AsCategory::Unknown);
      cells[std::string(as_category_name(resolved))] += 1;
    }
  }
  return breakdown;
}

std::string CategoryBreakdown::to_json() const {
  nlohmann::json j(cells);
  return j.dump(2);
}

std::string CategoryBreakdown::to_csv() const {
  std::ostringstream out;
  out << "rir,category,as_count\n";
  for (const auto& [rir, per_category] : cells) {
    for (const auto& [category, count] : per_category) {
      out << rir << "," << category << "," << count << "\n";
    }
  }
  return out.str();
}

double LocatorAdherenceSummary::valid_fraction() const { return ratio(valid, records); }
double LocatorAdherenceSummary::not_https_fraction() const {
  return ratio(not_https, records);
}

std::string LocatorAdherenceSummary::to_json() const {
  nlohmann::json j{
      {"records", records},
      {"valid", valid},
      {"invalid_formatting", invalid_formatting},
      {"not_https", not_https},
      {"valid_fraction", valid_fraction()},
      {"not_https_fraction", not_https_fraction()},
  };
  return j.dump(2);
}

double FeedAdherenceSummary::valid_fraction() const {
  return ratio(lines_valid, lines_total);
}
double FeedAdherenceSummary::crlf_fraction() const { return ratio(crlf_files, files); }

std::string FeedAdherenceSummary::to_json() const {
  nlohmann::json j{
      {"files", files},
      {"crlf_files", crlf_files},
      {"crlf_fraction", crlf_fraction()},
      {"encoding_bad_files", encoding_bad_files},
      {"lines_total", lines_total},
      {"lines_valid", lines_valid},
      {"lines_malformed", lines_malformed},
      {"valid_fraction", valid_fraction()},
      {"reasons",
       {{"not_enough_fields", not_enough_fields},
        {"malformed_ip_prefix", malformed_ip_prefix},
        {"malformed_country_code", malformed_country_code},
        {"malformed_region_code", malformed_region_code}}},
      {"extra_field_lines", extra_field_lines},
  };
  return j.dump(2);
}

AdherenceSummaries rfc_adherence_summaries(
    const std::vector<rpsl::LocatorIndexEntry>& index,
    const std::vector<geofeed::FileReport>& reports) {
  AdherenceSummaries out;

  struct RecordFlags {
    bool invalid_formatting = false;
    bool not_https = false;
  };
  std::map<std::string, RecordFlags> records;
  for (const auto& entry : index) {
    auto& flags = records[entry.record_key()];
    flags.invalid_formatting |= entry.verdict.invalid_formatting;
    flags.not_https |= entry.verdict.not_https;
  }
  out.locator.records = records.size();
  for (const auto& [key, flags] : records) {
    if (flags.invalid_formatting) out.locator.invalid_formatting += 1;
    if (flags.not_https) out.locator.not_https += 1;
    if (!flags.invalid_formatting && !flags.not_https) out.locator.valid += 1;
  }

  for (const auto& report : reports) {
    out.feed.files += 1;
    if (report.crlf_ok) out.feed.crlf_files += 1;
    if (!report.encoding_ok) out.feed.encoding_bad_files += 1;
    out.feed.lines_total += report.total;
    out.feed.lines_valid += report.valid;
    out.feed.lines_malformed += report.malformed;
    out.feed.not_enough_fields += report.not_enough_fields;
    out.feed.malformed_ip_prefix += report.malformed_ip_prefix;
    out.feed.malformed_country_code += report.malformed_country_code;
    out.feed.malformed_region_code += report.malformed_region_code;
    out.feed.extra_field_lines += report.extra_field_lines;
  }
  return out;
}

PrefixHistogram prefix_length_histogram(const std::vector<geofeed::GeofeedLine>& lines,
                                        net::Family family,
                                        const HistogramFilters& filters) {
  PrefixHistogram histogram;
  histogram.family = family;
  histogram.filters = filters;

  std::map<std::string, std::uint64_t> per_country;
  for (const auto& line : lines) {
    if (!line.valid() || !line.ip_prefix) continue;
    if (line.ip_prefix->family() != family) continue;
    histogram.prefilter_total += 1;
    per_country[line.alpha2code] += 1;
  }

  std::set<std::string> kept;
  for (const auto& [country, count] : per_country) {
    if (!filters.apply_country_filter ||
        ratio(count, histogram.prefilter_total) >= filters.country_min_share) {
      kept.insert(country);
    }
  }

  for (const auto& line : lines) {
    if (!line.valid() || !line.ip_prefix) continue;
    if (line.ip_prefix->family() != family) continue;
    if (!kept.count(line.alpha2code)) continue;
    unsigned length = line.ip_prefix->length();
    if (family == net::Family::V6 && filters.v6_lengths_multiple_of_4 && length % 4 != 0) {
      continue;
    }
    histogram.cells[{line.alpha2code, length}] += 1;
  }
  return histogram;
}

std::optional<unsigned> PrefixHistogram::argmax_length() const {
  std::map<unsigned, std::uint64_t> per_length;
  for (const auto& [cell, count] : cells) per_length[cell.second] += count;
  std::optional<unsigned> best;
  std::uint64_t best_count = 0;
  for (const auto& [length, count] : per_length) {
    if (count > best_count) {
      best = length;
      best_count = count;
    }
  }
  return best;
}

std::string PrefixHistogram::to_json() const {
  nlohmann::json cells_json = nlohmann::json::array();
  for (const auto& [cell, count] : cells) {
    cells_json.push_back(nlohmann::json{
        {"country", cell.first}, {"length", cell.second}, {"count", count}});
  }
  nlohmann::json j{
      {"family", family == net::Family::V4 ? "v4" : "v6"},
      {"prefilter_total", prefilter_total},
      {"filters",
       {{"v6_lengths_multiple_of_4", filters.v6_lengths_multiple_of_4},
        {"apply_country_filter", filters.apply_country_filter},
        {"country_min_share", filters.country_min_share}}},
      {"cells", cells_json},
  };
  return j.dump(2);
}

std::string PrefixHistogram::to_csv() const {
  std::ostringstream out;
  out << "country,length,count\n";
  for (const auto& [cell, count] : cells) {
    out << cell.first << "," << cell.second << "," << count << "\n";
  }
  return out.str();
}

CountryCounts country_prefix_counts(const std::vector<geofeed::GeofeedLine>& lines) {
  CountryCounts counts;
  for (const auto& line : lines) {
    if (!line.valid()) continue;
    if (line.alpha2code.empty()) {
      counts.no_country += 1;
    } else {
      counts.countries[line.alpha2code] += 1;
    }
  }
  return counts;
}

std::optional<std::string> CountryCounts::argmax() const {
  std::optional<std::string> best;
  std::uint64_t best_count = 0;
  for (const auto& [country, count] : countries) {
    if (count > best_count) {
      best = country;
      best_count = count;
    }
  }
  return best;
}

std::string CountryCounts::to_json() const {
  nlohmann::json j{
      {"countries", countries},
      {"no_country", no_country},
  };
  return j.dump(2);
}

std::string CountryCounts::to_csv() const {
  std::ostringstream out;
  out << "country,count\n";
  for (const auto& [country, count] : countries) {
    out << country << "," << count << "\n";
  }
  if (no_country > 0) out << "," << no_country << "\n";
  return out.str();
}

}  // namespace gfk::analytics
