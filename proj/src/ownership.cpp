// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The geofeedkit Authors

#include "geofeedkit/ownership.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>

#include "geofeedkit/fetch.hpp"

namespace gfk::auth {

namespace {

Result<nlohmann::json> parse_jsonl_line(const std::string& line, std::size_t line_no) {
  auto j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    return Error{Errc::ParseError, "bad json on line " + std::to_string(line_no)};
  }
  return j;
}

}  // namespace

Result<RpkiSnapshotSource> RpkiSnapshotSource::load(std::istream& in, MatchRule rule) {
  RpkiSnapshotSource source;
  source.rule_ = rule;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto j = parse_jsonl_line(line, line_no);
    if (!j.ok()) return j.error();
    try {
      Record rec;
      auto prefix = net::Prefix::parse(j.value().at("prefix").get<std::string>());
      if (!prefix.ok()) {
        return Error{Errc::ParseError,
                     "bad prefix on line " + std::to_string(line_no) + ": " +
                         prefix.error().message};
      }
      rec.prefix = prefix.value();
      rec.max_length = j.value().at("max_length").get<int>();
      rec.asn = j.value().at("asn").get<std::uint32_t>();
      source.records_.push_back(rec);
    } catch (const nlohmann::json::exception& ex) {
      return Error{Errc::ParseError,
                   "bad record on line " + std::to_string(line_no) + ": " + ex.what()};
    }
  }
  std::sort(source.records_.begin(), source.records_.end(),
            [](const Record& a, const Record& b) {
              if (a.prefix != b.prefix) return a.prefix < b.prefix;
              return a.asn < b.asn;
            });
  return source;
}

Result<RpkiSnapshotSource> RpkiSnapshotSource::load_file(const std::string& path,
                                                         MatchRule rule) {
  std::ifstream in(path);
  if (!in) return Error{Errc::IoError, "cannot open " + path};
  return load(in, rule);
}

Result<std::optional<std::string>> RpkiSnapshotSource::lookup(const net::Prefix& prefix) {
  const Record* best = nullptr;
  for (const auto& rec : records_) {
    if (rec.prefix.family() != prefix.family()) continue;
    if (rule_ == MatchRule::Exact) {
      if (!(rec.prefix == prefix)) continue;
    } else {
      if (!rec.prefix.contains(prefix)) continue;
    }
    if (static_cast<int>(prefix.length()) > rec.max_length) continue;
    if (!best || rec.prefix.length() > best->prefix.length()) best = &rec;
  }
  if (!best) return std::optional<std::string>{};
  return std::optional<std::string>("AS" + std::to_string(best->asn));
}

Result<FileOwnershipSource> FileOwnershipSource::load(std::istream& in, MatchRule rule) {
  FileOwnershipSource source;
  source.rule_ = rule;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto j = parse_jsonl_line(line, line_no);
    if (!j.ok()) return j.error();
    try {
      Record rec;
      auto prefix = net::Prefix::parse(j.value().at("prefix").get<std::string>());
      if (!prefix.ok()) {
        return Error{Errc::ParseError,
                     "bad prefix on line " + std::to_string(line_no) + ": " +
                         prefix.error().message};
      }
      rec.prefix = prefix.value();
      rec.owner = j.value().at("owner").get<std::string>();
      source.records_.push_back(std::move(rec));
    } catch (const nlohmann::json::exception& ex) {
      return Error{Errc::ParseError,
                   "bad record on line " + std::to_string(line_no) + ": " + ex.what()};
    }
  }
  std::sort(source.records_.begin(), source.records_.end(),
            [](const Record& a, const Record& b) { return a.prefix < b.prefix; });
  return source;
}

Result<FileOwnershipSource> FileOwnershipSource::load_file(const std::string& path,
                                                           MatchRule rule) {
  std::ifstream in(path);
  if (!in) return Error{Errc::IoError, "cannot open " + path};
  return load(in, rule);
}

Result<std::optional<std::string>> FileOwnershipSource::lookup(const net::Prefix& prefix) {
  const Record* best = nullptr;
  for (const auto& rec : records_) {
    if (rec.prefix.family() != prefix.family()) continue;
    if (rule_ == MatchRule::Exact) {
      if (!(rec.prefix == prefix)) continue;
    } else {
      if (!rec.prefix.contains(prefix)) continue;
    }
    if (!best || rec.prefix.length() > best->prefix.length()) best = &rec;
  }
  if (!best) return std::optional<std::string>{};
  return std::optional<std::string>(best->owner);
}

HttpOwnershipSource::HttpOwnershipSource(std::string base_url, int timeout_seconds)
    : base_url_(std::move(base_url)), timeout_seconds_(timeout_seconds) {}

Result<std::optional<std::string>> HttpOwnershipSource::lookup(const net::Prefix& prefix) {
  auto parts = fetch::split_url(base_url_);
  if (!parts) {
    return Error{Errc::SourceUnavailable, "bad base url: " + base_url_};
  }
  std::string cidr = prefix.to_string();
  auto slash = cidr.find('/');
  cidr.replace(slash, 1, "%2F");
  std::string target = parts->target;
  if (!target.empty() && target.back() == '/') target.pop_back();
  target += "/prefix/" + cidr;

  httplib::Client cli(parts->scheme + "://" + parts->host + ":" +
                      std::to_string(parts->port));
  cli.set_connection_timeout(timeout_seconds_, 0);
  cli.set_read_timeout(timeout_seconds_, 0);
#ifdef CPPHTTPLIB_OPENSSL_SUPPORT
  cli.enable_server_certificate_verification(false);
#endif
  auto res = cli.Get(target);
  if (!res) {
    return Error{Errc::SourceUnavailable,
                 "lookup transport failure: " + httplib::to_string(res.error())};
  }
  if (res->status == 404) return std::optional<std::string>{};
  if (res->status < 200 || res->status >= 300) {
    return Error{Errc::SourceUnavailable,
                 "lookup returned http status " + std::to_string(res->status)};
  }
  auto j = nlohmann::json::parse(res->body, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("owner")) {
    return Error{Errc::SourceUnavailable, "lookup returned malformed body"};
  }
  return std::optional<std::string>(j["owner"].get<std::string>());
}

std::string normalize_owner(std::string_view owner) {
  std::size_t b = 0, e = owner.size();
  while (b < e && std::isspace(static_cast<unsigned char>(owner[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(owner[e - 1]))) --e;
  std::string_view body = owner.substr(b, e - b);

  std::string_view digits = body;
  if (digits.size() > 2 && (digits[0] == 'A' || digits[0] == 'a') &&
      (digits[1] == 'S' || digits[1] == 's')) {
    digits = digits.substr(2);
  }
  bool numeric = !digits.empty() &&
                 std::all_of(digits.begin(), digits.end(),
                             [](unsigned char c) { return std::isdigit(c); });
  if (numeric) {
    std::size_t skip = 0;
    while (skip + 1 < digits.size() && digits[skip] == '0') ++skip;
    return "AS" + std::string(digits.substr(skip));
  }
  std::string lowered(body);
  std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return lowered;
}

bool owners_equal(std::string_view a, std::string_view b) {
  return normalize_owner(a) == normalize_owner(b);
}

Result<std::vector<OwnershipClaim>> load_claims(std::istream& in) {
  std::vector<OwnershipClaim> claims;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto j = parse_jsonl_line(line, line_no);
    if (!j.ok()) return j.error();
    try {
      OwnershipClaim claim;
      auto prefix = net::Prefix::parse(j.value().at("prefix").get<std::string>());
      if (!prefix.ok()) {
        return Error{Errc::ParseError,
                     "bad prefix on line " + std::to_string(line_no) + ": " +
                         prefix.error().message};
      }
      claim.prefix = prefix.value();
      claim.claimed_owner = j.value().at("owner").get<std::string>();
      claims.push_back(std::move(claim));
    } catch (const nlohmann::json::exception& ex) {
      return Error{Errc::ParseError,
                   "bad claim on line " + std::to_string(line_no) + ": " + ex.what()};
    }
  }
  return claims;
}

std::string_view ownership_verdict_name(OwnershipVerdictKind kind) {
  switch (kind) {
    case OwnershipVerdictKind::Match: return "match";
    case OwnershipVerdictKind::Incorrect: return "incorrect";
    case OwnershipVerdictKind::Missing: return "missing";
  }
  return "missing";
}

std::string OwnershipVerdict::to_json() const {
  nlohmann::json j{
      {"prefix", prefix.to_string()},
      {"claimed_owner", claimed_owner},
      {"verdict", std::string(ownership_verdict_name(kind))},
  };
  if (kind == OwnershipVerdictKind::Incorrect) j["found_owner"] = found_owner;
  return j.dump();
}

std::string CountSummary::to_json() const {
  nlohmann::json j{
      {"match", match},       {"incorrect", incorrect}, {"missing", missing},
      {"total", total},       {"match_rate", match_rate()},
  };
  return j.dump(2);
}

Result<OwnershipComparison> compare_ownership(const std::vector<OwnershipClaim>& claims,
                                              OwnershipSource& source) {
  OwnershipComparison out;
  out.verdicts.reserve(claims.size());
  for (const auto& claim : claims) {
    auto found = source.lookup(claim.prefix);
    if (!found.ok()) return found.error();
    OwnershipVerdict verdict;
    verdict.prefix = claim.prefix;
    verdict.claimed_owner = claim.claimed_owner;
    if (!found.value().has_value()) {
      verdict.kind = OwnershipVerdictKind::Missing;
      out.summary.missing += 1;
    } else if (owners_equal(*found.value(), claim.claimed_owner)) {
      verdict.kind = OwnershipVerdictKind::Match;
      out.summary.match += 1;
    } else {
      verdict.kind = OwnershipVerdictKind::Incorrect;
      verdict.found_owner = *found.value();
      out.summary.incorrect += 1;
    }
    out.verdicts.push_back(std::move(verdict));
  }
  out.summary.total = claims.size();
  return out;
}

}  // namespace gfk::auth
