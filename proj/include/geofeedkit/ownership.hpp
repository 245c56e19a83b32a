// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The geofeedkit Authors

#pragma once

#include <istream>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geofeedkit/ip.hpp"
#include "geofeedkit/result.hpp"

namespace gfk::auth {

// How a source resolves a queried prefix to a registration record.
enum class MatchRule {
  Covering,  // most-specific record whose prefix covers the query
  Exact,     // record whose prefix equals the query
};

class OwnershipSource {
 public:
  virtual ~OwnershipSource() = default;
  // Owner for the prefix, nullopt when the source has no covering record.
  virtual Result<std::optional<std::string>> lookup(const net::Prefix& prefix) = 0;
  virtual std::string_view name() const = 0;
};

// Route-origin snapshot: line-delimited JSON {prefix, max_length, asn}.
// A record covers a query when its prefix contains the query and the query
// length does not exceed max_length.
class RpkiSnapshotSource : public OwnershipSource {
 public:
  static Result<RpkiSnapshotSource> load(std::istream& in, MatchRule rule);
  static Result<RpkiSnapshotSource> load_file(const std::string& path, MatchRule rule);

  Result<std::optional<std::string>> lookup(const net::Prefix& prefix) override;
  std::string_view name() const override { return "rpki_snapshot"; }
  std::size_t size() const { return records_.size(); }

 private:
  struct Record {
    net::Prefix prefix;
    int max_length = 0;
    std::uint32_t asn = 0;
  };
  std::vector<Record> records_;  // sorted for deterministic tie-breaks
  MatchRule rule_ = MatchRule::Covering;
};

// Generic owner table: line-delimited JSON {prefix, owner}.
class FileOwnershipSource : public OwnershipSource {
 public:
  static Result<FileOwnershipSource> load(std::istream& in, MatchRule rule);
  static Result<FileOwnershipSource> load_file(const std::string& path, MatchRule rule);

  Result<std::optional<std::string>> lookup(const net::Prefix& prefix) override;
  std::string_view name() const override { return "file"; }
  std::size_t size() const { return records_.size(); }

 private:
  struct Record {
    net::Prefix prefix;
    std::string owner;
  };
  std::vector<Record> records_;
  MatchRule rule_ = MatchRule::Covering;
};

// Live adapter: GET <base_url>/prefix/<cidr> returning {"owner": "..."};
// 404 means no record, transport failures surface as SourceUnavailable.
class HttpOwnershipSource : public OwnershipSource {
 public:
  HttpOwnershipSource(std::string base_url, int timeout_seconds = 10);

  Result<std::optional<std::string>> lookup(const net::Prefix& prefix) override;
  std::string_view name() const override { return "http"; }

 private:
  std::string base_url_;
  int timeout_seconds_;
};

// AS numbers compare numerically regardless of an "AS" prefix; anything else
// compares case-insensitively after trimming.
std::string normalize_owner(std::string_view owner);
bool owners_equal(std::string_view a, std::string_view b);

struct OwnershipClaim {
  net::Prefix prefix;
  std::string claimed_owner;
};

Result<std::vector<OwnershipClaim>> load_claims(std::istream& in);

enum class OwnershipVerdictKind { Match, Incorrect, Missing };
std::string_view ownership_verdict_name(OwnershipVerdictKind kind);

struct OwnershipVerdict {
  net::Prefix prefix;
  std::string claimed_owner;
  OwnershipVerdictKind kind = OwnershipVerdictKind::Missing;
  std::string found_owner;  // set for Incorrect

  std::string to_json() const;
};

struct CountSummary {
  std::uint64_t match = 0;
  std::uint64_t incorrect = 0;
  std::uint64_t missing = 0;
  std::uint64_t total = 0;

  double match_rate() const {
    return total == 0 ? 0.0 : static_cast<double>(match) / static_cast<double>(total);
  }
  std::string to_json() const;
};

struct OwnershipComparison {
  std::vector<OwnershipVerdict> verdicts;
  CountSummary summary;
};

Result<OwnershipComparison> compare_ownership(const std::vector<OwnershipClaim>& claims,
                                              OwnershipSource& source);

}  // namespace gfk::auth
