// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The geofeedkit Authors

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geofeedkit/result.hpp"

namespace gfk::fetch {

enum class FetchStatus {
  Ok,
  BadUrl,
  DnsFailure,
  ConnectionError,
  Timeout,
  HttpError,       // final response had a non-2xx status
  TooLarge,        // body exceeded the configured cap
  SchemeRefused,   // redirect tried to downgrade https to http
  RedirectError,   // loop, missing Location, or limit exceeded
};

std::string_view fetch_status_name(FetchStatus status);

struct FetchPolicy {
  int timeout_seconds = 10;
  int retries = 2;  // additional attempts after the first, transport errors only
  int redirect_limit = 5;
  std::uint64_t max_body_bytes = 64ull << 20;
  int per_host_concurrency = 2;
  int per_host_delay_ms = 1000;
  int worker_threads = 8;
  bool allow_insecure_redirect = false;
  bool verify_tls = false;
  std::string user_agent = "geofeedkit/0.1";
};

struct FetchOutcome {
  FetchStatus status = FetchStatus::Ok;
  int http_status = 0;  // last status seen; 0 when the transport never answered
  std::string body;
  std::string final_url;
  int attempts = 0;
  int redirects = 0;
  std::string detail;

  bool accessible() const { return status == FetchStatus::Ok; }
};

struct UrlParts {
  std::string scheme;
  std::string host;
  int port = 0;
  std::string target;  // path plus query, always starting with '/'
};

std::optional<UrlParts> split_url(std::string_view url);

// Fetches one URL, following redirects manually so downgrade attempts and
// redirect loops can be reported distinctly.  Hostname resolution runs before
// the first connect so DNS failures are not lumped in with refused connects.
FetchOutcome fetch_url(const std::string& url, const FetchPolicy& policy);

struct CrawlEntry {
  std::string url;
  FetchOutcome outcome;
};

struct CrawlResult {
  std::vector<CrawlEntry> entries;  // sorted by url, one per distinct input url
};

using FetchFn = std::function<FetchOutcome(const std::string&, const FetchPolicy&)>;

// Fetches every distinct URL with a bounded worker pool.  At most
// per_host_concurrency requests run against one host at a time and consecutive
// requests to the same host are spaced by per_host_delay_ms.  A custom
// fetch function may be supplied for tests.
CrawlResult crawl(const std::vector<std::string>& urls, const FetchPolicy& policy,
                  FetchFn fetch_fn = {});

struct AvailabilitySummary {
  std::size_t total_urls = 0;
  std::size_t accessible = 0;
  std::map<std::string, std::size_t> by_status;

  double accessible_fraction() const {
    return total_urls == 0 ? 0.0 : static_cast<double>(accessible) / total_urls;
  }
  std::string to_json() const;
};

AvailabilitySummary summarize(const CrawlResult& result);

struct SnapshotEntry {
  std::string url;
  std::string digest_hex;  // empty when the fetch failed
  std::string status;
  int http_status = 0;
  std::uint64_t bytes = 0;
  std::int64_t fetched_at = 0;  // unix seconds

  std::string to_json() const;
  static Result<SnapshotEntry> from_json(std::string_view text);
};

// Content-addressed store for fetched feeds: bodies land under
// <dir>/<hh>/<digest>.csv and an index.jsonl maps URLs to them.
class SnapshotStore {
 public:
  static Result<SnapshotStore> open(const std::string& dir);

  Result<SnapshotEntry> store(const std::string& url, const FetchOutcome& outcome);
  Result<void> record_failure(const std::string& url, const FetchOutcome& outcome);

  Result<std::string> read_body(const std::string& digest_hex) const;
  std::optional<SnapshotEntry> lookup(const std::string& url) const;
  const std::map<std::string, SnapshotEntry>& entries() const { return entries_; }

  Result<void> flush() const;  // rewrites index.jsonl in sorted URL order

 private:
  std::string dir_;
  std::map<std::string, SnapshotEntry> entries_;
};

}  // namespace gfk::fetch
