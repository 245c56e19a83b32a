// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The geofeedkit Authors

#include "geofeedkit/fetch.hpp"

#include <netdb.h>
#include <sys/socket.h>
#include <sys/types.h>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <cstring>
#include <ctime>
#include <deque>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "geofeedkit/digest.hpp"

namespace gfk::fetch {

namespace fs = std::filesystem;

std::string_view fetch_status_name(FetchStatus status) {
  switch (status) {
    case FetchStatus::Ok: return "ok";
    case FetchStatus::BadUrl: return "bad_url";
    case FetchStatus::DnsFailure: return "dns_failure";
    case FetchStatus::ConnectionError: return "connection_error";
    case FetchStatus::Timeout: return "timeout";
    case FetchStatus::HttpError: return "http_error";
    case FetchStatus::TooLarge: return "too_large";
    case FetchStatus::SchemeRefused: return "scheme_refused";
    case FetchStatus::RedirectError: return "redirect_error";
  }
  return "unknown";
}

std::optional<UrlParts> split_url(std::string_view url) {
  auto sep = url.find("://");
  if (sep == std::string_view::npos) return std::nullopt;
  UrlParts parts;
  parts.scheme = std::string(url.substr(0, sep));
  std::transform(parts.scheme.begin(), parts.scheme.end(), parts.scheme.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (parts.scheme != "http" && parts.scheme != "https") return std::nullopt;
  std::string_view rest = url.substr(sep + 3);
  auto slash = rest.find_first_of("/?#");
  std::string_view authority = slash == std::string_view::npos ? rest : rest.substr(0, slash);
  if (slash == std::string_view::npos) {
    parts.target = "/";
  } else if (rest[slash] == '/') {
    parts.target = std::string(rest.substr(slash));
  } else {
    // bare query or fragment straight after the host
    parts.target = "/" + std::string(rest.substr(slash));
  }
  // drop any fragment, it is never sent on the wire
  auto hash = parts.target.find('#');
  if (hash != std::string::npos) parts.target.resize(hash);
  if (authority.empty()) return std::nullopt;
  if (authority[0] == '[') {
    auto close = authority.find(']');
    if (close == std::string_view::npos) return std::nullopt;
    parts.host = std::string(authority.substr(1, close - 1));
    authority.remove_prefix(close + 1);
    if (!authority.empty()) {
      if (authority[0] != ':') return std::nullopt;
      authority.remove_prefix(1);
    } else {
      authority = {};
    }
  } else {
    auto colon = authority.rfind(':');
    if (colon == std::string_view::npos) {
      parts.host = std::string(authority);
      authority = {};
    } else {
      parts.host = std::string(authority.substr(0, colon));
      authority.remove_prefix(colon + 1);
    }
  }
  if (parts.host.empty()) return std::nullopt;
  if (!authority.empty()) {
    int port = 0;
    for (char c : authority) {
      if (c < '0' || c > '9') return std::nullopt;
      port = port * 10 + (c - '0');
      if (port > 65535) return std::nullopt;
    }
    parts.port = port;
  } else {
    parts.port = parts.scheme == "https" ? 443 : 80;
  }
  return parts;
}

namespace {

bool resolves(const std::string& host) {
  // Literal addresses skip the resolver.
  struct in6_addr a6;
  struct in_addr a4;
  if (inet_pton(AF_INET, host.c_str(), &a4) == 1) return true;
  if (inet_pton(AF_INET6, host.c_str(), &a6) == 1) return true;
  struct addrinfo hints;
  std::memset(&hints, 0, sizeof(hints));
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  struct addrinfo* res = nullptr;
  int rc = getaddrinfo(host.c_str(), nullptr, &hints, &res);
  if (res) freeaddrinfo(res);
  return rc == 0;
}

std::string resolve_redirect(const UrlParts& base, const std::string& location) {
  if (location.find("://") != std::string::npos) return location;
  std::string origin = base.scheme + "://" + base.host;
  bool default_port = (base.scheme == "https" && base.port == 443) ||
                      (base.scheme == "http" && base.port == 80);
  if (!default_port) origin += ":" + std::to_string(base.port);
  if (!location.empty() && location[0] == '/') return origin + location;
  // relative to the current path's directory
  std::string dir = base.target;
  auto slash = dir.rfind('/');
  dir = slash == std::string::npos ? "/" : dir.substr(0, slash + 1);
  return origin + dir + location;
}

struct SingleResult {
  enum class Kind { Response, Redirect, TransportError, Timeout, TooLarge } kind;
  int http_status = 0;
  std::string body;
  std::string location;
  std::string detail;
};

SingleResult single_request(const UrlParts& parts, const FetchPolicy& policy) {
  std::string origin = parts.scheme + "://" + parts.host + ":" + std::to_string(parts.port);
  httplib::Client cli(origin);
  cli.set_connection_timeout(policy.timeout_seconds, 0);
  cli.set_read_timeout(policy.timeout_seconds, 0);
  cli.set_write_timeout(policy.timeout_seconds, 0);
  cli.set_follow_location(false);
#ifdef CPPHTTPLIB_OPENSSL_SUPPORT
  cli.enable_server_certificate_verification(policy.verify_tls);
#endif
  httplib::Headers headers{{"User-Agent", policy.user_agent}, {"Accept", "*/*"}};

  SingleResult out{SingleResult::Kind::TransportError};
  std::string body;
  bool too_large = false;
  auto receiver = [&](const char* data, std::size_t len) {
    if (body.size() + len > policy.max_body_bytes) {
      too_large = true;
      return false;
    }
    body.append(data, len);
    return true;
  };
  auto res = cli.Get(parts.target, headers, receiver);
  if (too_large) {
    out.kind = SingleResult::Kind::TooLarge;
    if (res) out.http_status = res->status;
    return out;
  }
  if (!res) {
    switch (res.error()) {
      case httplib::Error::ConnectionTimeout:
      case httplib::Error::Read:
      case httplib::Error::Write:
        out.kind = SingleResult::Kind::Timeout;
        break;
      default:
        out.kind = SingleResult::Kind::TransportError;
        break;
    }
    out.detail = httplib::to_string(res.error());
    return out;
  }
  out.http_status = res->status;
  if (res->status >= 300 && res->status < 400) {
    out.kind = SingleResult::Kind::Redirect;
    out.location = res->get_header_value("Location");
    return out;
  }
  out.kind = SingleResult::Kind::Response;
  out.body = std::move(body);
  return out;
}

}  // namespace

FetchOutcome fetch_url(const std::string& url, const FetchPolicy& policy) {
  FetchOutcome outcome;
  outcome.final_url = url;
  auto parts = split_url(url);
  if (!parts) {
    outcome.status = FetchStatus::BadUrl;
    outcome.detail = "unparseable url";
    return outcome;
  }
  std::string current_url = url;
  UrlParts current = *parts;
  bool started_https = current.scheme == "https";

  if (!resolves(current.host)) {
    outcome.status = FetchStatus::DnsFailure;
    outcome.detail = "hostname does not resolve: " + current.host;
    outcome.attempts = 1;
    return outcome;
  }

  for (int attempt = 0; attempt <= policy.retries; ++attempt) {
    outcome.attempts = attempt + 1;
    outcome.redirects = 0;
    current_url = url;
    current = *parts;
    std::set<std::string> seen{current_url};
    bool transport_failed = false;
    while (true) {
      auto single = single_request(current, policy);
      outcome.http_status = single.http_status ? single.http_status : outcome.http_status;
      switch (single.kind) {
        case SingleResult::Kind::Response:
          if (single.http_status >= 200 && single.http_status < 300) {
            outcome.status = FetchStatus::Ok;
            outcome.body = std::move(single.body);
          } else {
            outcome.status = FetchStatus::HttpError;
            outcome.detail = "http status " + std::to_string(single.http_status);
          }
          outcome.final_url = current_url;
          return outcome;
        case SingleResult::Kind::TooLarge:
          outcome.status = FetchStatus::TooLarge;
          outcome.detail = "body exceeds " + std::to_string(policy.max_body_bytes) + " bytes";
          outcome.final_url = current_url;
          return outcome;
        case SingleResult::Kind::Timeout:
          outcome.status = FetchStatus::Timeout;
          outcome.detail = single.detail;
          transport_failed = true;
          break;
        case SingleResult::Kind::TransportError:
          outcome.status = FetchStatus::ConnectionError;
          outcome.detail = single.detail;
          transport_failed = true;
          break;
        case SingleResult::Kind::Redirect: {
          if (single.location.empty()) {
            outcome.status = FetchStatus::RedirectError;
            outcome.detail = "redirect without Location header";
            outcome.final_url = current_url;
            return outcome;
          }
          std::string next_url = resolve_redirect(current, single.location);
          auto next = split_url(next_url);
          if (!next) {
            outcome.status = FetchStatus::RedirectError;
            outcome.detail = "redirect to unparseable url: " + next_url;
            outcome.final_url = current_url;
            return outcome;
          }
          if (started_https && next->scheme == "http" && !policy.allow_insecure_redirect) {
            outcome.status = FetchStatus::SchemeRefused;
            outcome.detail = "refused downgrade to " + next_url;
            outcome.final_url = current_url;
            return outcome;
          }
          ++outcome.redirects;
          if (outcome.redirects > policy.redirect_limit) {
            outcome.status = FetchStatus::RedirectError;
            outcome.detail = "redirect limit exceeded";
            outcome.final_url = current_url;
            return outcome;
          }
          if (!seen.insert(next_url).second) {
            outcome.status = FetchStatus::RedirectError;
            outcome.detail = "redirect loop via " + next_url;
            outcome.final_url = current_url;
            return outcome;
          }
          if (next->host != current.host && !resolves(next->host)) {
            outcome.status = FetchStatus::DnsFailure;
            outcome.detail = "redirect target does not resolve: " + next->host;
            outcome.final_url = next_url;
            return outcome;
          }
          current = *next;
          current_url = next_url;
          continue;
        }
      }
      break;  // transport error: leave the redirect loop, maybe retry
    }
    if (!transport_failed) break;
  }
  outcome.final_url = current_url;
  return outcome;
}

CrawlResult crawl(const std::vector<std::string>& urls, const FetchPolicy& policy,
                  FetchFn fetch_fn) {
  if (!fetch_fn) fetch_fn = fetch_url;

  std::vector<std::string> distinct = urls;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  struct Job {
    std::string url;
    std::string host;
    std::size_t slot;
  };
  std::deque<Job> queue;
  std::vector<CrawlEntry> entries(distinct.size());
  for (std::size_t i = 0; i < distinct.size(); ++i) {
    entries[i].url = distinct[i];
    auto parts = split_url(distinct[i]);
    queue.push_back({distinct[i], parts ? parts->host : std::string(), i});
  }

  using Clock = std::chrono::steady_clock;
  struct HostState {
    int active = 0;
    Clock::time_point next_allowed = Clock::time_point::min();
  };
  std::map<std::string, HostState> hosts;
  std::mutex mu;
  std::condition_variable cv;
  std::uint64_t completions = 0;

  auto worker = [&] {
    std::unique_lock<std::mutex> lock(mu);
    while (true) {
      if (queue.empty()) return;
      auto now = Clock::now();
      std::optional<std::size_t> pick;
      Clock::time_point earliest = Clock::time_point::max();
      for (std::size_t i = 0; i < queue.size(); ++i) {
        auto& host = hosts[queue[i].host];
        if (host.active >= policy.per_host_concurrency) continue;
        if (host.next_allowed > now) {
          earliest = std::min(earliest, host.next_allowed);
          continue;
        }
        pick = i;
        break;
      }
      if (!pick) {
        if (earliest == Clock::time_point::max()) {
          // Every queued host is saturated; sleep until some fetch finishes.
          std::uint64_t seen = completions;
          cv.wait(lock, [&] { return completions != seen || queue.empty(); });
        } else {
          cv.wait_until(lock, earliest);
        }
        continue;
      }
      Job job = queue[*pick];
      queue.erase(queue.begin() + static_cast<std::ptrdiff_t>(*pick));
      auto& host = hosts[job.host];
      host.active += 1;
      host.next_allowed = Clock::now() + std::chrono::milliseconds(policy.per_host_delay_ms);
      lock.unlock();

      FetchOutcome outcome = fetch_fn(job.url, policy);

      lock.lock();
      entries[job.slot].outcome = std::move(outcome);
      auto& host_done = hosts[job.host];
      host_done.active -= 1;
      host_done.next_allowed =
          Clock::now() + std::chrono::milliseconds(policy.per_host_delay_ms);
      ++completions;
      cv.notify_all();
    }
  };

  int threads = std::max(1, policy.worker_threads);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  CrawlResult result;
  result.entries = std::move(entries);
  return result;
}

AvailabilitySummary summarize(const CrawlResult& result) {
  AvailabilitySummary summary;
  summary.total_urls = result.entries.size();
  for (const auto& entry : result.entries) {
    summary.by_status[std::string(fetch_status_name(entry.outcome.status))] += 1;
    if (entry.outcome.accessible()) summary.accessible += 1;
  }
  return summary;
}

std::string AvailabilitySummary::to_json() const {
  nlohmann::json by;
  for (const auto& [name, count] : by_status) by[name] = count;
  nlohmann::json j{
      {"total_urls", total_urls},
      {"accessible", accessible},
      {"accessible_fraction", accessible_fraction()},
      {"by_status", by},
  };
  return j.dump(2);
}

std::string SnapshotEntry::to_json() const {
  nlohmann::json j{
      {"url", url},       {"digest", digest_hex}, {"status", status},
      {"http_status", http_status}, {"bytes", bytes},   {"fetched_at", fetched_at},
  };
  return j.dump();
}

Result<SnapshotEntry> SnapshotEntry::from_json(std::string_view text) {
  auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    return Error{Errc::ParseError, "bad snapshot index line"};
  }
  try {
    SnapshotEntry e;
    e.url = j.at("url").get<std::string>();
    e.digest_hex = j.value("digest", "");
    e.status = j.value("status", "ok");
    e.http_status = j.value("http_status", 0);
    e.bytes = j.value("bytes", std::uint64_t{0});
    e.fetched_at = j.value("fetched_at", std::int64_t{0});
    return e;
  } catch (const nlohmann::json::exception& ex) {
    return Error{Errc::ParseError, std::string("bad snapshot index line: ") + ex.what()};
  }
}

Result<SnapshotStore> SnapshotStore::open(const std::string& dir) {
  SnapshotStore store;
  store.dir_ = dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    return Error{Errc::IoError, "cannot create snapshot dir " + dir + ": " + ec.message()};
  }
  fs::path index = fs::path(dir) / "index.jsonl";
  if (fs::exists(index)) {
    std::ifstream in(index);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      auto entry = SnapshotEntry::from_json(line);
      if (!entry.ok()) {
        return Error{Errc::ParseError,
                     "snapshot index line " + std::to_string(line_no) + ": " +
                         entry.error().message};
      }
      store.entries_[entry.value().url] = std::move(entry).take();
    }
  }
  return store;
}

Result<SnapshotEntry> SnapshotStore::store(const std::string& url,
                                           const FetchOutcome& outcome) {
  auto digest = sha256(outcome.body);
  std::string hex = to_hex(digest);
  fs::path shard = fs::path(dir_) / hex.substr(0, 2);
  std::error_code ec;
  fs::create_directories(shard, ec);
  if (ec) {
    return Error{Errc::IoError, "cannot create " + shard.string() + ": " + ec.message()};
  }
  fs::path body_path = shard / (hex + ".csv");
  if (!fs::exists(body_path)) {
    std::ofstream out(body_path, std::ios::binary);
    out.write(outcome.body.data(), static_cast<std::streamsize>(outcome.body.size()));
    if (!out) {
      return Error{Errc::IoError, "write failed for " + body_path.string()};
    }
  }
  SnapshotEntry entry;
  entry.url = url;
  entry.digest_hex = hex;
  entry.status = std::string(fetch_status_name(outcome.status));
  entry.http_status = outcome.http_status;
  entry.bytes = outcome.body.size();
  entry.fetched_at = static_cast<std::int64_t>(std::time(nullptr));
  entries_[url] = entry;
  return entry;
}

Result<void> SnapshotStore::record_failure(const std::string& url,
                                           const FetchOutcome& outcome) {
  SnapshotEntry entry;
  entry.url = url;
  entry.status = std::string(fetch_status_name(outcome.status));
  entry.http_status = outcome.http_status;
  entry.fetched_at = static_cast<std::int64_t>(std::time(nullptr));
  entries_[url] = entry;
  return Result<void>{};
}

Result<std::string> SnapshotStore::read_body(const std::string& digest_hex) const {
  if (digest_hex.size() < 2) {
    return Error{Errc::InvalidArgument, "bad digest: " + digest_hex};
  }
  fs::path body_path = fs::path(dir_) / digest_hex.substr(0, 2) / (digest_hex + ".csv");
  std::ifstream in(body_path, std::ios::binary);
  if (!in) {
    return Error{Errc::IoError, "snapshot body missing: " + body_path.string()};
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::optional<SnapshotEntry> SnapshotStore::lookup(const std::string& url) const {
  auto it = entries_.find(url);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

Result<void> SnapshotStore::flush() const {
  fs::path index = fs::path(dir_) / "index.jsonl";
  std::ofstream out(index, std::ios::binary | std::ios::trunc);
  if (!out) {
    return Error{Errc::IoError, "cannot write " + index.string()};
  }
  for (const auto& [url, entry] : entries_) {
    out << entry.to_json() << "\n";
  }
  if (!out) {
    return Error{Errc::IoError, "write failed for " + index.string()};
  }
  return Result<void>{};
}

}  // namespace gfk::fetch
