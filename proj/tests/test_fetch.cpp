// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The geofeedkit Authors

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <httplib.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "geofeedkit/digest.hpp"
#include "geofeedkit/fetch.hpp"

using namespace gfk;
using namespace gfk::fetch;

namespace {

// One local server per test case, bound to an ephemeral port.
struct TestServer {
  httplib::Server server;
  int port = 0;
  std::thread thread;

  void start() {
    port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }

  ~TestServer() {
    server.stop();
    if (thread.joinable()) thread.join();
  }

  std::string url(const std::string& target) const {
    return "http://127.0.0.1:" + std::to_string(port) + target;
  }
};

FetchPolicy quick_policy() {
  FetchPolicy policy;
  policy.timeout_seconds = 5;
  policy.retries = 0;
  policy.per_host_delay_ms = 0;
  policy.worker_threads = 4;
  return policy;
}

}  // namespace

TEST_CASE("url splitting") {
  auto basic = split_url("https://example.com/a/b?c=d#frag");
  REQUIRE(basic);
  CHECK(basic->scheme == "https");
  CHECK(basic->host == "example.com");
  CHECK(basic->port == 443);
  CHECK(basic->target == "/a/b?c=d");

  auto with_port = split_url("http://example.com:8080");
  REQUIRE(with_port);
  CHECK(with_port->port == 8080);
  CHECK(with_port->target == "/");

  auto v6 = split_url("http://[2001:db8::1]:8080/x");
  REQUIRE(v6);
  CHECK(v6->host == "2001:db8::1");
  CHECK(v6->port == 8080);

  CHECK_FALSE(split_url("ftp://example.com/x"));
  CHECK_FALSE(split_url("https://"));
  CHECK_FALSE(split_url("no scheme"));
  CHECK_FALSE(split_url("http://host:99999/"));
}

TEST_CASE("success carries the body") {
  TestServer ts;
  ts.server.Get("/feed.csv", [](const httplib::Request&, httplib::Response& res) {
    res.set_content("10.0.0.0/24,US,,,\r\n", "text/csv");
  });
  ts.start();

  auto outcome = fetch_url(ts.url("/feed.csv"), quick_policy());
  CHECK(outcome.status == FetchStatus::Ok);
  CHECK(outcome.http_status == 200);
  CHECK(outcome.body == "10.0.0.0/24,US,,,\r\n");
  CHECK(outcome.attempts == 1);
  CHECK(outcome.accessible());
}

TEST_CASE("non-2xx is an http error") {
  TestServer ts;
  ts.server.Get("/gone", [](const httplib::Request&, httplib::Response& res) {
    res.status = 404;
  });
  ts.start();

  auto outcome = fetch_url(ts.url("/gone"), quick_policy());
  CHECK(outcome.status == FetchStatus::HttpError);
  CHECK(outcome.http_status == 404);
  CHECK_FALSE(outcome.accessible());
}

TEST_CASE("redirects are followed and counted") {
  TestServer ts;
  ts.server.Get("/start", [&](const httplib::Request&, httplib::Response& res) {
    res.set_redirect("/middle");
  });
  ts.server.Get("/middle", [&](const httplib::Request&, httplib::Response& res) {
    res.set_redirect("/end");
  });
  ts.server.Get("/end", [](const httplib::Request&, httplib::Response& res) {
    res.set_content("done", "text/plain");
  });
  ts.start();

  auto outcome = fetch_url(ts.url("/start"), quick_policy());
  CHECK(outcome.status == FetchStatus::Ok);
  CHECK(outcome.body == "done");
  CHECK(outcome.redirects == 2);
  CHECK(outcome.final_url == ts.url("/end"));
}

TEST_CASE("absolute redirects to the same server work") {
  TestServer ts;
  ts.server.Get("/start", [&](const httplib::Request&, httplib::Response& res) {
    res.set_redirect(ts.url("/end"));
  });
  ts.server.Get("/end", [](const httplib::Request&, httplib::Response& res) {
    res.set_content("abs", "text/plain");
  });
  ts.start();

  auto outcome = fetch_url(ts.url("/start"), quick_policy());
  CHECK(outcome.status == FetchStatus::Ok);
  CHECK(outcome.body == "abs");
}

TEST_CASE("redirect loops are reported") {
  TestServer ts;
  ts.server.Get("/a", [](const httplib::Request&, httplib::Response& res) {
    res.set_redirect("/b");
  });
  ts.server.Get("/b", [](const httplib::Request&, httplib::Response& res) {
    res.set_redirect("/a");
  });
  ts.start();

  auto outcome = fetch_url(ts.url("/a"), quick_policy());
  CHECK(outcome.status == FetchStatus::RedirectError);
}

TEST_CASE("redirect limits are enforced") {
  TestServer ts;
  ts.server.Get(R"(/hop/(\d+))", [&](const httplib::Request& req, httplib::Response& res) {
    int n = std::stoi(req.matches[1]);
    res.set_redirect("/hop/" + std::to_string(n + 1));
  });
  ts.start();

  auto policy = quick_policy();
  policy.redirect_limit = 3;
  auto outcome = fetch_url(ts.url("/hop/0"), policy);
  CHECK(outcome.status == FetchStatus::RedirectError);
}

TEST_CASE("a redirect without a location is an error") {
  TestServer ts;
  ts.server.Get("/bare", [](const httplib::Request&, httplib::Response& res) {
    res.status = 302;
  });
  ts.start();

  auto outcome = fetch_url(ts.url("/bare"), quick_policy());
  CHECK(outcome.status == FetchStatus::RedirectError);
}

TEST_CASE("oversized bodies are cut off") {
  TestServer ts;
  ts.server.Get("/big", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(std::string(200000, 'x'), "text/plain");
  });
  ts.start();

  auto policy = quick_policy();
  policy.max_body_bytes = 1000;
  auto outcome = fetch_url(ts.url("/big"), policy);
  CHECK(outcome.status == FetchStatus::TooLarge);
}

TEST_CASE("unresolvable hosts fail as dns errors without retries") {
  auto policy = quick_policy();
  policy.retries = 2;
  auto outcome = fetch_url("http://geofeedkit-no-such-host.invalid/x", policy);
  CHECK(outcome.status == FetchStatus::DnsFailure);
  CHECK(outcome.attempts == 1);
}

TEST_CASE("unparseable urls never touch the network") {
  auto outcome = fetch_url("nonsense", quick_policy());
  CHECK(outcome.status == FetchStatus::BadUrl);
  CHECK(outcome.attempts == 0);
}

TEST_CASE("transport failures are retried") {
  // Nothing listens on this port; connecting fails immediately.
  TestServer ts;
  ts.start();
  int port = ts.port;
  ts.server.stop();
  if (ts.thread.joinable()) ts.thread.join();

  auto policy = quick_policy();
  policy.retries = 2;
  policy.timeout_seconds = 1;
  auto outcome =
      fetch_url("http://127.0.0.1:" + std::to_string(port) + "/x", policy);
  CHECK_FALSE(outcome.accessible());
  CHECK(outcome.attempts == 3);
}

TEST_CASE("crawl dedupes and sorts by url") {
  std::atomic<int> calls{0};
  FetchFn fake = [&](const std::string& url, const FetchPolicy&) {
    ++calls;
    FetchOutcome outcome;
    outcome.status = FetchStatus::Ok;
    outcome.http_status = 200;
    outcome.body = url;
    outcome.final_url = url;
    return outcome;
  };
  auto policy = quick_policy();
  std::vector<std::string> urls = {
      "http://b.example/1", "http://a.example/2", "http://b.example/1",
      "http://c.example/3", "http://a.example/2"};
  auto result = crawl(urls, policy, fake);
  CHECK(calls == 3);
  REQUIRE(result.entries.size() == 3);
  CHECK(result.entries[0].url == "http://a.example/2");
  CHECK(result.entries[1].url == "http://b.example/1");
  CHECK(result.entries[2].url == "http://c.example/3");
  CHECK(result.entries[2].outcome.body == "http://c.example/3");
}

TEST_CASE("per-host concurrency is bounded") {
  std::atomic<int> active{0};
  std::atomic<int> peak{0};
  FetchFn slow = [&](const std::string&, const FetchPolicy&) {
    int now = ++active;
    int seen = peak.load();
    while (now > seen && !peak.compare_exchange_weak(seen, now)) {
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(30));
    --active;
    FetchOutcome outcome;
    outcome.status = FetchStatus::Ok;
    outcome.http_status = 200;
    return outcome;
  };
  auto policy = quick_policy();
  policy.per_host_concurrency = 2;
  policy.worker_threads = 8;
  std::vector<std::string> urls;
  for (int i = 0; i < 10; ++i) {
    urls.push_back("http://one.example/" + std::to_string(i));
  }
  auto result = crawl(urls, policy, slow);
  CHECK(result.entries.size() == 10);
  CHECK(peak.load() <= 2);
}

TEST_CASE("independent hosts run in parallel") {
  std::atomic<int> peak{0};
  std::atomic<int> active{0};
  FetchFn slow = [&](const std::string&, const FetchPolicy&) {
    int now = ++active;
    int seen = peak.load();
    while (now > seen && !peak.compare_exchange_weak(seen, now)) {
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(30));
    --active;
    FetchOutcome outcome;
    outcome.status = FetchStatus::Ok;
    outcome.http_status = 200;
    return outcome;
  };
  auto policy = quick_policy();
  policy.per_host_concurrency = 1;
  policy.worker_threads = 4;
  std::vector<std::string> urls;
  for (int i = 0; i < 4; ++i) {
    urls.push_back("http://host" + std::to_string(i) + ".example/");
  }
  auto start = std::chrono::steady_clock::now();
  crawl(urls, policy, slow);
  auto elapsed = std::chrono::steady_clock::now() - start;
  CHECK(peak.load() >= 2);
  CHECK(elapsed < std::chrono::milliseconds(4 * 30 * 2));
}

TEST_CASE("same-host requests are spaced") {
  std::vector<std::chrono::steady_clock::time_point> starts;
  std::mutex mu;
  FetchFn instant = [&](const std::string&, const FetchPolicy&) {
    {
      std::lock_guard<std::mutex> lock(mu);
      starts.push_back(std::chrono::steady_clock::now());
    }
    FetchOutcome outcome;
    outcome.status = FetchStatus::Ok;
    outcome.http_status = 200;
    return outcome;
  };
  auto policy = quick_policy();
  policy.per_host_concurrency = 1;
  policy.per_host_delay_ms = 40;
  policy.worker_threads = 4;
  std::vector<std::string> urls = {"http://h.example/1", "http://h.example/2",
                                   "http://h.example/3"};
  crawl(urls, policy, instant);
  REQUIRE(starts.size() == 3);
  std::sort(starts.begin(), starts.end());
  for (std::size_t i = 1; i < starts.size(); ++i) {
    auto gap = std::chrono::duration_cast<std::chrono::milliseconds>(starts[i] -
                                                                     starts[i - 1]);
    CHECK(gap.count() >= 35);
  }
}

TEST_CASE("summaries count by status name") {
  CrawlResult result;
  auto add = [&](FetchStatus status, int http) {
    CrawlEntry entry;
    entry.url = "u" + std::to_string(result.entries.size());
    entry.outcome.status = status;
    entry.outcome.http_status = http;
    result.entries.push_back(entry);
  };
  add(FetchStatus::Ok, 200);
  add(FetchStatus::Ok, 200);
  add(FetchStatus::HttpError, 404);
  add(FetchStatus::Timeout, 0);
  auto summary = summarize(result);
  CHECK(summary.total_urls == 4);
  CHECK(summary.accessible == 2);
  CHECK(summary.by_status.at("ok") == 2);
  CHECK(summary.by_status.at("http_error") == 1);
  CHECK(summary.by_status.at("timeout") == 1);
  CHECK(summary.accessible_fraction() == doctest::Approx(0.5));
}

TEST_CASE("snapshot store round-trips bodies by digest") {
  auto dir = std::filesystem::temp_directory_path() / "gfk-snap-test";
  std::filesystem::remove_all(dir);
  auto store = SnapshotStore::open(dir.string());
  REQUIRE(store.ok());

  FetchOutcome ok;
  ok.status = FetchStatus::Ok;
  ok.http_status = 200;
  ok.body = "10.0.0.0/24,US,,,\r\n";
  auto entry = store.value().store("https://e.example/f.csv", ok);
  REQUIRE(entry.ok());
  CHECK(entry.value().digest_hex == to_hex(sha256(ok.body)));
  CHECK(entry.value().bytes == ok.body.size());

  FetchOutcome bad;
  bad.status = FetchStatus::Timeout;
  REQUIRE(store.value().record_failure("https://t.example/f.csv", bad).ok());
  REQUIRE(store.value().flush().ok());

  auto reopened = SnapshotStore::open(dir.string());
  REQUIRE(reopened.ok());
  CHECK(reopened.value().entries().size() == 2);
  auto found = reopened.value().lookup("https://e.example/f.csv");
  REQUIRE(found);
  auto body = reopened.value().read_body(found->digest_hex);
  REQUIRE(body.ok());
  CHECK(body.value() == ok.body);
  auto failed = reopened.value().lookup("https://t.example/f.csv");
  REQUIRE(failed);
  CHECK(failed->digest_hex.empty());
  CHECK(failed->status == "timeout");
  std::filesystem::remove_all(dir);
}

TEST_CASE("snapshot entries round-trip as json") {
  SnapshotEntry entry;
  entry.url = "https://e.example/f.csv";
  entry.digest_hex = "ab";
  entry.status = "ok";
  entry.http_status = 200;
  entry.bytes = 12;
  entry.fetched_at = 1700000000;
  auto back = SnapshotEntry::from_json(entry.to_json());
  REQUIRE(back.ok());
  CHECK(back.value().url == entry.url);
  CHECK(back.value().digest_hex == entry.digest_hex);
  CHECK(back.value().http_status == 200);
  CHECK(back.value().fetched_at == 1700000000);
}
