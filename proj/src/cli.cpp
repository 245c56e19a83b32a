// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The geofeedkit Authors

#include "geofeedkit/cli.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "geofeedkit/analytics.hpp"
#include "geofeedkit/authchain.hpp"
#include "geofeedkit/digest.hpp"
#include "geofeedkit/fetch.hpp"
#include "geofeedkit/geofeed.hpp"
#include "geofeedkit/gzip.hpp"
#include "geofeedkit/ownership.hpp"
#include "geofeedkit/result.hpp"
#include "geofeedkit/rpsl.hpp"

#ifndef GEOFEEDKIT_VERSION
#define GEOFEEDKIT_VERSION "0.0.0"
#endif

namespace gfk::cli {

namespace fs = std::filesystem;

namespace {

int exit_code_for(const Error& error) {
  switch (error.code) {
    case Errc::ParseError:
    case Errc::IoError:
    case Errc::InvalidArgument:
    case Errc::MissingTotals:
    case Errc::SourceUnavailable:
    case Errc::RangeParse:
    case Errc::EmptyStream:
    case Errc::MalformedIpPrefix:
      return 2;
    default:
      return 1;
  }
}

int fail(const Error& error) {
  std::fprintf(stderr, "geofeedctl: %s (%s)\n", error.message.c_str(),
               std::string(errc_name(error.code)).c_str());
  return exit_code_for(error);
}

int fail_usage(const std::string& message) {
  std::fprintf(stderr, "geofeedctl: %s\n", message.c_str());
  return 2;
}

Result<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return Error{Errc::IoError, "cannot open " + path};
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) return Error{Errc::IoError, "read failed for " + path};
  return buf.str();
}

Result<void> write_file(const std::string& path, std::string_view content) {
  if (auto parent = fs::path(path).parent_path(); !parent.empty()) {
    std::error_code ec;
    fs::create_directories(parent, ec);
    if (ec) return Error{Errc::IoError, "cannot create " + parent.string()};
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return Error{Errc::IoError, "cannot write " + path};
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) return Error{Errc::IoError, "write failed for " + path};
  return Result<void>{};
}

std::int64_t now_seconds() { return static_cast<std::int64_t>(std::time(nullptr)); }

void print_json(const std::string& body) { std::printf("%s\n", body.c_str()); }

// Every file-producing run leaves a manifest naming inputs, the effective
// configuration, and digests of what it wrote.
struct RunManifest {
  std::string command;
  std::vector<std::string> inputs;
  std::map<std::string, std::string> config;
  std::vector<std::string> outputs;
  std::int64_t started_at = 0;

  Result<void> write(const std::string& path) const {
    nlohmann::json outputs_json = nlohmann::json::object();
    for (const auto& out : outputs) {
      auto content = read_file(out);
      if (!content.ok()) return content.error();
      outputs_json[out] = to_hex(sha256(content.value()));
    }
    nlohmann::json j{
        {"command", command},
        {"tool_version", GEOFEEDKIT_VERSION},
        {"inputs", inputs},
        {"config", config},
        {"started_at", started_at},
        {"finished_at", now_seconds()},
        {"outputs", outputs_json},
    };
    return write_file(path, j.dump(2) + "\n");
  }
};

std::vector<std::string> split_csv_list(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  for (const auto& arg : args) {
    std::size_t pos = 0;
    while (pos <= arg.size()) {
      auto comma = arg.find(',', pos);
      std::string piece = arg.substr(pos, comma == std::string::npos ? std::string::npos
                                                                     : comma - pos);
      while (!piece.empty() && piece.front() == ' ') piece.erase(piece.begin());
      while (!piece.empty() && piece.back() == ' ') piece.pop_back();
      if (!piece.empty()) out.push_back(std::move(piece));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }
  return out;
}

Result<auth::Identity> load_identity(const std::string& path) {
  auto text = read_file(path);
  if (!text.ok()) return text.error();
  return auth::Identity::from_json(text.value());
}

// A certificate argument may be a JSON file or a serial in the store.
Result<auth::Certificate> resolve_cert(const std::string& ref,
                                       const auth::CertificateStore* store) {
  if (fs::exists(ref)) {
    auto text = read_file(ref);
    if (!text.ok()) return text.error();
    return auth::Certificate::from_json(text.value());
  }
  if (store) {
    if (const auto* cert = store->find(ref)) return *cert;
  }
  return Error{Errc::UnknownCertificate, "no certificate file or store entry " + ref};
}

void restrict_to_owner(const std::string& path) {
  std::error_code ec;
  fs::permissions(path, fs::perms::owner_read | fs::perms::owner_write,
                  fs::perm_options::replace, ec);
}

// ---------------------------------------------------------------- discover --

struct DiscoverOptions {
  std::vector<std::string> dumps;
  std::string rir;
  std::string output = "-";
};

int cmd_discover(const DiscoverOptions& opt) {
  std::int64_t started = now_seconds();
  auto rir = rpsl::rir_from_name(opt.rir);
  if (!rir) return fail_usage("unknown registry: " + opt.rir);

  std::vector<rpsl::LocatorIndexEntry> entries;
  std::size_t records = 0;
  std::size_t record_errors = 0;
  for (const auto& path : opt.dumps) {
    auto text = read_file_maybe_gzipped(path);
    if (!text.ok()) return fail(text.error());
    auto discovered = rpsl::discover(text.value(), *rir);
    if (!discovered.ok()) {
      if (discovered.error().code == Errc::EmptyStream) continue;
      return fail(discovered.error());
    }
    records += discovered.value().parse.records.size();
    for (const auto& err : discovered.value().parse.errors) {
      std::fprintf(stderr, "warning: %s: record %zu: %s (%s)\n", path.c_str(),
                   err.record_index, err.message.c_str(), err.offending_text.c_str());
      ++record_errors;
    }
    auto& found = discovered.value().entries;
    entries.insert(entries.end(), std::make_move_iterator(found.begin()),
                   std::make_move_iterator(found.end()));
  }

  std::string body;
  for (const auto& entry : entries) {
    body += entry.to_json();
    body += "\n";
  }
  if (opt.output == "-") {
    std::fputs(body.c_str(), stdout);
  } else {
    if (auto w = write_file(opt.output, body); !w.ok()) return fail(w.error());
    RunManifest manifest{"discover", opt.dumps, {{"rir", opt.rir}, {"output", opt.output}},
                         {opt.output}, started};
    if (auto w = manifest.write(opt.output + ".manifest.json"); !w.ok()) {
      return fail(w.error());
    }
  }
  nlohmann::json summary{
      {"records", records},
      {"record_errors", record_errors},
      {"locators", entries.size()},
  };
  print_json(summary.dump(2));
  return 0;
}

// ------------------------------------------------------------------- fetch --

struct FetchOptions {
  std::string index;
  std::string snapshot_dir;
  fetch::FetchPolicy policy;
};

int cmd_fetch(const FetchOptions& opt) {
  std::int64_t started = now_seconds();
  std::ifstream in(opt.index);
  if (!in) return fail_usage("cannot open " + opt.index);
  auto index = rpsl::load_locator_index(in);
  if (!index.ok()) return fail(index.error());

  std::vector<std::string> urls;
  urls.reserve(index.value().size());
  for (const auto& entry : index.value()) urls.push_back(entry.url);

  auto store = fetch::SnapshotStore::open(opt.snapshot_dir);
  if (!store.ok()) return fail(store.error());

  auto crawled = fetch::crawl(urls, opt.policy);
  for (const auto& entry : crawled.entries) {
    if (entry.outcome.accessible()) {
      if (auto s = store.value().store(entry.url, entry.outcome); !s.ok()) {
        return fail(s.error());
      }
    } else {
      (void)store.value().record_failure(entry.url, entry.outcome);
    }
  }
  if (auto f = store.value().flush(); !f.ok()) return fail(f.error());

  auto summary = fetch::summarize(crawled);
  std::string summary_path = (fs::path(opt.snapshot_dir) / "availability.json").string();
  if (auto w = write_file(summary_path, summary.to_json() + "\n"); !w.ok()) {
    return fail(w.error());
  }
  RunManifest manifest{
      "fetch",
      {opt.index},
      {{"timeout", std::to_string(opt.policy.timeout_seconds)},
       {"retries", std::to_string(opt.policy.retries)},
       {"redirect_limit", std::to_string(opt.policy.redirect_limit)},
       {"max_body_bytes", std::to_string(opt.policy.max_body_bytes)},
       {"per_host_concurrency", std::to_string(opt.policy.per_host_concurrency)},
       {"per_host_delay_ms", std::to_string(opt.policy.per_host_delay_ms)},
       {"parallelism", std::to_string(opt.policy.worker_threads)},
       {"allow_insecure_redirect", opt.policy.allow_insecure_redirect ? "true" : "false"},
       {"verify_tls", opt.policy.verify_tls ? "true" : "false"},
       {"snapshot_dir", opt.snapshot_dir}},
      {summary_path},
      started};
  if (auto w = manifest.write((fs::path(opt.snapshot_dir) / "manifest.json").string());
      !w.ok()) {
    return fail(w.error());
  }
  print_json(summary.to_json());
  return 0;
}

// ---------------------------------------------------------------- validate --

struct ValidateOptions {
  std::vector<std::string> files;
  std::string snapshot_dir;
  std::string output;
  bool strict = false;
};

int cmd_validate(const ValidateOptions& opt) {
  std::int64_t started = now_seconds();
  struct Item {
    std::string url;
    std::string bytes;
  };
  std::vector<Item> items;
  for (const auto& path : opt.files) {
    auto bytes = read_file(path);
    if (!bytes.ok()) return fail(bytes.error());
    items.push_back({path, std::move(bytes).take()});
  }
  if (!opt.snapshot_dir.empty()) {
    auto store = fetch::SnapshotStore::open(opt.snapshot_dir);
    if (!store.ok()) return fail(store.error());
    for (const auto& [url, entry] : store.value().entries()) {
      if (entry.digest_hex.empty()) continue;
      auto body = store.value().read_body(entry.digest_hex);
      if (!body.ok()) return fail(body.error());
      items.push_back({url, std::move(body).take()});
    }
  }
  if (items.empty()) {
    return fail_usage("nothing to validate: pass files or --snapshot-dir");
  }

  std::vector<geofeed::FileReport> reports;
  std::string body;
  for (const auto& item : items) {
    auto file = geofeed::decode_file(item.bytes, item.url);
    auto report = geofeed::validate_file(file);
    body += report.to_json();
    body += "\n";
    reports.push_back(std::move(report));
  }
  if (!opt.output.empty()) {
    if (opt.output == "-") {
      std::fputs(body.c_str(), stdout);
    } else {
      if (auto w = write_file(opt.output, body); !w.ok()) return fail(w.error());
      RunManifest manifest{"validate",
                           opt.files,
                           {{"snapshot_dir", opt.snapshot_dir},
                            {"output", opt.output},
                            {"strict", opt.strict ? "true" : "false"}},
                           {opt.output},
                           started};
      if (auto w = manifest.write(opt.output + ".manifest.json"); !w.ok()) {
        return fail(w.error());
      }
    }
  }
  auto aggregate = analytics::rfc_adherence_summaries({}, reports).feed;
  print_json(aggregate.to_json());
  if (opt.strict &&
      (aggregate.lines_malformed > 0 || aggregate.encoding_bad_files > 0 ||
       aggregate.crlf_files < aggregate.files)) {
    return 1;
  }
  return 0;
}

// ------------------------------------------------------------------ report --

struct ReportOptions {
  std::string index;
  std::string totals;
  std::string reports;
  std::string as_info;
  std::string as_info_url;
  std::string snapshot_dir;
  std::string output_dir;
  double country_min_share = 0.05;
  bool no_country_filter = false;
  bool v6_all_lengths = false;
};

int cmd_report(const ReportOptions& opt) {
  std::int64_t started = now_seconds();
  std::ifstream in(opt.index);
  if (!in) return fail_usage("cannot open " + opt.index);
  auto index = rpsl::load_locator_index(in);
  if (!index.ok()) return fail(index.error());

  auto totals = analytics::RirTotals::load_file(opt.totals);
  if (!totals.ok()) return fail(totals.error());

  std::vector<geofeed::FileReport> reports;
  if (!opt.reports.empty()) {
    auto text = read_file(opt.reports);
    if (!text.ok()) return fail(text.error());
    std::istringstream lines(text.value());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(lines, line)) {
      ++line_no;
      if (line.empty()) continue;
      auto report = geofeed::FileReport::from_json(line);
      if (!report.ok()) {
        return fail(Error{Errc::ParseError, opt.reports + " line " +
                                                std::to_string(line_no) + ": " +
                                                report.error().message});
      }
      reports.push_back(std::move(report).take());
    }
  }

  std::error_code ec;
  fs::create_directories(opt.output_dir, ec);
  if (ec) return fail_usage("cannot create " + opt.output_dir);
  auto artifact = [&](const std::string& name) {
    return (fs::path(opt.output_dir) / name).string();
  };
  std::vector<std::string> outputs;
  auto emit = [&](const std::string& name, const std::string& content) -> Result<void> {
    auto path = artifact(name);
    auto w = write_file(path, content);
    if (w.ok()) outputs.push_back(path);
    return w;
  };

  auto adoption = analytics::rir_adoption_stats(index.value(), totals.value());
  if (!adoption.ok()) return fail(adoption.error());
  if (auto w = emit("adoption.json", adoption.value().to_json() + "\n"); !w.ok()) {
    return fail(w.error());
  }
  if (auto w = emit("adoption.csv", adoption.value().to_csv()); !w.ok()) {
    return fail(w.error());
  }

  auto adherence = analytics::rfc_adherence_summaries(index.value(), reports);
  if (auto w = emit("locator_adherence.json", adherence.locator.to_json() + "\n");
      !w.ok()) {
    return fail(w.error());
  }
  if (!reports.empty()) {
    if (auto w = emit("feed_adherence.json", adherence.feed.to_json() + "\n"); !w.ok()) {
      return fail(w.error());
    }
  }

  std::unique_ptr<analytics::AsInfoProvider> provider;
  if (!opt.as_info.empty()) {
    auto file_provider = analytics::FileAsInfoProvider::load_file(opt.as_info);
    if (!file_provider.ok()) return fail(file_provider.error());
    provider = std::make_unique<analytics::FileAsInfoProvider>(
        std::move(file_provider).take());
  } else if (!opt.as_info_url.empty()) {
    provider = std::make_unique<analytics::HttpAsInfoProvider>(opt.as_info_url);
  }
  if (provider) {
    std::map<rpsl::Rir, std::set<std::uint32_t>> distinct;
    for (const auto& entry : index.value()) {
      if (entry.origin_as) distinct[entry.rir].insert(*entry.origin_as);
    }
    std::map<rpsl::Rir, std::vector<std::uint32_t>> ases;
    for (const auto& [rir, set] : distinct) ases[rir].assign(set.begin(), set.end());
    auto breakdown = analytics::as_category_breakdown(ases, *provider);
    if (auto w = emit("categories.json", breakdown.to_json() + "\n"); !w.ok()) {
      return fail(w.error());
    }
    if (auto w = emit("categories.csv", breakdown.to_csv()); !w.ok()) {
      return fail(w.error());
    }
  }

  if (!opt.snapshot_dir.empty()) {
    auto store = fetch::SnapshotStore::open(opt.snapshot_dir);
    if (!store.ok()) return fail(store.error());
    std::vector<geofeed::GeofeedLine> lines;
    for (const auto& [url, entry] : store.value().entries()) {
      if (entry.digest_hex.empty()) continue;
      auto body = store.value().read_body(entry.digest_hex);
      if (!body.ok()) return fail(body.error());
      auto file = geofeed::decode_file(body.value(), url);
      lines.insert(lines.end(), std::make_move_iterator(file.lines.begin()),
                   std::make_move_iterator(file.lines.end()));
    }
    analytics::HistogramFilters filters;
    filters.country_min_share = opt.country_min_share;
    filters.apply_country_filter = !opt.no_country_filter;
    filters.v6_lengths_multiple_of_4 = !opt.v6_all_lengths;
    for (auto family : {net::Family::V4, net::Family::V6}) {
      auto histogram = analytics::prefix_length_histogram(lines, family, filters);
      std::string stem =
          family == net::Family::V4 ? "prefix_length_v4" : "prefix_length_v6";
      if (auto w = emit(stem + ".json", histogram.to_json() + "\n"); !w.ok()) {
        return fail(w.error());
      }
      if (auto w = emit(stem + ".csv", histogram.to_csv()); !w.ok()) {
        return fail(w.error());
      }
    }
    auto countries = analytics::country_prefix_counts(lines);
    if (auto w = emit("countries.json", countries.to_json() + "\n"); !w.ok()) {
      return fail(w.error());
    }
    if (auto w = emit("countries.csv", countries.to_csv()); !w.ok()) {
      return fail(w.error());
    }
  }

  RunManifest manifest{"report",
                       {opt.index, opt.totals, opt.reports, opt.as_info},
                       {{"output_dir", opt.output_dir},
                        {"country_min_share", std::to_string(opt.country_min_share)},
                        {"no_country_filter", opt.no_country_filter ? "true" : "false"},
                        {"v6_all_lengths", opt.v6_all_lengths ? "true" : "false"}},
                       outputs,
                       started};
  manifest.inputs.erase(
      std::remove(manifest.inputs.begin(), manifest.inputs.end(), std::string()),
      manifest.inputs.end());
  if (auto w = manifest.write(artifact("manifest.json")); !w.ok()) {
    return fail(w.error());
  }
  print_json(adoption.value().to_json());
  return 0;
}

// ------------------------------------------------------------------ keygen --

struct KeygenOptions {
  std::string subject;
  std::string seed;
  std::string output;
};

int cmd_keygen(const KeygenOptions& opt) {
  std::int64_t started = now_seconds();
  std::optional<std::string_view> seed;
  if (!opt.seed.empty()) seed = opt.seed;
  auto identity = auth::generate_identity(opt.subject, seed);
  if (auto w = write_file(opt.output, identity.to_json() + "\n"); !w.ok()) {
    return fail(w.error());
  }
  restrict_to_owner(opt.output);
  RunManifest manifest{"keygen",
                       {},
                       {{"subject", opt.subject},
                        {"seeded", opt.seed.empty() ? "false" : "true"},
                        {"output", opt.output}},
                       {opt.output},
                       started};
  if (auto w = manifest.write(opt.output + ".manifest.json"); !w.ok()) {
    return fail(w.error());
  }
  nlohmann::json j{{"subject", identity.subject_name},
                   {"pubkey", to_base64(identity.public_key)},
                   {"output", opt.output}};
  print_json(j.dump(2));
  return 0;
}

// ------------------------------------------------------------------- issue --

struct IssueOptions {
  std::string issuer_identity;
  std::string issuer_cert;
  std::string subject_identity;
  std::string subject_name;
  std::string subject_pubkey;
  std::string kind = "prefix_holder";
  std::vector<std::string> prefixes;
  std::string store;
  std::string output;
  std::int64_t not_before = 0;
  std::int64_t not_after = 0;
  std::int64_t at = 0;
  bool root = false;
};

int cmd_issue(const IssueOptions& opt) {
  std::int64_t started = now_seconds();
  std::int64_t now = now_seconds();
  std::int64_t not_before = opt.not_before ? opt.not_before : now - 3600;
  std::int64_t not_after = opt.not_after ? opt.not_after : now + 365LL * 86400;
  std::int64_t at = opt.at ? opt.at : now;

  auto issuer = load_identity(opt.issuer_identity);
  if (!issuer.ok()) return fail(issuer.error());
  auto kind = auth::cert_kind_from_name(opt.kind);
  if (!kind) return fail_usage("unknown certificate kind: " + opt.kind);
  auto prefixes = net::PrefixSet::parse(split_csv_list(opt.prefixes));
  if (!prefixes.ok()) return fail(prefixes.error());

  auth::CertificateStore store;
  if (fs::exists(opt.store)) {
    auto loaded = auth::CertificateStore::load(opt.store);
    if (!loaded.ok()) return fail(loaded.error());
    store = std::move(loaded).take();
  }

  auth::Certificate cert;
  if (opt.root) {
    cert = auth::make_root_certificate(issuer.value(), *kind,
                                       std::move(prefixes).take(), not_before,
                                       not_after);
  } else {
    if (opt.issuer_cert.empty()) {
      return fail_usage("--issuer-cert is required unless --root is given");
    }
    auto issuer_cert = resolve_cert(opt.issuer_cert, &store);
    if (!issuer_cert.ok()) return fail(issuer_cert.error());

    std::string subject_name;
    std::vector<std::uint8_t> subject_key;
    if (!opt.subject_identity.empty()) {
      auto subject = load_identity(opt.subject_identity);
      if (!subject.ok()) return fail(subject.error());
      subject_name = subject.value().subject_name;
      subject_key = subject.value().public_key;
    } else if (!opt.subject_name.empty() && !opt.subject_pubkey.empty()) {
      subject_name = opt.subject_name;
      subject_key = from_base64(opt.subject_pubkey);
      if (subject_key.size() != 32) return fail_usage("--subject-pubkey is not a key");
    } else {
      return fail_usage("pass --subject-identity or --subject-name with --subject-pubkey");
    }

    auto issued = auth::issue_certificate(issuer.value(), issuer_cert.value(),
                                          subject_key, subject_name, *kind,
                                          std::move(prefixes).take(), not_before,
                                          not_after, at);
    if (!issued.ok()) return fail(issued.error());
    cert = std::move(issued).take();
  }

  store.add(cert);
  if (auto w = store.save(opt.store); !w.ok()) return fail(w.error());
  std::vector<std::string> outputs{opt.store};
  if (!opt.output.empty()) {
    if (auto w = write_file(opt.output, cert.to_json() + "\n"); !w.ok()) {
      return fail(w.error());
    }
    outputs.push_back(opt.output);
  }
  RunManifest manifest{"issue",
                       {opt.issuer_identity, opt.issuer_cert, opt.subject_identity},
                       {{"kind", opt.kind},
                        {"root", opt.root ? "true" : "false"},
                        {"store", opt.store}},
                       outputs,
                       started};
  manifest.inputs.erase(
      std::remove(manifest.inputs.begin(), manifest.inputs.end(), std::string()),
      manifest.inputs.end());
  if (auto w = manifest.write(opt.store + ".manifest.json"); !w.ok()) {
    return fail(w.error());
  }
  nlohmann::json j{{"serial", cert.serial},
                   {"subject", cert.subject_name},
                   {"kind", std::string(auth::cert_kind_name(cert.kind))},
                   {"prefixes", cert.authorized_prefixes.to_strings()}};
  print_json(j.dump(2));
  return 0;
}

// -------------------------------------------------------------------- sign --

struct SignOptions {
  std::string identity;
  std::string cert;
  std::string store;
  std::string file;
  std::vector<std::string> scope;
  std::string output;
  std::int64_t time = 0;
};

int cmd_sign(const SignOptions& opt) {
  std::int64_t started = now_seconds();
  auto identity = load_identity(opt.identity);
  if (!identity.ok()) return fail(identity.error());

  std::optional<auth::CertificateStore> store;
  if (!opt.store.empty()) {
    auto loaded = auth::CertificateStore::load(opt.store);
    if (!loaded.ok()) return fail(loaded.error());
    store = std::move(loaded).take();
  }
  auto cert = resolve_cert(opt.cert, store ? &*store : nullptr);
  if (!cert.ok()) return fail(cert.error());

  auto file_bytes = read_file(opt.file);
  if (!file_bytes.ok()) return fail(file_bytes.error());
  auto scope = net::PrefixSet::parse(split_csv_list(opt.scope));
  if (!scope.ok()) return fail(scope.error());
  std::int64_t signing_time = opt.time ? opt.time : now_seconds();

  auto element = auth::sign_scope(identity.value(), cert.value(), file_bytes.value(),
                                  scope.value(), signing_time);
  if (!element.ok()) return fail(element.error());
  auto bundle =
      auth::make_bundle(opt.file, file_bytes.value(), std::move(element).take());
  if (auto w = write_file(opt.output, bundle.to_json() + "\n"); !w.ok()) {
    return fail(w.error());
  }
  RunManifest manifest{"sign",
                       {opt.identity, opt.cert, opt.file},
                       {{"scope", scope.value().to_string()},
                        {"output", opt.output}},
                       {opt.output},
                       started};
  if (auto w = manifest.write(opt.output + ".manifest.json"); !w.ok()) {
    return fail(w.error());
  }
  nlohmann::json j{{"signer", cert.value().subject_name},
                   {"scope", bundle.chain.front().scope_prefixes.to_strings()},
                   {"elements", bundle.chain.size()},
                   {"output", opt.output}};
  print_json(j.dump(2));
  return 0;
}

// ------------------------------------------------------------- countersign --

struct CountersignOptions {
  std::string identity;
  std::string cert;
  std::string store;
  std::string bundle;
  std::string file;
  std::string target = "file";
  std::vector<std::string> scope;
  std::string output;
  std::int64_t time = 0;
};

int cmd_countersign(const CountersignOptions& opt) {
  std::int64_t started = now_seconds();
  auto identity = load_identity(opt.identity);
  if (!identity.ok()) return fail(identity.error());

  std::optional<auth::CertificateStore> store;
  if (!opt.store.empty()) {
    auto loaded = auth::CertificateStore::load(opt.store);
    if (!loaded.ok()) return fail(loaded.error());
    store = std::move(loaded).take();
  }
  auto cert = resolve_cert(opt.cert, store ? &*store : nullptr);
  if (!cert.ok()) return fail(cert.error());

  auto bundle_text = read_file(opt.bundle);
  if (!bundle_text.ok()) return fail(bundle_text.error());
  auto bundle = auth::SignedBundle::from_json(bundle_text.value());
  if (!bundle.ok()) return fail(bundle.error());

  auto file_bytes = read_file(opt.file);
  if (!file_bytes.ok()) return fail(file_bytes.error());

  auth::Target target;
  if (opt.target == "file") {
    target = auth::Target::file_scope();
  } else {
    try {
      target = auth::Target::prior(std::stoul(opt.target));
    } catch (const std::exception&) {
      return fail_usage("--target must be \"file\" or an element index");
    }
  }
  auto scope = net::PrefixSet::parse(split_csv_list(opt.scope));
  if (!scope.ok()) return fail(scope.error());
  std::int64_t signing_time = opt.time ? opt.time : now_seconds();

  auto working = std::move(bundle).take();
  auto appended = auth::countersign(identity.value(), cert.value(), working, target,
                                    file_bytes.value(), scope.value(), signing_time);
  if (!appended.ok()) return fail(appended.error());

  std::string output = opt.output.empty() ? opt.bundle : opt.output;
  if (auto w = write_file(output, working.to_json() + "\n"); !w.ok()) {
    return fail(w.error());
  }
  RunManifest manifest{"countersign",
                       {opt.identity, opt.cert, opt.bundle, opt.file},
                       {{"target", opt.target}, {"output", output}},
                       {output},
                       started};
  if (auto w = manifest.write(output + ".manifest.json"); !w.ok()) {
    return fail(w.error());
  }
  nlohmann::json j{{"signer", cert.value().subject_name},
                   {"target", opt.target},
                   {"elements", working.chain.size()},
                   {"output", output}};
  print_json(j.dump(2));
  return 0;
}

// ------------------------------------------------------------------ verify --

struct VerifyOptions {
  std::string bundle;
  std::string file;
  std::string store;
  std::vector<std::string> anchor_serials;
  std::vector<std::string> anchor_files;
  std::string output;
  std::int64_t at = 0;
};

int cmd_verify(const VerifyOptions& opt) {
  std::int64_t started = now_seconds();
  auto bundle_text = read_file(opt.bundle);
  if (!bundle_text.ok()) return fail(bundle_text.error());
  auto bundle = auth::SignedBundle::from_json(bundle_text.value());
  if (!bundle.ok()) return fail(bundle.error());

  auto file_bytes = read_file(opt.file);
  if (!file_bytes.ok()) return fail(file_bytes.error());

  auto store = auth::CertificateStore::load(opt.store);
  if (!store.ok()) return fail(store.error());

  std::vector<auth::Certificate> anchors;
  for (const auto& serial : opt.anchor_serials) {
    const auto* cert = store.value().find(serial);
    if (!cert) {
      return fail(Error{Errc::UnknownCertificate, "anchor serial not in store: " + serial});
    }
    anchors.push_back(*cert);
  }
  for (const auto& path : opt.anchor_files) {
    auto text = read_file(path);
    if (!text.ok()) return fail(text.error());
    auto cert = auth::Certificate::from_json(text.value());
    if (!cert.ok()) return fail(cert.error());
    anchors.push_back(std::move(cert).take());
  }
  if (anchors.empty()) {
    return fail_usage("no trust anchors: pass --anchor-serial or --anchor-file");
  }
  std::int64_t at = opt.at ? opt.at : now_seconds();

  auto report = auth::verify_bundle(bundle.value(), file_bytes.value(), anchors,
                                    store.value(), at);
  if (!report.ok()) return fail(report.error());

  print_json(report.value().to_json());
  if (!opt.output.empty()) {
    if (auto w = write_file(opt.output, report.value().to_json() + "\n"); !w.ok()) {
      return fail(w.error());
    }
    RunManifest manifest{"verify",
                         {opt.bundle, opt.file, opt.store},
                         {{"at", std::to_string(at)}, {"output", opt.output}},
                         {opt.output},
                         started};
    if (auto w = manifest.write(opt.output + ".manifest.json"); !w.ok()) {
      return fail(w.error());
    }
  }
  bool all_passed = !report.value().elements.empty();
  for (const auto& element : report.value().elements) {
    all_passed = all_passed && element.passed();
  }
  return all_passed ? 0 : 1;
}

// --------------------------------------------------------------- ownership --

struct OwnershipOptions {
  std::string claims;
  std::string rpki;
  std::string owner_file;
  std::string source_url;
  std::string rule = "covering";
  std::string output;
};

int cmd_ownership(const OwnershipOptions& opt) {
  std::int64_t started = now_seconds();
  int sources = (!opt.rpki.empty()) + (!opt.owner_file.empty()) +
                (!opt.source_url.empty());
  if (sources != 1) {
    return fail_usage("pass exactly one of --rpki, --owner-file, --source-url");
  }
  auth::MatchRule rule;
  if (opt.rule == "covering") {
    rule = auth::MatchRule::Covering;
  } else if (opt.rule == "exact") {
    rule = auth::MatchRule::Exact;
  } else {
    return fail_usage("--rule must be covering or exact");
  }

  std::ifstream claims_in(opt.claims);
  if (!claims_in) return fail_usage("cannot open " + opt.claims);
  auto claims = auth::load_claims(claims_in);
  if (!claims.ok()) return fail(claims.error());

  std::unique_ptr<auth::OwnershipSource> source;
  if (!opt.rpki.empty()) {
    auto loaded = auth::RpkiSnapshotSource::load_file(opt.rpki, rule);
    if (!loaded.ok()) return fail(loaded.error());
    source = std::make_unique<auth::RpkiSnapshotSource>(std::move(loaded).take());
  } else if (!opt.owner_file.empty()) {
    auto loaded = auth::FileOwnershipSource::load_file(opt.owner_file, rule);
    if (!loaded.ok()) return fail(loaded.error());
    source = std::make_unique<auth::FileOwnershipSource>(std::move(loaded).take());
  } else {
    source = std::make_unique<auth::HttpOwnershipSource>(opt.source_url);
  }

  auto comparison = auth::compare_ownership(claims.value(), *source);
  if (!comparison.ok()) return fail(comparison.error());

  if (!opt.output.empty()) {
    std::string body;
    for (const auto& verdict : comparison.value().verdicts) {
      body += verdict.to_json();
      body += "\n";
    }
    if (auto w = write_file(opt.output, body); !w.ok()) return fail(w.error());
    RunManifest manifest{"ownership",
                         {opt.claims, opt.rpki, opt.owner_file},
                         {{"rule", opt.rule}, {"output", opt.output}},
                         {opt.output},
                         started};
    manifest.inputs.erase(
        std::remove(manifest.inputs.begin(), manifest.inputs.end(), std::string()),
        manifest.inputs.end());
    if (auto w = manifest.write(opt.output + ".manifest.json"); !w.ok()) {
      return fail(w.error());
    }
  }
  print_json(comparison.value().summary.to_json());
  return 0;
}

// -------------------------------------------------------------------- demo --

int cmd_demo(const std::string& output_dir) {
  std::int64_t started = now_seconds();
  std::error_code ec;
  fs::create_directories(output_dir, ec);
  if (ec) return fail_usage("cannot create " + output_dir);
  auto at = [&](const std::string& name) {
    return (fs::path(output_dir) / name).string();
  };
  std::int64_t now = now_seconds();
  std::int64_t nb = now - 3600;
  std::int64_t na = now + 365LL * 86400;

  // A registry root vouched for by an attestation authority, an ISP holding a
  // /8, and a leaf customer leasing a /24 out of it.
  auto ca = auth::generate_identity("Root CA", std::string_view("demo:root-ca"));
  auto registry = auth::generate_identity("ARIN", std::string_view("demo:arin"));
  auto isp = auth::generate_identity("AT&T", std::string_view("demo:att"));
  auto leaf = auth::generate_identity("LS Networks", std::string_view("demo:ls"));

  auto ca_cert =
      auth::make_root_certificate(ca, auth::CertKind::Attestation, {}, nb, na);
  auto slash8 = net::PrefixSet::parse({"120.0.0.0/8"});
  auto slash24 = net::PrefixSet::parse({"120.1.1.0/24"});
  if (!slash8.ok() || !slash24.ok()) return fail(slash8.ok() ? slash24.error()
                                                             : slash8.error());

  auto registry_cert = auth::issue_certificate(
      ca, ca_cert, registry.public_key, registry.subject_name,
      auth::CertKind::PrefixHolder, slash8.value(), nb, na, now);
  if (!registry_cert.ok()) return fail(registry_cert.error());
  auto isp_cert = auth::issue_certificate(
      registry, registry_cert.value(), isp.public_key, isp.subject_name,
      auth::CertKind::PrefixHolder, slash8.value(), nb, na, now);
  if (!isp_cert.ok()) return fail(isp_cert.error());
  auto leaf_cert = auth::issue_certificate(
      isp, isp_cert.value(), leaf.public_key, leaf.subject_name,
      auth::CertKind::PrefixHolder, slash24.value(), nb, na, now);
  if (!leaf_cert.ok()) return fail(leaf_cert.error());

  std::string feed =
      "# demo geofeed\r\n"
      "120.1.1.0/24,US,US-OR,Portland,97201\r\n"
      "120.1.2.0/24,US,US-WA,Seattle,\r\n"
      "120.2.0.0/16,US,US-CA,San Jose,\r\n";
  if (auto w = write_file(at("geofeed.csv"), feed); !w.ok()) return fail(w.error());

  auto element = auth::sign_scope(leaf, leaf_cert.value(), feed, slash24.value(), now);
  if (!element.ok()) return fail(element.error());
  auto bundle = auth::make_bundle("geofeed.csv", feed, std::move(element).take());
  if (auto c = auth::countersign(isp, isp_cert.value(), bundle,
                                 auth::Target::prior(0), feed, {}, now);
      !c.ok()) {
    return fail(c.error());
  }
  if (auto c = auth::countersign(ca, ca_cert, bundle, auth::Target::prior(1), feed, {},
                                 now);
      !c.ok()) {
    return fail(c.error());
  }

  auth::CertificateStore store;
  store.add(ca_cert);
  store.add(registry_cert.value());
  store.add(isp_cert.value());
  store.add(leaf_cert.value());
  if (auto w = store.save(at("store.json")); !w.ok()) return fail(w.error());
  if (auto w = write_file(at("anchor.json"), ca_cert.to_json() + "\n"); !w.ok()) {
    return fail(w.error());
  }
  if (auto w = write_file(at("bundle.json"), bundle.to_json() + "\n"); !w.ok()) {
    return fail(w.error());
  }
  for (const auto& [name, identity] :
       {std::pair<std::string, const auth::Identity*>{"ca.identity.json", &ca},
        {"arin.identity.json", &registry},
        {"att.identity.json", &isp},
        {"ls.identity.json", &leaf}}) {
    if (auto w = write_file(at(name), identity->to_json() + "\n"); !w.ok()) {
      return fail(w.error());
    }
    restrict_to_owner(at(name));
  }

  auto report = auth::verify_bundle(bundle, feed, {ca_cert}, store, now);
  if (!report.ok()) return fail(report.error());
  if (auto w = write_file(at("report.json"), report.value().to_json() + "\n"); !w.ok()) {
    return fail(w.error());
  }

  RunManifest manifest{"demo",
                       {},
                       {{"output_dir", output_dir}},
                       {at("geofeed.csv"), at("store.json"), at("anchor.json"),
                        at("bundle.json"), at("report.json")},
                       started};
  if (auto w = manifest.write(at("manifest.json")); !w.ok()) return fail(w.error());

  print_json(report.value().to_json());
  bool all_passed = !report.value().elements.empty();
  for (const auto& e : report.value().elements) all_passed = all_passed && e.passed();
  return all_passed ? 0 : 1;
}

// -------------------------------------------------------------------- bench --

struct BenchOptions {
  int certs = 1800;
  int depth = 3;
  std::string output;
};

int cmd_bench(const BenchOptions& opt) {
  using Clock = std::chrono::steady_clock;
  auto seconds_since = [](Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
  };
  std::int64_t now = now_seconds();
  std::int64_t nb = now - 3600;
  std::int64_t na = now + 365LL * 86400;

  auto root = auth::generate_identity("bench root", std::string_view("bench:root"));
  auto root_prefixes = net::PrefixSet::parse({"10.0.0.0/8"});
  if (!root_prefixes.ok()) return fail(root_prefixes.error());
  auto root_cert = auth::make_root_certificate(root, auth::CertKind::PrefixHolder,
                                               root_prefixes.value(), nb, na);
  auth::CertificateStore store;
  store.add(root_cert);

  std::vector<auth::Identity> attestors;
  std::vector<auth::Certificate> attestor_certs;
  for (int k = 1; k < opt.depth; ++k) {
    auto identity = auth::generate_identity(
        "bench attestor " + std::to_string(k),
        std::string_view{});
    auto cert = auth::issue_certificate(root, root_cert, identity.public_key,
                                        identity.subject_name,
                                        auth::CertKind::Attestation, {}, nb, na, now);
    if (!cert.ok()) return fail(cert.error());
    store.add(cert.value());
    attestors.push_back(std::move(identity));
    attestor_certs.push_back(std::move(cert).take());
  }

  std::string feed;
  std::vector<net::PrefixSet> scopes;
  scopes.reserve(static_cast<std::size_t>(opt.certs));
  for (int i = 0; i < opt.certs; ++i) {
    std::string cidr = "10." + std::to_string(i / 256) + "." + std::to_string(i % 256) +
                       ".0/24";
    feed += cidr + ",US,,,\r\n";
    auto scope = net::PrefixSet::parse({cidr});
    if (!scope.ok()) return fail(scope.error());
    scopes.push_back(std::move(scope).take());
  }

  auto t_issue = Clock::now();
  std::vector<auth::Identity> publishers;
  std::vector<auth::Certificate> publisher_certs;
  publishers.reserve(scopes.size());
  publisher_certs.reserve(scopes.size());
  for (int i = 0; i < opt.certs; ++i) {
    auto identity =
        auth::generate_identity("bench publisher " + std::to_string(i),
                                std::string_view{});
    auto cert = auth::issue_certificate(root, root_cert, identity.public_key,
                                        identity.subject_name,
                                        auth::CertKind::PrefixHolder,
                                        scopes[static_cast<std::size_t>(i)], nb, na,
                                        now);
    if (!cert.ok()) return fail(cert.error());
    store.add(cert.value());
    publishers.push_back(std::move(identity));
    publisher_certs.push_back(std::move(cert).take());
  }
  double issue_seconds = seconds_since(t_issue);

  auto t_sign = Clock::now();
  std::vector<auth::SignedBundle> bundles;
  bundles.reserve(publishers.size());
  for (std::size_t i = 0; i < publishers.size(); ++i) {
    auto element = auth::sign_scope(publishers[i], publisher_certs[i], feed, scopes[i],
                                    now);
    if (!element.ok()) return fail(element.error());
    auto bundle = auth::make_bundle("bench.csv", feed, std::move(element).take());
    for (std::size_t k = 0; k < attestors.size(); ++k) {
      if (auto c = auth::countersign(attestors[k], attestor_certs[k], bundle,
                                     auth::Target::prior(k), feed, {}, now);
          !c.ok()) {
        return fail(c.error());
      }
    }
    bundles.push_back(std::move(bundle));
  }
  double sign_seconds = seconds_since(t_sign);

  auto t_verify = Clock::now();
  bool all_verified = true;
  for (const auto& bundle : bundles) {
    auto report = auth::verify_bundle(bundle, feed, {root_cert}, store, now);
    if (!report.ok()) return fail(report.error());
    for (const auto& element : report.value().elements) {
      all_verified = all_verified && element.passed();
    }
    all_verified =
        all_verified && report.value().trust_level == static_cast<std::size_t>(opt.depth);
  }
  double verify_seconds = seconds_since(t_verify);

  nlohmann::json j{
      {"certs", opt.certs},
      {"depth", opt.depth},
      {"issue_seconds", issue_seconds},
      {"sign_seconds", sign_seconds},
      {"verify_seconds", verify_seconds},
      {"total_seconds", issue_seconds + sign_seconds + verify_seconds},
      {"all_verified", all_verified},
  };
  print_json(j.dump(2));
  if (!opt.output.empty()) {
    if (auto w = write_file(opt.output, j.dump(2) + "\n"); !w.ok()) {
      return fail(w.error());
    }
  }
  return all_verified ? 0 : 1;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"geofeed discovery, retrieval, validation, analytics, and signing"};
  app.set_version_flag("--version", GEOFEEDKIT_VERSION);
  app.set_config("--config", "", "key=value config file; flags beat env beat config");
  app.require_subcommand(1);
  int rc = 0;

  DiscoverOptions discover_opt;
  auto* discover = app.add_subcommand(
      "discover", "Extract geofeed locators from registry database dumps");
  discover->add_option("dumps", discover_opt.dumps, "registry dump files (.gz ok)")
      ->required()
      ->check(CLI::ExistingFile);
  discover->add_option("--rir", discover_opt.rir, "registry the dumps came from")
      ->required()
      ->envname("GEOFEEDKIT_RIR");
  discover->add_option("-o,--output", discover_opt.output,
                       "locator index output, '-' for stdout");
  discover->callback([&] { rc = cmd_discover(discover_opt); });

  FetchOptions fetch_opt;
  auto* fetch_cmd =
      app.add_subcommand("fetch", "Download geofeed files named by a locator index");
  fetch_cmd->add_option("--index", fetch_opt.index, "locator index file")
      ->required()
      ->check(CLI::ExistingFile);
  fetch_cmd->add_option("--snapshot-dir", fetch_opt.snapshot_dir,
                        "content-addressed snapshot directory")
      ->required()
      ->envname("GEOFEEDKIT_SNAPSHOT_DIR");
  fetch_cmd->add_option("--timeout", fetch_opt.policy.timeout_seconds,
                        "per-request timeout, seconds")
      ->envname("GEOFEEDKIT_TIMEOUT");
  fetch_cmd->add_option("--retries", fetch_opt.policy.retries,
                        "extra attempts after transport errors")
      ->envname("GEOFEEDKIT_RETRIES");
  fetch_cmd->add_option("--redirect-limit", fetch_opt.policy.redirect_limit,
                        "redirects to follow per request")
      ->envname("GEOFEEDKIT_REDIRECT_LIMIT");
  fetch_cmd->add_option("--max-body-bytes", fetch_opt.policy.max_body_bytes,
                        "response body cap")
      ->envname("GEOFEEDKIT_MAX_BODY_BYTES");
  fetch_cmd->add_option("--per-host-concurrency", fetch_opt.policy.per_host_concurrency,
                        "parallel requests per host")
      ->envname("GEOFEEDKIT_PER_HOST_CONCURRENCY");
  fetch_cmd->add_option("--per-host-delay-ms", fetch_opt.policy.per_host_delay_ms,
                        "spacing between requests to one host")
      ->envname("GEOFEEDKIT_PER_HOST_DELAY_MS");
  fetch_cmd->add_option("--parallelism", fetch_opt.policy.worker_threads,
                        "total worker threads")
      ->envname("GEOFEEDKIT_PARALLELISM");
  fetch_cmd->add_flag("--allow-insecure-redirect",
                      fetch_opt.policy.allow_insecure_redirect,
                      "follow https to http downgrades");
  fetch_cmd->add_flag("--verify-tls", fetch_opt.policy.verify_tls,
                      "verify server certificates");
  fetch_cmd->add_option("--user-agent", fetch_opt.policy.user_agent, "User-Agent header")
      ->envname("GEOFEEDKIT_USER_AGENT");
  fetch_cmd->callback([&] { rc = cmd_fetch(fetch_opt); });

  ValidateOptions validate_opt;
  auto* validate = app.add_subcommand("validate", "Check geofeed files for violations");
  validate->add_option("files", validate_opt.files, "geofeed files")
      ->check(CLI::ExistingFile);
  validate->add_option("--snapshot-dir", validate_opt.snapshot_dir,
                       "validate every fetched body in this snapshot");
  validate->add_option("-o,--output", validate_opt.output,
                       "per-file report lines, '-' for stdout");
  validate->add_flag("--strict", validate_opt.strict,
                     "exit 1 when any adherence violation is found");
  validate->callback([&] { rc = cmd_validate(validate_opt); });

  ReportOptions report_opt;
  auto* report = app.add_subcommand("report", "Aggregate adoption and adherence reports");
  report->add_option("--index", report_opt.index, "locator index file")
      ->required()
      ->check(CLI::ExistingFile);
  report->add_option("--totals", report_opt.totals,
                     "per-registry record totals (fraction denominators)")
      ->required()
      ->check(CLI::ExistingFile);
  report->add_option("--reports", report_opt.reports, "per-file report lines")
      ->check(CLI::ExistingFile);
  report->add_option("--as-info", report_opt.as_info, "AS category fixture file")
      ->check(CLI::ExistingFile);
  report->add_option("--as-info-url", report_opt.as_info_url,
                     "live AS category endpoint base URL");
  report->add_option("--snapshot-dir", report_opt.snapshot_dir,
                     "snapshot for line-level histograms");
  report->add_option("--output-dir", report_opt.output_dir, "artifact directory")
      ->required()
      ->envname("GEOFEEDKIT_OUTPUT_DIR");
  report->add_option("--country-min-share", report_opt.country_min_share,
                     "histogram country share threshold");
  report->add_flag("--no-country-filter", report_opt.no_country_filter,
                   "keep every country in histograms");
  report->add_flag("--v6-all-lengths", report_opt.v6_all_lengths,
                   "keep IPv6 lengths that are not multiples of 4");
  report->callback([&] { rc = cmd_report(report_opt); });

  KeygenOptions keygen_opt;
  auto* keygen = app.add_subcommand("keygen", "Generate a signing identity");
  keygen->add_option("--subject", keygen_opt.subject, "subject name")->required();
  keygen->add_option("--seed", keygen_opt.seed, "deterministic key seed (tests only)");
  keygen->add_option("-o,--output", keygen_opt.output, "identity file")->required();
  keygen->callback([&] { rc = cmd_keygen(keygen_opt); });

  IssueOptions issue_opt;
  auto* issue = app.add_subcommand("issue", "Issue a certificate into a store");
  issue->add_option("--issuer-identity", issue_opt.issuer_identity,
                    "issuer identity file")
      ->required()
      ->check(CLI::ExistingFile);
  issue->add_option("--issuer-cert", issue_opt.issuer_cert,
                    "issuer certificate file or serial");
  issue->add_flag("--root", issue_opt.root, "self-sign a trust anchor");
  issue->add_option("--subject-identity", issue_opt.subject_identity,
                    "subject identity file");
  issue->add_option("--subject-name", issue_opt.subject_name, "subject name");
  issue->add_option("--subject-pubkey", issue_opt.subject_pubkey,
                    "subject public key, base64");
  issue->add_option("--kind", issue_opt.kind, "prefix_holder or attestation");
  issue->add_option("--prefixes", issue_opt.prefixes, "authorized prefixes");
  issue->add_option("--store", issue_opt.store, "certificate store file")->required();
  issue->add_option("-o,--output", issue_opt.output, "also write the certificate here");
  issue->add_option("--not-before", issue_opt.not_before, "validity start, unix seconds");
  issue->add_option("--not-after", issue_opt.not_after, "validity end, unix seconds");
  issue->add_option("--at", issue_opt.at, "issuance evaluation time, unix seconds");
  issue->callback([&] { rc = cmd_issue(issue_opt); });

  SignOptions sign_opt;
  auto* sign = app.add_subcommand("sign", "Sign a scope of a geofeed file");
  sign->add_option("--identity", sign_opt.identity, "signer identity file")
      ->required()
      ->check(CLI::ExistingFile);
  sign->add_option("--cert", sign_opt.cert, "signer certificate file or serial")
      ->required();
  sign->add_option("--store", sign_opt.store, "certificate store for serial lookup");
  sign->add_option("--file", sign_opt.file, "geofeed file")
      ->required()
      ->check(CLI::ExistingFile);
  sign->add_option("--scope", sign_opt.scope, "prefixes the signature covers")
      ->required();
  sign->add_option("-o,--output", sign_opt.output, "bundle output file")->required();
  sign->add_option("--time", sign_opt.time, "signing time, unix seconds");
  sign->callback([&] { rc = cmd_sign(sign_opt); });

  CountersignOptions csign_opt;
  auto* csign = app.add_subcommand("countersign", "Append an endorsement to a bundle");
  csign->add_option("--identity", csign_opt.identity, "countersigner identity file")
      ->required()
      ->check(CLI::ExistingFile);
  csign->add_option("--cert", csign_opt.cert, "countersigner certificate file or serial")
      ->required();
  csign->add_option("--store", csign_opt.store, "certificate store for serial lookup");
  csign->add_option("--bundle", csign_opt.bundle, "bundle to extend")
      ->required()
      ->check(CLI::ExistingFile);
  csign->add_option("--file", csign_opt.file, "geofeed file")
      ->required()
      ->check(CLI::ExistingFile);
  csign->add_option("--target", csign_opt.target,
                    "\"file\" or the index of the element to countersign");
  csign->add_option("--scope", csign_opt.scope,
                    "own scope prefixes, file targets only");
  csign->add_option("-o,--output", csign_opt.output,
                    "write here instead of updating the bundle in place");
  csign->add_option("--time", csign_opt.time, "signing time, unix seconds");
  csign->callback([&] { rc = cmd_countersign(csign_opt); });

  VerifyOptions verify_opt;
  auto* verify = app.add_subcommand("verify", "Verify a signed geofeed bundle");
  verify->add_option("--bundle", verify_opt.bundle, "bundle file")
      ->required()
      ->check(CLI::ExistingFile);
  verify->add_option("--file", verify_opt.file, "geofeed file")
      ->required()
      ->check(CLI::ExistingFile);
  verify->add_option("--store", verify_opt.store, "certificate store file")
      ->required()
      ->check(CLI::ExistingFile);
  verify->add_option("--anchor-serial", verify_opt.anchor_serials,
                     "trusted root serial in the store");
  verify->add_option("--anchor-file", verify_opt.anchor_files,
                     "trusted root certificate file");
  verify->add_option("-o,--output", verify_opt.output, "write the report here too");
  verify->add_option("--at", verify_opt.at, "verification time, unix seconds");
  verify->callback([&] { rc = cmd_verify(verify_opt); });

  OwnershipOptions ownership_opt;
  auto* ownership =
      app.add_subcommand("ownership", "Compare claimed owners against a source");
  ownership->add_option("--claims", ownership_opt.claims, "claims file, one json per line")
      ->required()
      ->check(CLI::ExistingFile);
  ownership->add_option("--rpki", ownership_opt.rpki, "route-origin snapshot file");
  ownership->add_option("--owner-file", ownership_opt.owner_file,
                        "owner table fixture file");
  ownership->add_option("--source-url", ownership_opt.source_url,
                        "live ownership endpoint base URL");
  ownership->add_option("--rule", ownership_opt.rule, "covering or exact");
  ownership->add_option("-o,--output", ownership_opt.output, "verdict lines output");
  ownership->callback([&] { rc = cmd_ownership(ownership_opt); });

  std::string demo_dir = "demo-out";
  auto* demo = app.add_subcommand(
      "demo", "Build and verify a complete delegation and signing chain");
  demo->add_option("--output-dir", demo_dir, "where demo artifacts land");
  demo->callback([&] { rc = cmd_demo(demo_dir); });

  BenchOptions bench_opt;
  auto* bench = app.add_subcommand("bench", "Time issuance, signing, and verification");
  bench->add_option("--certs", bench_opt.certs, "publisher certificates to create")
      ->check(CLI::PositiveNumber);
  bench->add_option("--depth", bench_opt.depth, "chain depth including the publisher")
      ->check(CLI::PositiveNumber);
  bench->add_option("-o,--output", bench_opt.output, "timing report file");
  bench->callback([&] { rc = cmd_bench(bench_opt); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  return rc;
}

}  // namespace gfk::cli
