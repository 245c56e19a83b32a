// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The geofeedkit Authors

#include "geofeedkit/authchain.hpp"

#include <sodium.h>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "geofeedkit/geofeed.hpp"

namespace gfk::auth {

namespace {

constexpr std::string_view kScopeSignTag = "geofeedkit:scope-sign:v1";
constexpr std::string_view kCounterSignTag = "geofeedkit:counter-sign:v1";
constexpr std::string_view kCertSignTag = "geofeedkit:cert:v1";

void ensure_sodium() {
  static int rc = sodium_init();
  (void)rc;
}

void append_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

void append_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  append_u32(out, static_cast<std::uint32_t>(v >> 32));
  append_u32(out, static_cast<std::uint32_t>(v));
}

void append_bytes(std::vector<std::uint8_t>& out, std::span<const std::uint8_t> bytes) {
  append_u32(out, static_cast<std::uint32_t>(bytes.size()));
  out.insert(out.end(), bytes.begin(), bytes.end());
}

void append_string(std::vector<std::uint8_t>& out, std::string_view s) {
  append_bytes(out, {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()});
}

std::vector<std::uint8_t> ed25519_sign(const std::vector<std::uint8_t>& secret_key,
                                       std::span<const std::uint8_t> message) {
  ensure_sodium();
  std::vector<std::uint8_t> sig(crypto_sign_BYTES);
  crypto_sign_detached(sig.data(), nullptr, message.data(), message.size(),
                       secret_key.data());
  return sig;
}

bool ed25519_verify(const std::vector<std::uint8_t>& public_key,
                    std::span<const std::uint8_t> message,
                    std::span<const std::uint8_t> signature) {
  ensure_sodium();
  if (public_key.size() != crypto_sign_PUBLICKEYBYTES ||
      signature.size() != crypto_sign_BYTES) {
    return false;
  }
  return crypto_sign_verify_detached(signature.data(), message.data(), message.size(),
                                     public_key.data()) == 0;
}

// What a file-scope signature covers.
std::vector<std::uint8_t> scope_sign_message(const Sha256Digest& scope_digest,
                                             const Sha256Digest& file_digest,
                                             std::string_view signer_serial,
                                             std::int64_t signing_time) {
  std::vector<std::uint8_t> msg;
  append_string(msg, kScopeSignTag);
  msg.insert(msg.end(), scope_digest.begin(), scope_digest.end());
  msg.insert(msg.end(), file_digest.begin(), file_digest.end());
  append_string(msg, signer_serial);
  append_u64(msg, static_cast<std::uint64_t>(signing_time));
  return msg;
}

// What a countersignature over a prior element covers.
std::vector<std::uint8_t> counter_sign_message(std::span<const std::uint8_t> target_sig) {
  std::vector<std::uint8_t> msg;
  append_string(msg, kCounterSignTag);
  append_bytes(msg, target_sig);
  return msg;
}

std::string derive_serial(const std::vector<std::uint8_t>& public_key,
                          std::string_view subject_name) {
  std::vector<std::uint8_t> material(public_key);
  material.insert(material.end(), subject_name.begin(), subject_name.end());
  return to_hex(sha256(material)).substr(0, 16);
}

nlohmann::json target_to_json(const Target& target) {
  if (target.kind == Target::Kind::FileScope) return "file";
  return target.index;
}

Result<Target> target_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "file") return Target::file_scope();
    return Error{Errc::ParseError, "unknown signature target"};
  }
  if (j.is_number_unsigned()) return Target::prior(j.get<std::size_t>());
  return Error{Errc::ParseError, "unknown signature target"};
}

Result<Sha256Digest> digest_from_b64(const nlohmann::json& j, const char* what) {
  auto bytes = from_base64(j.get<std::string>());
  if (bytes.size() != 32) {
    return Error{Errc::ParseError, std::string("bad digest field: ") + what};
  }
  Sha256Digest d;
  std::copy(bytes.begin(), bytes.end(), d.begin());
  return d;
}

}  // namespace

std::string_view cert_kind_name(CertKind kind) {
  return kind == CertKind::PrefixHolder ? "prefix_holder" : "attestation";
}

std::optional<CertKind> cert_kind_from_name(std::string_view name) {
  if (name == "prefix_holder") return CertKind::PrefixHolder;
  if (name == "attestation") return CertKind::Attestation;
  return std::nullopt;
}

std::string Identity::to_json() const {
  nlohmann::json j{
      {"version", 1},
      {"subject", subject_name},
      {"pubkey_alg", "ed25519"},
      {"pubkey", to_base64(public_key)},
      {"secret_key", to_base64(secret_key)},
  };
  return j.dump(2);
}

Result<Identity> Identity::from_json(std::string_view text) {
  auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    return Error{Errc::ParseError, "bad identity json"};
  }
  try {
    Identity id;
    id.subject_name = j.at("subject").get<std::string>();
    id.public_key = from_base64(j.at("pubkey").get<std::string>());
    id.secret_key = from_base64(j.at("secret_key").get<std::string>());
    if (id.public_key.size() != crypto_sign_PUBLICKEYBYTES ||
        id.secret_key.size() != crypto_sign_SECRETKEYBYTES) {
      return Error{Errc::ParseError, "bad key length in identity json"};
    }
    return id;
  } catch (const nlohmann::json::exception& ex) {
    return Error{Errc::ParseError, std::string("bad identity json: ") + ex.what()};
  }
}

Identity generate_identity(std::string subject_name,
                           std::optional<std::string_view> seed) {
  ensure_sodium();
  Identity id;
  id.subject_name = std::move(subject_name);
  id.public_key.resize(crypto_sign_PUBLICKEYBYTES);
  id.secret_key.resize(crypto_sign_SECRETKEYBYTES);
  if (seed) {
    auto seed_bytes = sha256(*seed);
    crypto_sign_seed_keypair(id.public_key.data(), id.secret_key.data(),
                             seed_bytes.data());
  } else {
    crypto_sign_keypair(id.public_key.data(), id.secret_key.data());
  }
  return id;
}

std::vector<std::uint8_t> Certificate::canonical_body() const {
  std::vector<std::uint8_t> body;
  append_string(body, kCertSignTag);
  append_string(body, serial);
  append_string(body, subject_name);
  append_string(body, cert_kind_name(kind));
  append_bytes(body, public_key);
  append_string(body, authorized_prefixes.to_string());
  append_string(body, issuer_serial ? *issuer_serial : std::string());
  append_u64(body, static_cast<std::uint64_t>(not_before));
  append_u64(body, static_cast<std::uint64_t>(not_after));
  return body;
}

std::string Certificate::to_json() const {
  nlohmann::json j{
      {"version", 1},
      {"serial", serial},
      {"subject", subject_name},
      {"kind", std::string(cert_kind_name(kind))},
      {"pubkey_alg", "ed25519"},
      {"pubkey", to_base64(public_key)},
      {"prefixes", authorized_prefixes.to_strings()},
      {"not_before", not_before},
      {"not_after", not_after},
      {"issuer_sig", to_base64(issuer_signature)},
  };
  if (issuer_serial) {
    j["issuer_serial"] = *issuer_serial;
  } else {
    j["issuer_serial"] = nullptr;
  }
  return j.dump();
}

Result<Certificate> Certificate::from_json(std::string_view text) {
  auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    return Error{Errc::ParseError, "bad certificate json"};
  }
  try {
    Certificate cert;
    cert.serial = j.at("serial").get<std::string>();
    cert.subject_name = j.at("subject").get<std::string>();
    auto kind = cert_kind_from_name(j.value("kind", "prefix_holder"));
    if (!kind) return Error{Errc::ParseError, "bad certificate kind"};
    cert.kind = *kind;
    cert.public_key = from_base64(j.at("pubkey").get<std::string>());
    auto prefixes = net::PrefixSet::parse(j.at("prefixes").get<std::vector<std::string>>());
    if (!prefixes.ok()) return prefixes.error();
    cert.authorized_prefixes = std::move(prefixes).take();
    if (j.contains("issuer_serial") && !j["issuer_serial"].is_null()) {
      cert.issuer_serial = j["issuer_serial"].get<std::string>();
    }
    cert.not_before = j.at("not_before").get<std::int64_t>();
    cert.not_after = j.at("not_after").get<std::int64_t>();
    cert.issuer_signature = from_base64(j.at("issuer_sig").get<std::string>());
    return cert;
  } catch (const nlohmann::json::exception& ex) {
    return Error{Errc::ParseError, std::string("bad certificate json: ") + ex.what()};
  }
}

void CertificateStore::add(Certificate cert) {
  by_serial_[cert.serial] = std::move(cert);
}

bool CertificateStore::remove(const std::string& serial) {
  return by_serial_.erase(serial) > 0;
}

const Certificate* CertificateStore::find(const std::string& serial) const {
  auto it = by_serial_.find(serial);
  return it == by_serial_.end() ? nullptr : &it->second;
}

Result<void> CertificateStore::save(const std::string& path) const {
  nlohmann::json certs = nlohmann::json::array();
  for (const auto& [serial, cert] : by_serial_) {
    certs.push_back(nlohmann::json::parse(cert.to_json()));
  }
  nlohmann::json j{{"version", 1}, {"certificates", certs}};
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return Error{Errc::IoError, "cannot write " + path};
  out << j.dump(2) << "\n";
  if (!out) return Error{Errc::IoError, "write failed for " + path};
  return Result<void>{};
}

Result<CertificateStore> CertificateStore::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return Error{Errc::IoError, "cannot open " + path};
  std::ostringstream buf;
  buf << in.rdbuf();
  auto j = nlohmann::json::parse(buf.str(), nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("certificates")) {
    return Error{Errc::ParseError, "bad certificate store: " + path};
  }
  CertificateStore store;
  for (const auto& item : j["certificates"]) {
    auto cert = Certificate::from_json(item.dump());
    if (!cert.ok()) return cert.error();
    store.add(std::move(cert).take());
  }
  return store;
}

Certificate make_root_certificate(const Identity& identity, CertKind kind,
                                  net::PrefixSet prefixes, std::int64_t not_before,
                                  std::int64_t not_after) {
  Certificate cert;
  cert.serial = derive_serial(identity.public_key, identity.subject_name);
  cert.subject_name = identity.subject_name;
  cert.public_key = identity.public_key;
  cert.kind = kind;
  cert.authorized_prefixes = std::move(prefixes);
  cert.not_before = not_before;
  cert.not_after = not_after;
  cert.issuer_signature = ed25519_sign(identity.secret_key, cert.canonical_body());
  return cert;
}

Result<Certificate> issue_certificate(const Identity& issuer_identity,
                                      const Certificate& issuer_cert,
                                      const std::vector<std::uint8_t>& subject_public_key,
                                      const std::string& subject_name, CertKind kind,
                                      net::PrefixSet prefixes, std::int64_t not_before,
                                      std::int64_t not_after, std::int64_t at_time) {
  if (not_before >= not_after) {
    return Error{Errc::InvalidArgument, "not_before must precede not_after"};
  }
  if (issuer_identity.public_key != issuer_cert.public_key) {
    return Error{Errc::InvalidArgument, "issuer identity does not match certificate"};
  }
  if (!issuer_cert.covers(at_time)) {
    return Error{Errc::ExpiredIssuer,
                 "issuer certificate " + issuer_cert.serial + " not valid at issuance time"};
  }
  if (!issuer_cert.is_root() && !prefixes.empty() &&
      !issuer_cert.authorized_prefixes.contains(prefixes)) {
    return Error{Errc::DelegationExceedsIssuer,
                 "requested prefixes exceed issuer authority: " + prefixes.to_string()};
  }
  Certificate cert;
  cert.serial = derive_serial(subject_public_key, subject_name);
  cert.subject_name = subject_name;
  cert.public_key = subject_public_key;
  cert.kind = kind;
  cert.authorized_prefixes = std::move(prefixes);
  cert.issuer_serial = issuer_cert.serial;
  cert.not_before = not_before;
  cert.not_after = not_after;
  cert.issuer_signature = ed25519_sign(issuer_identity.secret_key, cert.canonical_body());
  return cert;
}

std::string canonical_file_bytes(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    char c = raw[i];
    if (c == '\r') {
      out.push_back('\n');
      if (i + 1 < raw.size() && raw[i + 1] == '\n') ++i;
    } else {
      out.push_back(c);
    }
  }
  return out;
}

Sha256Digest canonical_file_digest(std::string_view raw) {
  return sha256(canonical_file_bytes(raw));
}

Result<std::string> canonicalize_scope(std::string_view file_bytes,
                                       const net::PrefixSet& scope) {
  return canonicalize_scope(geofeed::decode_file(file_bytes, ""), scope);
}

Result<std::string> canonicalize_scope(const geofeed::GeofeedFile& file,
                                       const net::PrefixSet& scope) {
  std::vector<const geofeed::GeofeedLine*> selected;
  std::vector<std::size_t> malformed;
  for (const auto& line : file.lines) {
    if (!line.ip_prefix) continue;  // unattributable to any scope
    if (!scope.contains(*line.ip_prefix)) continue;
    if (!line.valid()) {
      malformed.push_back(line.line_number);
      continue;
    }
    selected.push_back(&line);
  }
  if (!malformed.empty()) {
    std::string which;
    for (std::size_t n : malformed) {
      if (!which.empty()) which += ",";
      which += std::to_string(n);
    }
    return Error{Errc::ScopeContainsMalformedLine,
                 "scope selects malformed lines: " + which};
  }
  if (selected.empty()) {
    return Error{Errc::EmptyScope, "no line matched scope " + scope.to_string()};
  }
  std::string out = "scope:" + scope.to_string() + "\n";
  for (const auto* line : selected) {
    out += line->raw;
    out += "\n";
  }
  return out;
}

Result<ChainElement> sign_scope(const Identity& identity, const Certificate& cert,
                                std::string_view file_bytes,
                                const net::PrefixSet& scope_prefixes,
                                std::int64_t signing_time) {
  if (identity.public_key != cert.public_key) {
    return Error{Errc::InvalidArgument, "identity does not match certificate"};
  }
  if (!cert.covers(signing_time)) {
    return Error{Errc::ExpiredCertificate,
                 "certificate " + cert.serial + " not valid at signing time"};
  }
  if (scope_prefixes.empty() || !cert.authorized_prefixes.contains(scope_prefixes)) {
    return Error{Errc::ScopeExceedsAuthorization,
                 "scope " + scope_prefixes.to_string() + " exceeds authorization of " +
                     cert.serial};
  }
  auto scope_bytes = canonicalize_scope(file_bytes, scope_prefixes);
  if (!scope_bytes.ok()) return scope_bytes.error();

  ChainElement element;
  element.signer_serial = cert.serial;
  element.scope_prefixes = scope_prefixes;
  element.scope_digest = sha256(scope_bytes.value());
  element.file_digest = canonical_file_digest(file_bytes);
  element.target = Target::file_scope();
  element.signing_time = signing_time;
  element.signature = ed25519_sign(
      identity.secret_key, scope_sign_message(element.scope_digest, element.file_digest,
                                              element.signer_serial, signing_time));
  return element;
}

SignedBundle make_bundle(std::string file_reference, std::string_view file_bytes,
                         ChainElement first) {
  SignedBundle bundle;
  bundle.file_reference = std::move(file_reference);
  bundle.file_digest = canonical_file_digest(file_bytes);
  bundle.chain.push_back(std::move(first));
  return bundle;
}

Result<void> countersign(const Identity& identity, const Certificate& cert,
                         SignedBundle& bundle, Target target,
                         std::string_view file_bytes,
                         const net::PrefixSet& own_scope, std::int64_t signing_time) {
  if (identity.public_key != cert.public_key) {
    return Error{Errc::InvalidArgument, "identity does not match certificate"};
  }
  if (!cert.covers(signing_time)) {
    return Error{Errc::ExpiredCertificate,
                 "certificate " + cert.serial + " not valid at signing time"};
  }
  if (target.kind == Target::Kind::FileScope) {
    auto element = sign_scope(identity, cert, file_bytes, own_scope, signing_time);
    if (!element.ok()) return element.error();
    bundle.chain.push_back(std::move(element).take());
    return Result<void>{};
  }
  if (target.index >= bundle.chain.size()) {
    return Error{Errc::TargetOutOfRange,
                 "no element " + std::to_string(target.index) + " in a chain of " +
                     std::to_string(bundle.chain.size())};
  }
  const ChainElement& prior = bundle.chain[target.index];
  if (cert.kind == CertKind::PrefixHolder &&
      !cert.authorized_prefixes.contains(prior.scope_prefixes)) {
    return Error{Errc::ScopeExceedsAuthorization,
                 "countersigner " + cert.serial + " does not hold target scope " +
                     prior.scope_prefixes.to_string()};
  }
  ChainElement element;
  element.signer_serial = cert.serial;
  element.scope_prefixes = prior.scope_prefixes;
  element.scope_digest = prior.scope_digest;
  element.file_digest = prior.file_digest;
  element.target = target;
  element.signing_time = signing_time;
  element.signature =
      ed25519_sign(identity.secret_key, counter_sign_message(prior.signature));
  bundle.chain.push_back(std::move(element));
  return Result<void>{};
}

std::string SignedBundle::to_json() const {
  nlohmann::json chain_json = nlohmann::json::array();
  for (const auto& e : chain) {
    chain_json.push_back(nlohmann::json{
        {"signer_serial", e.signer_serial},
        {"scope_prefixes", e.scope_prefixes.to_strings()},
        {"scope_digest", to_base64(e.scope_digest)},
        {"file_digest", to_base64(e.file_digest)},
        {"target", target_to_json(e.target)},
        {"signing_time", e.signing_time},
        {"sig_alg", e.sig_alg},
        {"sig", to_base64(e.signature)},
    });
  }
  nlohmann::json j{
      {"version", 1},
      {"file_reference", file_reference},
      {"file_digest_alg", file_digest_alg},
      {"file_digest", to_base64(file_digest)},
      {"chain", chain_json},
  };
  return j.dump(2);
}

Result<SignedBundle> SignedBundle::from_json(std::string_view text) {
  auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    return Error{Errc::ParseError, "bad bundle json"};
  }
  try {
    SignedBundle bundle;
    bundle.file_reference = j.value("file_reference", "");
    bundle.file_digest_alg = j.value("file_digest_alg", "sha256");
    auto file_digest = digest_from_b64(j.at("file_digest"), "file_digest");
    if (!file_digest.ok()) return file_digest.error();
    bundle.file_digest = file_digest.value();
    for (const auto& item : j.at("chain")) {
      ChainElement e;
      e.signer_serial = item.at("signer_serial").get<std::string>();
      auto scope =
          net::PrefixSet::parse(item.at("scope_prefixes").get<std::vector<std::string>>());
      if (!scope.ok()) return scope.error();
      e.scope_prefixes = std::move(scope).take();
      auto scope_digest = digest_from_b64(item.at("scope_digest"), "scope_digest");
      if (!scope_digest.ok()) return scope_digest.error();
      e.scope_digest = scope_digest.value();
      auto fd = digest_from_b64(item.at("file_digest"), "file_digest");
      if (!fd.ok()) return fd.error();
      e.file_digest = fd.value();
      auto target = target_from_json(item.at("target"));
      if (!target.ok()) return target.error();
      e.target = target.value();
      e.signing_time = item.at("signing_time").get<std::int64_t>();
      e.sig_alg = item.value("sig_alg", "ed25519");
      e.signature = from_base64(item.at("sig").get<std::string>());
      bundle.chain.push_back(std::move(e));
    }
    return bundle;
  } catch (const nlohmann::json::exception& ex) {
    return Error{Errc::ParseError, std::string("bad bundle json: ") + ex.what()};
  }
}

namespace {

struct PathCheck {
  bool ok = false;
  std::string note;
};

// Walks issuer links from the signer up to a trust anchor, verifying each
// certificate's signature, validity window, and delegation containment.
PathCheck check_path(const Certificate& leaf, const std::vector<Certificate>& anchors,
                     const CertificateStore& store, std::int64_t at_time) {
  auto is_anchor = [&](const Certificate& cert) {
    return std::any_of(anchors.begin(), anchors.end(), [&](const Certificate& a) {
      return a.serial == cert.serial && a.public_key == cert.public_key;
    });
  };
  std::set<std::string> seen;
  const Certificate* current = &leaf;
  while (true) {
    if (!seen.insert(current->serial).second) {
      return {false, "certificate loop at " + current->serial};
    }
    if (!current->covers(at_time)) {
      return {false, "certificate " + current->serial + " outside validity window"};
    }
    if (current->is_root()) {
      if (!ed25519_verify(current->public_key, current->canonical_body(),
                          current->issuer_signature)) {
        return {false, "self-signature invalid on root " + current->serial};
      }
      if (!is_anchor(*current)) {
        return {false, "root " + current->serial + " is not a trust anchor"};
      }
      return {true, ""};
    }
    const Certificate* issuer = store.find(*current->issuer_serial);
    if (!issuer) {
      return {false, "unknown certificate " + *current->issuer_serial};
    }
    if (!ed25519_verify(issuer->public_key, current->canonical_body(),
                        current->issuer_signature)) {
      return {false, "issuer signature invalid on " + current->serial};
    }
    // Prefix authority may only enter at a root; below one, every issuer
    // must already hold what it delegates.
    if (!current->authorized_prefixes.empty() && !issuer->is_root() &&
        !issuer->authorized_prefixes.contains(current->authorized_prefixes)) {
      return {false, "delegation to " + current->serial + " exceeds issuer authority"};
    }
    current = issuer;
  }
}

}  // namespace

std::string VerificationReport::to_json() const {
  nlohmann::json elements_json = nlohmann::json::array();
  for (const auto& e : elements) {
    elements_json.push_back(nlohmann::json{
        {"index", e.index},
        {"signer_serial", e.signer_serial},
        {"subject", e.subject_name},
        {"depth", e.depth},
        {"path_ok", e.path_ok},
        {"signature_ok", e.signature_ok},
        {"scope_digest_ok", e.scope_digest_ok},
        {"authorization_ok", e.authorization_ok},
        {"file_digest_match", e.file_digest_match},
        {"passed", e.passed()},
        {"notes", e.notes},
    });
  }
  nlohmann::json j{
      {"elements", elements_json},
      {"trust_level", trust_level},
      {"file_digest_match", file_digest_match},
  };
  return j.dump(2);
}

Result<VerificationReport> verify_bundle(const SignedBundle& bundle,
                                         std::string_view file_bytes,
                                         const std::vector<Certificate>& trust_anchors,
                                         const CertificateStore& store,
                                         std::int64_t at_time) {
  for (std::size_t i = 0; i < bundle.chain.size(); ++i) {
    const auto& e = bundle.chain[i];
    if (i == 0 && e.target.kind != Target::Kind::FileScope) {
      return Error{Errc::InvalidArgument, "first element must target the file scope"};
    }
    if (e.target.kind == Target::Kind::PriorSignature && e.target.index >= i) {
      return Error{Errc::InvalidArgument,
                   "element " + std::to_string(i) + " targets a later element"};
    }
  }

  Sha256Digest actual_file_digest = canonical_file_digest(file_bytes);
  VerificationReport report;
  report.file_digest_match = actual_file_digest == bundle.file_digest;
  std::vector<std::size_t> depth(bundle.chain.size(), 1);

  // Decode once; elements inheriting a scope share the recomputed digest.
  geofeed::GeofeedFile decoded = geofeed::decode_file(file_bytes, "");
  struct ScopeCheck {
    bool ok = false;
    Sha256Digest digest{};
    std::string note;
  };
  std::map<std::string, ScopeCheck> scope_cache;
  auto recompute_scope = [&](const net::PrefixSet& scope) -> const ScopeCheck& {
    auto [it, fresh] = scope_cache.try_emplace(scope.to_string());
    if (fresh) {
      auto bytes = canonicalize_scope(decoded, scope);
      if (bytes.ok()) {
        it->second.ok = true;
        it->second.digest = sha256(bytes.value());
      } else {
        it->second.note = bytes.error().message;
      }
    }
    return it->second;
  };

  for (std::size_t i = 0; i < bundle.chain.size(); ++i) {
    const ChainElement& element = bundle.chain[i];
    ElementReport er;
    er.index = i;
    er.signer_serial = element.signer_serial;
    if (element.target.kind == Target::Kind::PriorSignature) {
      depth[i] = depth[element.target.index] + 1;
    }
    er.depth = depth[i];
    er.file_digest_match = element.file_digest == actual_file_digest;

    const Certificate* cert = store.find(element.signer_serial);
    if (!cert) {
      er.notes.push_back("unknown certificate " + element.signer_serial);
      report.elements.push_back(std::move(er));
      continue;
    }
    er.subject_name = cert->subject_name;

    auto path = check_path(*cert, trust_anchors, store, at_time);
    er.path_ok = path.ok;
    if (!path.ok) er.notes.push_back(path.note);

    if (element.target.kind == Target::Kind::FileScope) {
      er.signature_ok = ed25519_verify(
          cert->public_key,
          scope_sign_message(element.scope_digest, element.file_digest,
                             element.signer_serial, element.signing_time),
          element.signature);
    } else {
      const ChainElement& prior = bundle.chain[element.target.index];
      er.signature_ok = ed25519_verify(cert->public_key,
                                       counter_sign_message(prior.signature),
                                       element.signature);
    }
    if (!er.signature_ok) er.notes.push_back("signature does not verify");

    const ScopeCheck& scope_check = recompute_scope(element.scope_prefixes);
    if (!scope_check.ok) {
      er.scope_digest_ok = false;
      er.notes.push_back("scope recomputation failed: " + scope_check.note);
    } else {
      er.scope_digest_ok = scope_check.digest == element.scope_digest;
      if (!er.scope_digest_ok) er.notes.push_back("scope digest mismatch");
    }

    if (element.target.kind == Target::Kind::PriorSignature &&
        cert->kind == CertKind::Attestation) {
      er.authorization_ok = true;  // endorses a signature, asserts no holdership
    } else {
      er.authorization_ok = !element.scope_prefixes.empty() &&
                            cert->authorized_prefixes.contains(element.scope_prefixes);
      if (!er.authorization_ok) er.notes.push_back("scope exceeds authorization");
    }

    report.elements.push_back(std::move(er));
  }

  for (const auto& er : report.elements) {
    if (er.passed()) report.trust_level = std::max(report.trust_level, er.depth);
  }
  return report;
}

}  // namespace gfk::auth
