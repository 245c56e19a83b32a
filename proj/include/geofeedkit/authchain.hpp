// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The geofeedkit Authors

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geofeedkit/digest.hpp"
#include "geofeedkit/prefix_set.hpp"
#include "geofeedkit/result.hpp"

namespace gfk::geofeed {
struct GeofeedFile;
}

namespace gfk::auth {

// Prefix holders assert authority over address space and may delegate subsets
// of it.  Attestation authorities vouch for other parties' signatures without
// holding address space themselves; they cannot mint prefix authority.
enum class CertKind { PrefixHolder, Attestation };

std::string_view cert_kind_name(CertKind kind);
std::optional<CertKind> cert_kind_from_name(std::string_view name);

struct Identity {
  std::string subject_name;
  std::vector<std::uint8_t> public_key;  // ed25519, 32 bytes
  std::vector<std::uint8_t> secret_key;  // ed25519, 64 bytes

  std::string to_json() const;
  static Result<Identity> from_json(std::string_view text);
};

// Fresh keypair, or a deterministic one when a seed string is supplied.
Identity generate_identity(std::string subject_name,
                           std::optional<std::string_view> seed = std::nullopt);

struct Certificate {
  std::string serial;
  std::string subject_name;
  std::vector<std::uint8_t> public_key;
  CertKind kind = CertKind::PrefixHolder;
  net::PrefixSet authorized_prefixes;
  std::optional<std::string> issuer_serial;  // absent for self-signed roots
  std::int64_t not_before = 0;               // unix seconds, inclusive
  std::int64_t not_after = 0;                // unix seconds, inclusive
  std::vector<std::uint8_t> issuer_signature;

  bool is_root() const { return !issuer_serial.has_value(); }
  bool covers(std::int64_t t) const { return not_before <= t && t <= not_after; }

  // Deterministic byte rendering of everything the issuer vouches for.
  std::vector<std::uint8_t> canonical_body() const;

  std::string to_json() const;
  static Result<Certificate> from_json(std::string_view text);
};

class CertificateStore {
 public:
  void add(Certificate cert);
  bool remove(const std::string& serial);
  const Certificate* find(const std::string& serial) const;
  std::size_t size() const { return by_serial_.size(); }
  const std::map<std::string, Certificate>& all() const { return by_serial_; }

  Result<void> save(const std::string& path) const;
  static Result<CertificateStore> load(const std::string& path);

 private:
  std::map<std::string, Certificate> by_serial_;
};

// Self-signed trust anchor.  Roots may grant any prefixes: they are where
// prefix authority enters the system.
Certificate make_root_certificate(const Identity& identity, CertKind kind,
                                  net::PrefixSet prefixes, std::int64_t not_before,
                                  std::int64_t not_after);

// Issues a subject certificate signed by the issuer.  Non-root prefix holders
// may only delegate prefixes they themselves hold; non-root attestation
// authorities may only issue certificates that carry no prefixes.
Result<Certificate> issue_certificate(const Identity& issuer_identity,
                                      const Certificate& issuer_cert,
                                      const std::vector<std::uint8_t>& subject_public_key,
                                      const std::string& subject_name, CertKind kind,
                                      net::PrefixSet prefixes, std::int64_t not_before,
                                      std::int64_t not_after, std::int64_t at_time);

struct Target {
  enum class Kind { FileScope, PriorSignature };
  Kind kind = Kind::FileScope;
  std::size_t index = 0;  // meaningful for PriorSignature only

  static Target file_scope() { return {Kind::FileScope, 0}; }
  static Target prior(std::size_t index) { return {Kind::PriorSignature, index}; }
};

struct ChainElement {
  std::string signer_serial;
  net::PrefixSet scope_prefixes;
  Sha256Digest scope_digest{};
  Sha256Digest file_digest{};
  Target target;
  std::int64_t signing_time = 0;
  std::vector<std::uint8_t> signature;
  std::string sig_alg = "ed25519";
};

struct SignedBundle {
  std::string file_reference;  // url or path, informational
  std::string file_digest_alg = "sha256";
  Sha256Digest file_digest{};
  std::vector<ChainElement> chain;

  std::string to_json() const;
  static Result<SignedBundle> from_json(std::string_view text);
};

// Line terminators folded to LF; nothing else is touched.
std::string canonical_file_bytes(std::string_view raw);
Sha256Digest canonical_file_digest(std::string_view raw);

// Scope digest input: the canonical prefix-list header followed by exactly the
// data lines whose prefix falls inside the scope, in file order, LF-terminated.
// Lines inside the scope that fail validation abort with their line numbers;
// lines whose prefix does not parse belong to no scope and are never selected.
Result<std::string> canonicalize_scope(std::string_view file_bytes,
                                       const net::PrefixSet& scope);
Result<std::string> canonicalize_scope(const geofeed::GeofeedFile& file,
                                       const net::PrefixSet& scope);

// Publisher signature over its own slice of the file.
Result<ChainElement> sign_scope(const Identity& identity, const Certificate& cert,
                                std::string_view file_bytes,
                                const net::PrefixSet& scope_prefixes,
                                std::int64_t signing_time);

// Starts a bundle from a publisher's element.
SignedBundle make_bundle(std::string file_reference, std::string_view file_bytes,
                         ChainElement first);

// Appends an endorsement.  A FileScope countersignature signs the
// countersigner's own scope selection and requires holding that scope; a
// PriorSignature countersignature signs an existing element's signature bytes
// and inherits its scope.  Prefix holders must hold the inherited scope;
// attestation authorities endorse without holding it.
Result<void> countersign(const Identity& identity, const Certificate& cert,
                         SignedBundle& bundle, Target target,
                         std::string_view file_bytes,
                         const net::PrefixSet& own_scope, std::int64_t signing_time);

struct ElementReport {
  std::size_t index = 0;
  std::string signer_serial;
  std::string subject_name;
  std::size_t depth = 0;      // 1 for file-scope elements, target depth + 1 otherwise
  bool path_ok = false;       // signer certificate chains to a trust anchor
  bool signature_ok = false;
  bool scope_digest_ok = false;
  bool authorization_ok = false;
  bool file_digest_match = false;  // informational, full-file digest comparison
  std::vector<std::string> notes;

  bool passed() const {
    return path_ok && signature_ok && scope_digest_ok && authorization_ok;
  }
};

struct VerificationReport {
  std::vector<ElementReport> elements;
  std::size_t trust_level = 0;  // deepest passing element, 0 when none pass
  bool file_digest_match = false;

  std::string to_json() const;
};

// Per-element verification: certificate path with validity windows and
// delegation containment, signature bytes, recomputed scope digest, and scope
// authorization.  The full-file digest comparison is reported but does not
// gate any element; trust cutoff is the consumer's call.
Result<VerificationReport> verify_bundle(const SignedBundle& bundle,
                                         std::string_view file_bytes,
                                         const std::vector<Certificate>& trust_anchors,
                                         const CertificateStore& store,
                                         std::int64_t at_time);

}  // namespace gfk::auth
