// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The geofeedkit Authors

#include "geofeedkit/digest.hpp"

#include <sodium.h>

#include <stdexcept>

#include "geofeedkit/result.hpp"

namespace gfk {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::EmptyStream: return "empty_stream";
    case Errc::RangeParse: return "range_parse";
    case Errc::MalformedIpPrefix: return "malformed_ip_prefix";
    case Errc::MissingTotals: return "missing_totals";
    case Errc::DelegationExceedsIssuer: return "delegation_exceeds_issuer";
    case Errc::ExpiredIssuer: return "expired_issuer";
    case Errc::ExpiredCertificate: return "expired_certificate";
    case Errc::ScopeExceedsAuthorization: return "scope_exceeds_authorization";
    case Errc::ScopeContainsMalformedLine: return "scope_contains_malformed_line";
    case Errc::EmptyScope: return "empty_scope";
    case Errc::TargetOutOfRange: return "target_out_of_range";
    case Errc::UnknownCertificate: return "unknown_certificate";
    case Errc::SourceUnavailable: return "source_unavailable";
    case Errc::ParseError: return "parse_error";
    case Errc::IoError: return "io_error";
    case Errc::InvalidArgument: return "invalid_argument";
  }
  return "unknown";
}

namespace {

void ensure_sodium() {
  if (sodium_init() < 0) {
    throw std::runtime_error("libsodium initialization failed");
  }
}

}  // namespace

Sha256Digest sha256(std::span<const std::uint8_t> data) {
  ensure_sodium();
  Sha256Digest out{};
  crypto_hash_sha256(out.data(), data.data(), data.size());
  return out;
}

Sha256Digest sha256(std::string_view data) {
  return sha256(std::span<const std::uint8_t>(
      reinterpret_cast<const std::uint8_t*>(data.data()), data.size()));
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0x0f]);
  }
  return out;
}

std::vector<std::uint8_t> from_hex(std::string_view hex) {
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  std::vector<std::uint8_t> out;
  if (hex.size() % 2 != 0) return out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    int hi = nibble(hex[i]);
    int lo = nibble(hex[i + 1]);
    if (hi < 0 || lo < 0) return {};
    out.push_back(static_cast<std::uint8_t>(hi << 4 | lo));
  }
  return out;
}

std::string to_base64(std::span<const std::uint8_t> bytes) {
  ensure_sodium();
  std::string out;
  out.resize(sodium_base64_encoded_len(bytes.size(), sodium_base64_VARIANT_ORIGINAL));
  sodium_bin2base64(out.data(), out.size(), bytes.data(), bytes.size(),
                    sodium_base64_VARIANT_ORIGINAL);
  out.resize(out.find('\0') == std::string::npos ? out.size() : out.find('\0'));
  return out;
}

std::vector<std::uint8_t> from_base64(std::string_view text) {
  ensure_sodium();
  std::vector<std::uint8_t> out(text.size());
  std::size_t written = 0;
  if (sodium_base642bin(out.data(), out.size(), text.data(), text.size(), nullptr,
                        &written, nullptr, sodium_base64_VARIANT_ORIGINAL) != 0) {
    return {};
  }
  out.resize(written);
  return out;
}

}  // namespace gfk
