// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The geofeedkit Authors

#include "geofeedkit/ip.hpp"

#include <arpa/inet.h>

#include <algorithm>
#include <cstring>

namespace gfk::net {

IpAddress::IpAddress(Family family, std::span<const std::uint8_t> bytes) : family_(family) {
  std::size_t n = family == Family::V4 ? 4 : 16;
  std::memcpy(bytes_.data(), bytes.data(), std::min(bytes.size(), n));
}

std::optional<IpAddress> IpAddress::parse(std::string_view text) {
  if (text.empty() || text.size() > 45) return std::nullopt;
  std::string buf(text);
  IpAddress out;
  if (inet_pton(AF_INET, buf.c_str(), out.bytes_.data()) == 1) {
    out.family_ = Family::V4;
    return out;
  }
  if (inet_pton(AF_INET6, buf.c_str(), out.bytes_.data()) == 1) {
    out.family_ = Family::V6;
    return out;
  }
  return std::nullopt;
}

std::string IpAddress::to_string() const {
  char buf[INET6_ADDRSTRLEN] = {};
  int af = family_ == Family::V4 ? AF_INET : AF_INET6;
  if (!inet_ntop(af, bytes_.data(), buf, sizeof buf)) return {};
  return buf;
}

namespace {

// Length token must be plain decimal with no sign and no leading zero.
std::optional<unsigned> parse_length_token(std::string_view text, unsigned max) {
  if (text.empty() || text.size() > 3) return std::nullopt;
  if (text.size() > 1 && text[0] == '0') return std::nullopt;
  unsigned value = 0;
  for (char c : text) {
    if (c < '0' || c > '9') return std::nullopt;
    value = value * 10 + static_cast<unsigned>(c - '0');
  }
  if (value > max) return std::nullopt;
  return value;
}

bool host_bits_clear(const IpAddress& base, unsigned length) {
  unsigned total = base.bit_count();
  for (unsigned i = length; i < total; ++i) {
    if (base.bit(i) != 0) return false;
  }
  return true;
}

}  // namespace

Result<Prefix> Prefix::parse(std::string_view text) {
  if (text.empty()) {
    return Error{Errc::MalformedIpPrefix, "empty prefix"};
  }
  auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    auto addr = IpAddress::parse(text);
    if (!addr) {
      return Error{Errc::MalformedIpPrefix, "unparseable address: " + std::string(text)};
    }
    Prefix p;
    p.base_ = *addr;
    p.length_ = addr->bit_count();
    return p;
  }
  auto addr = IpAddress::parse(text.substr(0, slash));
  if (!addr) {
    return Error{Errc::MalformedIpPrefix, "unparseable address: " + std::string(text)};
  }
  auto length = parse_length_token(text.substr(slash + 1), addr->bit_count());
  if (!length) {
    return Error{Errc::MalformedIpPrefix, "bad prefix length: " + std::string(text)};
  }
  if (!host_bits_clear(*addr, *length)) {
    return Error{Errc::MalformedIpPrefix, "host bits set below mask: " + std::string(text)};
  }
  Prefix p;
  p.base_ = *addr;
  p.length_ = *length;
  return p;
}

std::optional<Prefix> Prefix::make(const IpAddress& base, unsigned length) {
  if (length > base.bit_count()) return std::nullopt;
  if (!host_bits_clear(base, length)) return std::nullopt;
  Prefix p;
  p.base_ = base;
  p.length_ = length;
  return p;
}

bool Prefix::contains(const IpAddress& addr) const {
  if (addr.family() != family()) return false;
  for (unsigned i = 0; i < length_; ++i) {
    if (addr.bit(i) != base_.bit(i)) return false;
  }
  return true;
}

bool Prefix::contains(const Prefix& other) const {
  if (other.family() != family() || other.length_ < length_) return false;
  return contains(other.base_);
}

IpAddress Prefix::last_address() const {
  std::array<std::uint8_t, 16> raw{};
  auto src = base_.bytes();
  std::copy(src.begin(), src.end(), raw.begin());
  unsigned total = base_.bit_count();
  for (unsigned i = length_; i < total; ++i) {
    raw[i / 8] |= static_cast<std::uint8_t>(1u << (7 - i % 8));
  }
  return IpAddress(family(), {raw.data(), src.size()});
}

std::string Prefix::to_string() const {
  return base_.to_string() + "/" + std::to_string(length_);
}

std::optional<IpRange> IpRange::make(const IpAddress& start, const IpAddress& end) {
  if (start.family() != end.family() || end < start) return std::nullopt;
  return IpRange{start, end};
}

IpRange IpRange::from_prefix(const Prefix& p) {
  return IpRange{p.base(), p.last_address()};
}

}  // namespace gfk::net
