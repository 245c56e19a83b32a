// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The geofeedkit Authors

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "geofeedkit/result.hpp"

namespace gfk::net {

enum class Family : std::uint8_t { V4, V6 };

inline unsigned family_bits(Family f) { return f == Family::V4 ? 32 : 128; }

/// An IPv4 or IPv6 address. V4 uses the first 4 bytes, network order.
class IpAddress {
 public:
  IpAddress() = default;
  IpAddress(Family family, std::span<const std::uint8_t> bytes);

  static std::optional<IpAddress> parse(std::string_view text);

  Family family() const { return family_; }
  unsigned bit_count() const { return family_bits(family_); }
  std::span<const std::uint8_t> bytes() const {
    return {bytes_.data(), family_ == Family::V4 ? std::size_t{4} : std::size_t{16}};
  }

  /// Bit value at position i, 0 = most significant.
  unsigned bit(unsigned i) const {
    return (bytes_[i / 8] >> (7 - i % 8)) & 1u;
  }

  std::string to_string() const;

  friend auto operator<=>(const IpAddress& a, const IpAddress& b) {
    if (a.family_ != b.family_) return a.family_ <=> b.family_;
    return a.bytes_ <=> b.bytes_;
  }
  friend bool operator==(const IpAddress&, const IpAddress&) = default;

 private:
  Family family_ = Family::V4;
  std::array<std::uint8_t, 16> bytes_{};
};

/// A canonical CIDR prefix: all bits below the mask are zero.
class Prefix {
 public:
  Prefix() = default;

  /// Strict parse: "a.b.c.d/len", "x::/len", or a bare address which gets the
  /// maximal length. Host bits set below the mask are rejected, as are
  /// out-of-range lengths and non-canonical length tokens.
  static Result<Prefix> parse(std::string_view text);

  /// Builds from parts; rejects host bits set below the mask.
  static std::optional<Prefix> make(const IpAddress& base, unsigned length);

  const IpAddress& base() const { return base_; }
  unsigned length() const { return length_; }
  Family family() const { return base_.family(); }

  bool contains(const IpAddress& addr) const;
  bool contains(const Prefix& other) const;

  IpAddress last_address() const;
  std::string to_string() const;

  friend auto operator<=>(const Prefix&, const Prefix&) = default;

 private:
  IpAddress base_;
  unsigned length_ = 0;
};

/// An inclusive address range, both ends in the same family.
struct IpRange {
  IpAddress start;
  IpAddress end;

  static std::optional<IpRange> make(const IpAddress& start, const IpAddress& end);
  static IpRange from_prefix(const Prefix& p);

  friend auto operator<=>(const IpRange&, const IpRange&) = default;
};

}  // namespace gfk::net
