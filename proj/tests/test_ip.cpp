// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The geofeedkit Authors

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <string>

#include "geofeedkit/ip.hpp"

using namespace gfk;
using namespace gfk::net;

TEST_CASE("address parse round-trips") {
  for (const char* text : {"0.0.0.0", "192.0.2.1", "255.255.255.255", "10.0.0.1"}) {
    auto addr = IpAddress::parse(text);
    REQUIRE(addr);
    CHECK(addr->family() == Family::V4);
    CHECK(addr->to_string() == text);
  }
  for (const char* text : {"::", "::1", "2001:db8::", "fe80::1"}) {
    auto addr = IpAddress::parse(text);
    REQUIRE(addr);
    CHECK(addr->family() == Family::V6);
    CHECK(addr->to_string() == text);
  }
}

TEST_CASE("address parse rejects junk") {
  for (const char* text :
       {"", " ", "1.2.3", "1.2.3.4.5", "256.0.0.1", "1.2.3.4 ", " 1.2.3.4",
        "2001:db8::/32", "g::1", "1.2.3.4/24", "0x10.0.0.1"}) {
    CHECK_FALSE(IpAddress::parse(text));
  }
}

TEST_CASE("address ordering follows byte order") {
  auto a = IpAddress::parse("10.0.0.1");
  auto b = IpAddress::parse("10.0.0.2");
  auto c = IpAddress::parse("9.255.255.255");
  REQUIRE(a);
  REQUIRE(b);
  REQUIRE(c);
  CHECK(*a < *b);
  CHECK(*c < *a);
  CHECK(*a == *a);
}

TEST_CASE("bit indexing is most significant first") {
  auto addr = IpAddress::parse("128.0.0.1");
  REQUIRE(addr);
  CHECK(addr->bit(0) == 1);
  CHECK(addr->bit(1) == 0);
  CHECK(addr->bit(31) == 1);
}

TEST_CASE("prefix parse accepts canonical CIDR") {
  auto p = Prefix::parse("192.0.2.0/24");
  REQUIRE(p.ok());
  CHECK(p.value().length() == 24);
  CHECK(p.value().family() == Family::V4);
  CHECK(p.value().to_string() == "192.0.2.0/24");

  auto p6 = Prefix::parse("2001:db8::/32");
  REQUIRE(p6.ok());
  CHECK(p6.value().length() == 32);
  CHECK(p6.value().to_string() == "2001:db8::/32");
}

TEST_CASE("bare addresses become host prefixes") {
  auto v4 = Prefix::parse("192.0.2.7");
  REQUIRE(v4.ok());
  CHECK(v4.value().length() == 32);
  auto v6 = Prefix::parse("2001:db8::1");
  REQUIRE(v6.ok());
  CHECK(v6.value().length() == 128);
}

TEST_CASE("prefix parse rejects host bits and malformed lengths") {
  for (const char* text :
       {"192.0.2.1/24", "10.0.0.0/33", "2001:db8::1/32", "2001:db8::/129",
        "192.0.2.0/", "192.0.2.0/ 24", "192.0.2.0/+24", "192.0.2.0/2 4",
        "192.0.2.0//24", "192.0.2.0/24x", "/24", ""}) {
    CHECK_FALSE(Prefix::parse(text).ok());
  }
}

TEST_CASE("prefix parse rejects non-canonical length tokens") {
  CHECK_FALSE(Prefix::parse("192.0.2.0/024").ok());
  CHECK(Prefix::parse("192.0.2.0/0").ok() == false);  // host bits set for /0
  CHECK(Prefix::parse("0.0.0.0/0").ok());
}

TEST_CASE("containment of addresses") {
  auto p = Prefix::parse("10.1.0.0/16").value();
  CHECK(p.contains(*IpAddress::parse("10.1.0.0")));
  CHECK(p.contains(*IpAddress::parse("10.1.255.255")));
  CHECK_FALSE(p.contains(*IpAddress::parse("10.2.0.0")));
  CHECK_FALSE(p.contains(*IpAddress::parse("2001:db8::1")));
}

TEST_CASE("containment of prefixes") {
  auto p8 = Prefix::parse("10.0.0.0/8").value();
  auto p16 = Prefix::parse("10.1.0.0/16").value();
  auto other = Prefix::parse("11.0.0.0/16").value();
  CHECK(p8.contains(p16));
  CHECK(p8.contains(p8));
  CHECK_FALSE(p16.contains(p8));
  CHECK_FALSE(p8.contains(other));
}

TEST_CASE("last address of a prefix") {
  CHECK(Prefix::parse("10.0.0.0/8").value().last_address().to_string() ==
        "10.255.255.255");
  CHECK(Prefix::parse("192.0.2.4/30").value().last_address().to_string() ==
        "192.0.2.7");
  CHECK(Prefix::parse("2001:db8::/32").value().last_address().to_string() ==
        "2001:db8:ffff:ffff:ffff:ffff:ffff:ffff");
}

TEST_CASE("range construction") {
  auto lo = *IpAddress::parse("10.0.0.0");
  auto hi = *IpAddress::parse("10.0.0.255");
  auto range = IpRange::make(lo, hi);
  REQUIRE(range);
  CHECK(range->start == lo);
  CHECK(range->end == hi);
  CHECK_FALSE(IpRange::make(hi, lo));
  CHECK_FALSE(IpRange::make(lo, *IpAddress::parse("2001:db8::1")));
  auto from = IpRange::from_prefix(Prefix::parse("10.0.0.0/24").value());
  CHECK(from == *range);
}

TEST_CASE("randomized containment agrees with range arithmetic") {
  std::mt19937 rng(7);
  auto random_v4 = [&] {
    std::array<std::uint8_t, 4> bytes;
    for (auto& b : bytes) b = static_cast<std::uint8_t>(rng());
    return IpAddress(Family::V4, bytes);
  };
  auto value_of = [](const IpAddress& a) {
    std::uint32_t v = 0;
    for (auto b : a.bytes()) v = (v << 8) | b;
    return v;
  };
  for (int i = 0; i < 2000; ++i) {
    unsigned length = rng() % 33;
    auto base = random_v4();
    std::uint32_t mask = length == 0 ? 0 : ~std::uint32_t{0} << (32 - length);
    std::uint32_t masked = value_of(base) & mask;
    std::array<std::uint8_t, 4> canon{
        static_cast<std::uint8_t>(masked >> 24), static_cast<std::uint8_t>(masked >> 16),
        static_cast<std::uint8_t>(masked >> 8), static_cast<std::uint8_t>(masked)};
    auto prefix = Prefix::make(IpAddress(Family::V4, canon), length);
    REQUIRE(prefix);
    auto probe = random_v4();
    bool expect = (value_of(probe) & mask) == masked;
    CHECK(prefix->contains(probe) == expect);
  }
}
