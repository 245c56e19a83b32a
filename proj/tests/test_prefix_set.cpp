// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The geofeedkit Authors

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include "geofeedkit/prefix_set.hpp"

using namespace gfk;
using namespace gfk::net;

namespace {

std::uint32_t value_of(const IpAddress& addr) {
  std::uint32_t v = 0;
  for (auto b : addr.bytes()) v = (v << 8) | b;
  return v;
}

IpAddress v4_of(std::uint32_t value) {
  std::array<std::uint8_t, 4> bytes{
      static_cast<std::uint8_t>(value >> 24), static_cast<std::uint8_t>(value >> 16),
      static_cast<std::uint8_t>(value >> 8), static_cast<std::uint8_t>(value)};
  return IpAddress(Family::V4, bytes);
}

Prefix random_v4_prefix(std::mt19937& rng, unsigned max_length) {
  unsigned length = rng() % (max_length + 1);
  std::uint32_t mask = length == 0 ? 0 : ~std::uint32_t{0} << (32 - length);
  std::uint32_t base = rng() & mask;
  auto prefix = Prefix::make(v4_of(base), length);
  REQUIRE(prefix);
  return *prefix;
}

// Membership decided per input prefix, ignoring canonicalization entirely.
bool oracle_contains(const std::vector<Prefix>& raw, const IpAddress& addr) {
  for (const auto& p : raw) {
    if (p.family() == addr.family() && p.contains(addr)) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("canonical form sorts, dedupes, and collapses overlap") {
  auto set = PrefixSet::parse({"10.1.0.0/16", "10.0.0.0/8", "10.2.0.0/16",
                               "10.0.0.0/8"});
  REQUIRE(set.ok());
  CHECK(set.value().to_strings() == std::vector<std::string>{"10.0.0.0/8"});
}

TEST_CASE("aligned sibling pairs aggregate") {
  auto set = PrefixSet::parse({"10.0.0.0/9", "10.128.0.0/9"});
  REQUIRE(set.ok());
  CHECK(set.value().to_strings() == std::vector<std::string>{"10.0.0.0/8"});

  auto chain = PrefixSet::parse({"192.0.2.0/25", "192.0.2.128/26", "192.0.2.192/26"});
  REQUIRE(chain.ok());
  CHECK(chain.value().to_strings() == std::vector<std::string>{"192.0.2.0/24"});
}

TEST_CASE("unaligned neighbors stay separate") {
  auto set = PrefixSet::parse({"10.1.0.0/16", "10.2.0.0/16"});
  REQUIRE(set.ok());
  CHECK(set.value().size() == 2);
}

TEST_CASE("families never merge") {
  auto set = PrefixSet::parse({"0.0.0.0/0", "::/0"});
  REQUIRE(set.ok());
  CHECK(set.value().size() == 2);
  CHECK(set.value().contains(*IpAddress::parse("203.0.113.9")));
  CHECK(set.value().contains(*IpAddress::parse("2001:db8::1")));
}

TEST_CASE("construction order does not matter") {
  auto a = PrefixSet::parse({"10.0.0.0/9", "192.0.2.0/24", "10.128.0.0/9"});
  auto b = PrefixSet::parse({"192.0.2.0/24", "10.128.0.0/9", "10.0.0.0/9"});
  REQUIRE(a.ok());
  REQUIRE(b.ok());
  CHECK(a.value() == b.value());
  CHECK(a.value().to_string() == b.value().to_string());
}

TEST_CASE("parse propagates member errors") {
  CHECK_FALSE(PrefixSet::parse({"10.0.0.0/8", "bogus"}).ok());
  CHECK_FALSE(PrefixSet::parse({"10.0.0.1/8"}).ok());
}

TEST_CASE("empty set contains nothing and is contained by all") {
  PrefixSet empty;
  auto some = PrefixSet::parse({"10.0.0.0/8"}).value();
  CHECK_FALSE(empty.contains(*IpAddress::parse("10.0.0.1")));
  CHECK(some.contains(empty));
  CHECK(empty.contains(empty));
  CHECK_FALSE(empty.contains(some));
}

TEST_CASE("subset containment over the covered address set") {
  auto big = PrefixSet::parse({"10.0.0.0/8", "2001:db8::/32"}).value();
  auto small = PrefixSet::parse({"10.1.0.0/16", "10.200.0.0/16"}).value();
  auto split = PrefixSet::parse({"10.0.0.0/9", "10.128.0.0/9"}).value();
  auto outside = PrefixSet::parse({"10.1.0.0/16", "11.0.0.0/16"}).value();
  CHECK(big.contains(small));
  CHECK(big.contains(split));
  CHECK(split.contains(small));
  CHECK_FALSE(big.contains(outside));
  CHECK_FALSE(small.contains(big));
  // Adjacent pieces covering exactly the probe set.
  auto probe = PrefixSet::parse({"10.0.0.0/8"}).value();
  CHECK(split.contains(probe));
}

TEST_CASE("randomized membership agrees with a per-prefix oracle") {
  std::mt19937 rng(20260822);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Prefix> raw;
    unsigned count = 1 + rng() % 12;
    for (unsigned i = 0; i < count; ++i) raw.push_back(random_v4_prefix(rng, 24));
    PrefixSet set(raw);

    for (int probe = 0; probe < 100; ++probe) {
      // Half the probes land near a member boundary to stress edges.
      IpAddress addr = v4_of(rng());
      if (probe % 2 == 0 && !raw.empty()) {
        const auto& p = raw[probe % raw.size()];
        std::uint32_t lo = value_of(p.base());
        std::uint32_t hi = value_of(p.last_address());
        switch (probe % 4) {
          case 0: addr = v4_of(lo); break;
          default: addr = v4_of(hi + (rng() % 2)); break;
        }
      }
      CHECK(set.contains(addr) == oracle_contains(raw, addr));
    }
  }
}

TEST_CASE("randomized canonicalization preserves membership") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Prefix> raw;
    unsigned count = 1 + rng() % 8;
    for (unsigned i = 0; i < count; ++i) raw.push_back(random_v4_prefix(rng, 12));
    PrefixSet once(raw);
    PrefixSet twice(once.prefixes());
    CHECK(once == twice);
    // Canonical members never overlap.
    const auto& ps = once.prefixes();
    for (std::size_t i = 0; i + 1 < ps.size(); ++i) {
      CHECK_FALSE(ps[i].contains(ps[i + 1]));
      CHECK_FALSE(ps[i + 1].contains(ps[i]));
    }
  }
}
