// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The geofeedkit Authors

#pragma once

#include <string>
#include <vector>

#include "geofeedkit/ip.hpp"

namespace gfk::net {

/// A canonical set of prefixes: sorted by (family, base, length), overlaps
/// collapsed, aligned sibling pairs aggregated. Containment and subset
/// queries operate on the covered address set.
class PrefixSet {
 public:
  PrefixSet() = default;
  explicit PrefixSet(std::vector<Prefix> prefixes);

  static Result<PrefixSet> parse(const std::vector<std::string>& texts);

  const std::vector<Prefix>& prefixes() const { return prefixes_; }
  bool empty() const { return prefixes_.empty(); }
  std::size_t size() const { return prefixes_.size(); }

  bool contains(const IpAddress& addr) const;
  bool contains(const Prefix& prefix) const;
  /// True when every address covered by `other` is covered here.
  bool contains(const PrefixSet& other) const;

  std::vector<std::string> to_strings() const;
  /// Canonical comma-joined rendering, stable across construction order.
  std::string to_string() const;

  friend bool operator==(const PrefixSet&, const PrefixSet&) = default;

 private:
  const Prefix* covering_member(const IpAddress& addr) const;

  std::vector<Prefix> prefixes_;
};

}  // namespace gfk::net
