// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The geofeedkit Authors

#include "geofeedkit/prefix_set.hpp"

#include <algorithm>

namespace gfk::net {

namespace {

// Two prefixes are aligned siblings when they share length L > 0 and differ
// only in bit L-1, so together they form exactly the L-1 parent block.
std::optional<Prefix> merge_siblings(const Prefix& a, const Prefix& b) {
  if (a.family() != b.family() || a.length() != b.length() || a.length() == 0) {
    return std::nullopt;
  }
  unsigned parent_len = a.length() - 1;
  if (a.base().bit(parent_len) != 0 || b.base().bit(parent_len) != 1) {
    return std::nullopt;
  }
  for (unsigned i = 0; i < parent_len; ++i) {
    if (a.base().bit(i) != b.base().bit(i)) return std::nullopt;
  }
  return Prefix::make(a.base(), parent_len);
}

}  // namespace

PrefixSet::PrefixSet(std::vector<Prefix> prefixes) : prefixes_(std::move(prefixes)) {
  std::sort(prefixes_.begin(), prefixes_.end(), [](const Prefix& a, const Prefix& b) {
    if (a.family() != b.family()) return a.family() < b.family();
    if (a.base() != b.base()) return a.base() < b.base();
    return a.length() < b.length();
  });
  // In this ordering a covering prefix always precedes anything it covers.
  std::vector<Prefix> swept;
  for (const Prefix& p : prefixes_) {
    if (!swept.empty() && swept.back().contains(p)) continue;
    swept.push_back(p);
  }
  bool merged = true;
  while (merged) {
    merged = false;
    for (std::size_t i = 0; i + 1 < swept.size(); ++i) {
      if (auto parent = merge_siblings(swept[i], swept[i + 1])) {
        swept[i] = *parent;
        swept.erase(swept.begin() + static_cast<std::ptrdiff_t>(i) + 1);
        merged = true;
        break;
      }
    }
  }
  prefixes_ = std::move(swept);
}

Result<PrefixSet> PrefixSet::parse(const std::vector<std::string>& texts) {
  std::vector<Prefix> prefixes;
  prefixes.reserve(texts.size());
  for (const auto& t : texts) {
    auto p = Prefix::parse(t);
    if (!p.ok()) return p.error();
    prefixes.push_back(p.value());
  }
  return PrefixSet(std::move(prefixes));
}

const Prefix* PrefixSet::covering_member(const IpAddress& addr) const {
  // Members are disjoint and sorted; the only candidate is the last member
  // whose base is <= addr within the same family.
  auto it = std::upper_bound(
      prefixes_.begin(), prefixes_.end(), addr, [](const IpAddress& a, const Prefix& p) {
        if (a.family() != p.family()) return a.family() < p.family();
        return a < p.base();
      });
  if (it == prefixes_.begin()) return nullptr;
  --it;
  if (it->family() == addr.family() && it->contains(addr)) return &*it;
  return nullptr;
}

bool PrefixSet::contains(const IpAddress& addr) const {
  return covering_member(addr) != nullptr;
}

bool PrefixSet::contains(const Prefix& prefix) const {
  const Prefix* m = covering_member(prefix.base());
  return m != nullptr && m->contains(prefix);
}

bool PrefixSet::contains(const PrefixSet& other) const {
  return std::all_of(other.prefixes_.begin(), other.prefixes_.end(),
                     [this](const Prefix& p) { return contains(p); });
}

std::vector<std::string> PrefixSet::to_strings() const {
  std::vector<std::string> out;
  out.reserve(prefixes_.size());
  for (const auto& p : prefixes_) out.push_back(p.to_string());
  return out;
}

std::string PrefixSet::to_string() const {
  std::string out;
  for (const auto& p : prefixes_) {
    if (!out.empty()) out += ",";
    out += p.to_string();
  }
  return out;
}

}  // namespace gfk::net
