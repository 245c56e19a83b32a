// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The geofeedkit Authors

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geofeedkit/ip.hpp"

namespace gfk::rpsl {

enum class Rir { Afrinic, Apnic, Arin, Lacnic, Ripe };
enum class ObjectClass { Inetnum, Inet6num, NetRange };

std::string_view rir_name(Rir rir);
std::optional<Rir> rir_from_name(std::string_view name);
std::string_view object_class_name(ObjectClass oc);
std::optional<ObjectClass> object_class_from_name(std::string_view name);

struct RpslAttribute {
  std::string key;      // lowercased
  std::string raw_key;  // as written
  // Raw text after the colon, leading whitespace and embedded continuation
  // lines preserved so records re-serialize byte-for-byte.
  std::string value;

  /// Continuations folded, surrounding whitespace trimmed.
  std::string logical_value() const;
};

struct RpslRecord {
  ObjectClass object_class = ObjectClass::Inetnum;
  net::IpRange range;
  std::vector<RpslAttribute> attributes;  // file order, duplicates kept
  Rir source_rir = Rir::Ripe;
  std::optional<std::uint32_t> origin_as;

  std::string render() const;
};

struct RecordError {
  std::size_t record_index = 0;
  std::string offending_text;
  std::string message;
};

struct RpslParseResult {
  std::vector<RpslRecord> records;
  std::vector<RecordError> errors;
};

/// Splits a registry dump into blank-line-separated blocks and parses every
/// inetnum/inet6num/NetRange object. Other object classes are skipped. A
/// malformed range yields a RecordError for that object, never a stream
/// abort; a stream with no target objects at all is EmptyStream.
Result<RpslParseResult> parse_rpsl_stream(std::string_view text, Rir source_rir);

enum class LocatorSource { Remarks, GeofeedAttr };

std::string_view locator_source_name(LocatorSource s);

/// RFC 9092 adherence verdict. Valid is the absence of both failure tags.
struct LocatorVerdict {
  bool invalid_formatting = false;
  bool not_https = false;

  bool valid() const { return !invalid_formatting && !not_https; }
  std::vector<std::string> names() const;

  friend bool operator==(const LocatorVerdict&, const LocatorVerdict&) = default;
};

struct GeofeedLocator {
  std::string url;
  LocatorSource source_attribute = LocatorSource::Remarks;
  std::size_t record_index = 0;  // index into the owning parse result
  LocatorVerdict verdict;
  // Record carried both a remarks mention and a geofeed: attribute.
  bool dual_source_conflict = false;
};

/// Adherence classification for one extracted URL. `surrounding_text` is the
/// attribute value the URL was found in. Pure function.
LocatorVerdict classify_locator(std::string_view url, LocatorSource source_attribute,
                                std::string_view surrounding_text);

/// Scans remarks-kind attributes for a `Geofeed` token followed by a URL and
/// geofeed: attributes for a bare URL. Absence yields an empty list. Loose on
/// extraction, strict in the verdicts.
std::vector<GeofeedLocator> extract_locators(const RpslRecord& record);

/// One line of the locator index emitted by discovery.
struct LocatorIndexEntry {
  Rir rir = Rir::Ripe;
  ObjectClass object_class = ObjectClass::Inetnum;
  std::string range_start;
  std::string range_end;
  std::string url;
  LocatorSource source_attribute = LocatorSource::Remarks;
  LocatorVerdict verdict;
  std::optional<std::uint32_t> origin_as;
  bool dual_source_conflict = false;

  /// Identity of the owning record.
  std::string record_key() const;

  std::string to_json() const;
  static Result<LocatorIndexEntry> from_json(std::string_view text);
};

LocatorIndexEntry make_index_entry(const RpslRecord& record, const GeofeedLocator& locator);

struct DiscoveryResult {
  RpslParseResult parse;
  std::vector<LocatorIndexEntry> entries;
};

Result<DiscoveryResult> discover(std::string_view text, Rir source_rir);

Result<std::vector<LocatorIndexEntry>> load_locator_index(std::istream& in);

}  // namespace gfk::rpsl
