// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The geofeedkit Authors

#include "geofeedkit/rpsl.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <istream>

namespace gfk::rpsl {

std::string_view rir_name(Rir rir) {
  switch (rir) {
    case Rir::Afrinic: return "AFRINIC";
    case Rir::Apnic: return "APNIC";
    case Rir::Arin: return "ARIN";
    case Rir::Lacnic: return "LACNIC";
    case Rir::Ripe: return "RIPE";
  }
  return "RIPE";
}

std::optional<Rir> rir_from_name(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  if (upper == "AFRINIC") return Rir::Afrinic;
  if (upper == "APNIC") return Rir::Apnic;
  if (upper == "ARIN") return Rir::Arin;
  if (upper == "LACNIC") return Rir::Lacnic;
  if (upper == "RIPE" || upper == "RIPENCC" || upper == "RIPE-NCC") return Rir::Ripe;
  return std::nullopt;
}

std::string_view object_class_name(ObjectClass oc) {
  switch (oc) {
    case ObjectClass::Inetnum: return "inetnum";
    case ObjectClass::Inet6num: return "inet6num";
    case ObjectClass::NetRange: return "netrange";
  }
  return "inetnum";
}

std::optional<ObjectClass> object_class_from_name(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "inetnum") return ObjectClass::Inetnum;
  if (lower == "inet6num") return ObjectClass::Inet6num;
  if (lower == "netrange") return ObjectClass::NetRange;
  return std::nullopt;
}

std::string_view locator_source_name(LocatorSource s) {
  return s == LocatorSource::Remarks ? "remarks" : "geofeed";
}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

std::vector<std::string_view> tokenize(std::string_view text) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) tokens.push_back(text.substr(start, i - start));
  }
  return tokens;
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i]))) {
      return false;
    }
  }
  return true;
}

// RFC 3986-shaped absolute URL: scheme "://" non-space remainder.
bool url_shaped(std::string_view token) {
  auto sep = token.find("://");
  if (sep == std::string_view::npos || sep == 0 || sep + 3 >= token.size()) return false;
  char first = token[0];
  if (!std::isalpha(static_cast<unsigned char>(first))) return false;
  for (std::size_t i = 1; i < sep; ++i) {
    char c = token[i];
    bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '.' || c == '-';
    if (!ok) return false;
  }
  return true;
}

std::string_view url_scheme(std::string_view url) {
  auto sep = url.find("://");
  if (sep == std::string_view::npos) return {};
  return url.substr(0, sep);
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

std::optional<std::uint32_t> parse_as_number(std::string_view token) {
  std::string_view digits = token;
  if (digits.size() > 2 && iequals(digits.substr(0, 2), "as")) {
    digits = digits.substr(2);
  }
  if (digits.empty() || digits.size() > 10) return std::nullopt;
  std::uint64_t value = 0;
  for (char c : digits) {
    if (c < '0' || c > '9') return std::nullopt;
    value = value * 10 + static_cast<std::uint64_t>(c - '0');
    if (value > 0xffffffffull) return std::nullopt;
  }
  return static_cast<std::uint32_t>(value);
}

// Accepts "start - end" or a single CIDR prefix.
Result<net::IpRange> parse_range_text(const std::string& text) {
  auto dash = text.find('-');
  if (dash != std::string::npos) {
    auto start = net::IpAddress::parse(trim(text.substr(0, dash)));
    auto end = net::IpAddress::parse(trim(text.substr(dash + 1)));
    if (!start || !end) {
      return Error{Errc::RangeParse, "unparseable range: " + text};
    }
    auto range = net::IpRange::make(*start, *end);
    if (!range) {
      return Error{Errc::RangeParse, "range start exceeds end or family mismatch: " + text};
    }
    return *range;
  }
  auto prefix = net::Prefix::parse(trim(text));
  if (!prefix.ok()) {
    return Error{Errc::RangeParse, "unparseable range: " + text};
  }
  return net::IpRange::from_prefix(prefix.value());
}

struct Block {
  std::vector<RpslAttribute> attributes;
};

std::vector<Block> split_blocks(std::string_view text) {
  std::vector<Block> blocks;
  Block current;
  std::size_t pos = 0;
  auto flush = [&] {
    if (!current.attributes.empty()) {
      blocks.push_back(std::move(current));
      current = Block{};
    }
  };
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line = eol == std::string_view::npos ? text.substr(pos)
                                                          : text.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) {
      flush();
    } else if (line[0] == '#' || line[0] == '%') {
      // dump-level comment
    } else if (line[0] == ' ' || line[0] == '\t' || line[0] == '+') {
      if (!current.attributes.empty()) {
        current.attributes.back().value += "\n";
        current.attributes.back().value += line;
      }
    } else {
      auto colon = line.find(':');
      if (colon == std::string_view::npos) {
        // not attribute-shaped; keep as a continuation so nothing is lost
        if (!current.attributes.empty()) {
          current.attributes.back().value += "\n";
          current.attributes.back().value += line;
        }
      } else {
        RpslAttribute attr;
        attr.raw_key = std::string(line.substr(0, colon));
        attr.key = lowercase(attr.raw_key);
        attr.value = std::string(line.substr(colon + 1));
        current.attributes.push_back(std::move(attr));
      }
    }
    if (eol == std::string_view::npos) break;
    pos = eol + 1;
  }
  flush();
  return blocks;
}

}  // namespace

std::string RpslAttribute::logical_value() const {
  std::string folded;
  std::size_t start = 0;
  bool continuation = false;
  while (start <= value.size()) {
    auto nl = value.find('\n', start);
    std::string_view segment(value);
    segment = segment.substr(start, nl == std::string::npos ? std::string::npos
                                                            : nl - start);
    if (continuation && !segment.empty() && segment.front() == '+') {
      segment.remove_prefix(1);
    }
    continuation = true;
    std::string piece = trim(segment);
    if (!piece.empty()) {
      if (!folded.empty()) folded += ' ';
      folded += piece;
    }
    if (nl == std::string::npos) break;
    start = nl + 1;
  }
  return folded;
}

std::string RpslRecord::render() const {
  std::string out;
  for (const auto& attr : attributes) {
    out += attr.raw_key;
    out += ":";
    out += attr.value;
    out += "\n";
  }
  return out;
}

Result<RpslParseResult> parse_rpsl_stream(std::string_view text, Rir source_rir) {
  RpslParseResult result;
  std::size_t record_index = 0;
  for (auto& block : split_blocks(text)) {
    auto oc = object_class_from_name(block.attributes.front().key);
    if (!oc) continue;  // other object classes are not ours
    std::size_t index = record_index++;
    std::string range_text = block.attributes.front().logical_value();
    auto range = parse_range_text(range_text);
    if (!range.ok()) {
      result.errors.push_back({index, range_text, range.error().message});
      continue;
    }
    net::Family expected =
        *oc == ObjectClass::Inet6num ? net::Family::V6 : net::Family::V4;
    if (range.value().start.family() != expected) {
      result.errors.push_back(
          {index, range_text, "address family does not match object class"});
      continue;
    }
    RpslRecord record;
    record.object_class = *oc;
    record.range = range.value();
    record.attributes = std::move(block.attributes);
    record.source_rir = source_rir;
    for (const auto& attr : record.attributes) {
      if (attr.key == "origin" || attr.key == "originas") {
        auto tokens = tokenize(attr.logical_value());
        if (!tokens.empty()) {
          // ARIN lists several comma-separated AS numbers; take the first.
          std::string first(tokens.front());
          if (!first.empty() && first.back() == ',') first.pop_back();
          if (auto as = parse_as_number(first)) {
            record.origin_as = as;
            break;
          }
        }
      }
    }
    result.records.push_back(std::move(record));
  }
  if (result.records.empty() && result.errors.empty()) {
    return Error{Errc::EmptyStream, "no inetnum/inet6num/NetRange objects in stream"};
  }
  return result;
}

LocatorVerdict classify_locator(std::string_view url, LocatorSource source_attribute,
                                std::string_view surrounding_text) {
  LocatorVerdict verdict;
  auto tokens = tokenize(surrounding_text);
  // Tolerate callers passing the whole attribute line.
  if (!tokens.empty()) {
    std::string head = lowercase(tokens.front());
    if ((source_attribute == LocatorSource::Remarks && head == "remarks:") ||
        (source_attribute == LocatorSource::GeofeedAttr && head == "geofeed:")) {
      tokens.erase(tokens.begin());
    }
  }
  bool formatting_ok = false;
  if (source_attribute == LocatorSource::Remarks) {
    // remarks: Geofeed <url> -- token is case sensitive, nothing may follow.
    formatting_ok = tokens.size() == 2 && tokens[0] == "Geofeed" && tokens[1] == url &&
                    url_shaped(url);
  } else {
    formatting_ok = tokens.size() == 1 && tokens[0] == url && url_shaped(url);
  }
  verdict.invalid_formatting = !formatting_ok;
  verdict.not_https = url_scheme(url) != "https";
  return verdict;
}

std::vector<GeofeedLocator> extract_locators(const RpslRecord& record) {
  std::vector<GeofeedLocator> locators;
  bool saw_remarks = false;
  bool saw_attr = false;
  for (const auto& attr : record.attributes) {
    bool remarks_kind = attr.key == "remarks" || attr.key == "comment";
    bool geofeed_kind = attr.key == "geofeed";
    if (!remarks_kind && !geofeed_kind) continue;
    std::string value = attr.logical_value();
    auto tokens = tokenize(value);
    std::string url;
    if (remarks_kind) {
      std::size_t mention = tokens.size();
      for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (iequals(tokens[i], "geofeed")) {
          mention = i;
          break;
        }
      }
      if (mention == tokens.size()) continue;
      for (std::size_t i = mention + 1; i < tokens.size(); ++i) {
        if (url_shaped(tokens[i])) {
          url = std::string(tokens[i]);
          break;
        }
      }
      if (url.empty()) {
        for (const auto& t : tokens) {
          if (url_shaped(t)) {
            url = std::string(t);
            break;
          }
        }
      }
      if (url.empty()) continue;
      saw_remarks = true;
    } else {
      for (const auto& t : tokens) {
        if (url_shaped(t)) {
          url = std::string(t);
          break;
        }
      }
      if (url.empty()) continue;
      saw_attr = true;
    }
    GeofeedLocator locator;
    locator.url = url;
    locator.source_attribute = remarks_kind ? LocatorSource::Remarks : LocatorSource::GeofeedAttr;
    locator.verdict = classify_locator(locator.url, locator.source_attribute, value);
    locators.push_back(std::move(locator));
  }
  if (saw_remarks && saw_attr) {
    for (auto& l : locators) l.dual_source_conflict = true;
  }
  return locators;
}

std::string LocatorIndexEntry::record_key() const {
  std::string key(rir_name(rir));
  key += "|";
  key += object_class_name(object_class);
  key += "|";
  key += range_start;
  key += "|";
  key += range_end;
  return key;
}

std::vector<std::string> LocatorVerdict::names() const {
  std::vector<std::string> out;
  if (valid()) {
    out.push_back("valid");
  } else {
    if (invalid_formatting) out.push_back("invalid_formatting");
    if (not_https) out.push_back("not_https");
  }
  return out;
}

std::string LocatorIndexEntry::to_json() const {
  nlohmann::json j{
      {"rir", std::string(rir_name(rir))},
      {"object_class", std::string(object_class_name(object_class))},
      {"range_start", range_start},
      {"range_end", range_end},
      {"url", url},
      {"source_attribute", std::string(locator_source_name(source_attribute))},
      {"verdict", verdict.names()},
  };
  if (origin_as) j["origin_as"] = *origin_as;
  if (dual_source_conflict) j["dual_source"] = true;
  return j.dump();
}

Result<LocatorIndexEntry> LocatorIndexEntry::from_json(std::string_view text) {
  auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    return Error{Errc::ParseError, "bad locator index line"};
  }
  try {
    LocatorIndexEntry e;
    auto rir = rir_from_name(j.at("rir").get<std::string>());
    auto oc = object_class_from_name(j.at("object_class").get<std::string>());
    if (!rir || !oc) {
      return Error{Errc::ParseError, "bad rir or object_class in locator index line"};
    }
    e.rir = *rir;
    e.object_class = *oc;
    e.range_start = j.at("range_start").get<std::string>();
    e.range_end = j.at("range_end").get<std::string>();
    e.url = j.at("url").get<std::string>();
    std::string src = j.at("source_attribute").get<std::string>();
    e.source_attribute =
        src == "geofeed" ? LocatorSource::GeofeedAttr : LocatorSource::Remarks;
    for (const auto& v : j.at("verdict")) {
      std::string name = v.get<std::string>();
      if (name == "invalid_formatting") e.verdict.invalid_formatting = true;
      if (name == "not_https") e.verdict.not_https = true;
    }
    if (j.contains("origin_as")) e.origin_as = j["origin_as"].get<std::uint32_t>();
    e.dual_source_conflict = j.value("dual_source", false);
    return e;
  } catch (const nlohmann::json::exception& ex) {
    return Error{Errc::ParseError, std::string("bad locator index line: ") + ex.what()};
  }
}

LocatorIndexEntry make_index_entry(const RpslRecord& record, const GeofeedLocator& locator) {
  LocatorIndexEntry e;
  e.rir = record.source_rir;
  e.object_class = record.object_class;
  e.range_start = record.range.start.to_string();
  e.range_end = record.range.end.to_string();
  e.url = locator.url;
  e.source_attribute = locator.source_attribute;
  e.verdict = locator.verdict;
  e.origin_as = record.origin_as;
  e.dual_source_conflict = locator.dual_source_conflict;
  return e;
}

Result<DiscoveryResult> discover(std::string_view text, Rir source_rir) {
  auto parsed = parse_rpsl_stream(text, source_rir);
  if (!parsed.ok()) return parsed.error();
  DiscoveryResult out;
  out.parse = std::move(parsed).take();
  for (std::size_t i = 0; i < out.parse.records.size(); ++i) {
    for (auto& locator : extract_locators(out.parse.records[i])) {
      locator.record_index = i;
      out.entries.push_back(make_index_entry(out.parse.records[i], locator));
    }
  }
  return out;
}

Result<std::vector<LocatorIndexEntry>> load_locator_index(std::istream& in) {
  std::vector<LocatorIndexEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto entry = LocatorIndexEntry::from_json(line);
    if (!entry.ok()) {
      return Error{Errc::ParseError,
                   "locator index line " + std::to_string(line_no) + ": " +
                       entry.error().message};
    }
    entries.push_back(std::move(entry).take());
  }
  return entries;
}

}  // namespace gfk::rpsl
