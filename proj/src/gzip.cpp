// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The geofeedkit Authors

#include "geofeedkit/gzip.hpp"

#include <zlib.h>

#include <cstring>
#include <fstream>
#include <sstream>

namespace gfk {

bool looks_gzipped(std::string_view data) {
  return data.size() >= 2 && static_cast<unsigned char>(data[0]) == 0x1f &&
         static_cast<unsigned char>(data[1]) == 0x8b;
}

Result<std::string> gunzip(std::string_view data) {
  z_stream strm;
  std::memset(&strm, 0, sizeof(strm));
  // 15 window bits + 16 selects gzip framing.
  if (inflateInit2(&strm, 15 + 16) != Z_OK) {
    return Error{Errc::IoError, "inflateInit2 failed"};
  }
  std::string out;
  char buffer[1 << 16];
  strm.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
  strm.avail_in = static_cast<uInt>(data.size());
  int rc = Z_OK;
  do {
    strm.next_out = reinterpret_cast<Bytef*>(buffer);
    strm.avail_out = sizeof(buffer);
    rc = inflate(&strm, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&strm);
      return Error{Errc::IoError,
                   std::string("gzip inflate failed: ") + (strm.msg ? strm.msg : zError(rc))};
    }
    out.append(buffer, sizeof(buffer) - strm.avail_out);
    // A dump may be several gzip members concatenated back to back.
    if (rc == Z_STREAM_END && strm.avail_in > 0) {
      if (inflateReset2(&strm, 15 + 16) != Z_OK) {
        inflateEnd(&strm);
        return Error{Errc::IoError, "gzip member reset failed"};
      }
      rc = Z_OK;
    }
  } while (rc != Z_STREAM_END && (strm.avail_in > 0 || strm.avail_out == 0));
  inflateEnd(&strm);
  if (rc != Z_STREAM_END) {
    return Error{Errc::IoError, "gzip stream truncated"};
  }
  return out;
}

Result<std::string> maybe_gunzip(std::string_view data) {
  if (looks_gzipped(data)) return gunzip(data);
  return std::string(data);
}

Result<std::string> read_file_maybe_gzipped(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return Error{Errc::IoError, "cannot open " + path};
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) {
    return Error{Errc::IoError, "read failed for " + path};
  }
  return maybe_gunzip(buf.str());
}

}  // namespace gfk
