// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The geofeedkit Authors

#pragma once

#include <string>
#include <string_view>

#include "geofeedkit/result.hpp"

namespace gfk {

// True when the buffer starts with the gzip magic bytes.
bool looks_gzipped(std::string_view data);

// Inflates a gzip stream.  Pass-through helpers below call this only when the
// magic matches, so plain-text dumps do not need a separate code path.
Result<std::string> gunzip(std::string_view data);

// Returns the decompressed payload for gzipped input, the input unchanged
// otherwise.
Result<std::string> maybe_gunzip(std::string_view data);

// Reads a file and transparently decompresses it when gzipped.
Result<std::string> read_file_maybe_gzipped(const std::string& path);

}  // namespace gfk
