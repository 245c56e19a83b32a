// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The geofeedkit Authors

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace gfk {

using Sha256Digest = std::array<std::uint8_t, 32>;

Sha256Digest sha256(std::span<const std::uint8_t> data);
Sha256Digest sha256(std::string_view data);

std::string to_hex(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> from_hex(std::string_view hex);

std::string to_base64(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> from_base64(std::string_view text);

}  // namespace gfk
