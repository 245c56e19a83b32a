// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The geofeedkit Authors

#pragma once

namespace gfk::cli {

// Parses arguments and runs one subcommand.  Exit codes: 0 success, 1 domain
// failure (failed verification, strict-mode adherence violations), 2 usage or
// I/O error.
int run(int argc, char** argv);

}  // namespace gfk::cli
