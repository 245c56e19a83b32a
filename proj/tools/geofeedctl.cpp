// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The geofeedkit Authors

#include "geofeedkit/cli.hpp"

int main(int argc, char** argv) { return gfk::cli::run(argc, argv); }
