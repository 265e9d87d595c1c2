// Copyright 2026 The LumenForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace lumen::cli {

/// Dispatches argv to a subcommand. Exit codes: 0 success, 1 usage error,
/// 2 computation error.
int run(int argc, char** argv);

}  // namespace lumen::cli
