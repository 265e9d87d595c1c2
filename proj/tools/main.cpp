// Copyright 2026 The LumenForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

int main(int argc, char** argv) { return lumen::cli::run(argc, argv); }
