// Copyright 2026 The LumenForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <span>
#include <vector>

namespace lumen {

struct LbfgsOptions {
    int history = 10;
    int max_iterations = 400;
    double gradient_tolerance = 1e-6;
    // Strong Wolfe constants.
    double sufficient_decrease = 1e-4;  // c1
    double curvature = 0.9;             // c2
    int max_line_search_evals = 40;
};

struct LbfgsTraceEntry {
    int iteration = 0;
    double value = 0.0;
    double gradient_norm = 0.0;
};

enum class LbfgsStatus { Converged, MaxIterations, LineSearchFailed };

struct LbfgsResult {
    std::vector<double> x;
    double value = 0.0;
    double gradient_norm = 0.0;
    LbfgsStatus status = LbfgsStatus::Converged;
    std::vector<LbfgsTraceEntry> trace;  // entry 0 is the start point
};

/// Evaluates the objective at x and writes the gradient in place.
using Objective = std::function<double(std::span<const double>, std::span<double>)>;

/// Limited-memory BFGS with two-loop recursion and a strong Wolfe line
/// search (bracket + zoom). The trace over accepted steps is
/// non-increasing. Throws std::runtime_error when the objective or
/// gradient is non-finite at the start or at an accepted point; a step
/// that merely probes non-finite territory is rejected by the line
/// search instead. On line-search failure the best iterate so far is
/// returned with status LineSearchFailed.
LbfgsResult lbfgs_minimize(const Objective& objective, std::vector<double> x0,
                           const LbfgsOptions& options = {});

}  // namespace lumen
