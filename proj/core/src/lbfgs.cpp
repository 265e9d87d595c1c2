// Copyright 2026 The LumenForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "lumen/lbfgs.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>

namespace lumen {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(const std::vector<double>& v) { return std::sqrt(dot(v, v)); }

bool all_finite(double f, const std::vector<double>& g) {
    if (!std::isfinite(f)) return false;
    for (double v : g)
        if (!std::isfinite(v)) return false;
    return true;
}

struct Probe {
    double alpha = 0.0;
    double value = 0.0;
    double slope = 0.0;
    bool finite = false;
};

struct LineSearchResult {
    bool found_decrease = false;
    bool wolfe = false;
    Probe best;
    std::vector<double> x, grad;
};

}  // namespace

LbfgsResult lbfgs_minimize(const Objective& objective, std::vector<double> x0,
                           const LbfgsOptions& options) {
    const std::size_t n = x0.size();
    std::vector<double> x = std::move(x0);
    std::vector<double> grad(n, 0.0);

    double fx = objective(x, grad);
    if (!all_finite(fx, grad))
        throw std::runtime_error("lbfgs_minimize: non-finite objective at start point");

    LbfgsResult result;
    result.trace.push_back({0, fx, norm(grad)});

    struct Pair {
        std::vector<double> s, y;
        double rho;
    };
    std::deque<Pair> memory;

    std::vector<double> direction(n), x_trial(n), grad_trial(n);

    for (int iter = 1; iter <= options.max_iterations; ++iter) {
        const double gnorm = norm(grad);
        if (gnorm < options.gradient_tolerance) break;

        // Two-loop recursion for d = -H * g.
        direction = grad;
        std::vector<double> alpha_mem(memory.size());
        for (std::size_t i = memory.size(); i-- > 0;) {
            alpha_mem[i] = memory[i].rho * dot(memory[i].s, direction);
            for (std::size_t j = 0; j < n; ++j) direction[j] -= alpha_mem[i] * memory[i].y[j];
        }
        if (!memory.empty()) {
            const Pair& last = memory.back();
            const double gamma = dot(last.s, last.y) / dot(last.y, last.y);
            for (double& v : direction) v *= gamma;
        }
        for (std::size_t i = 0; i < memory.size(); ++i) {
            const double beta = memory[i].rho * dot(memory[i].y, direction);
            for (std::size_t j = 0; j < n; ++j)
                direction[j] += (alpha_mem[i] - beta) * memory[i].s[j];
        }
        for (double& v : direction) v = -v;

        double slope0 = dot(grad, direction);
        if (slope0 >= 0.0) {
            // Not a descent direction; reset to steepest descent.
            memory.clear();
            for (std::size_t j = 0; j < n; ++j) direction[j] = -grad[j];
            slope0 = -gnorm * gnorm;
        }

        // Strong Wolfe line search (bracket + zoom).
        LineSearchResult ls;
        ls.x.resize(n);
        ls.grad.resize(n);
        int evals = 0;

        const auto probe = [&](double alpha) {
            Probe p;
            p.alpha = alpha;
            for (std::size_t j = 0; j < n; ++j) x_trial[j] = x[j] + alpha * direction[j];
            p.value = objective(x_trial, grad_trial);
            p.finite = all_finite(p.value, grad_trial);
            p.slope = p.finite ? dot(grad_trial, direction) : 0.0;
            ++evals;
            if (p.finite && p.value < fx && (!ls.found_decrease || p.value < ls.best.value)) {
                ls.found_decrease = true;
                ls.best = p;
                ls.x = x_trial;
                ls.grad = grad_trial;
            }
            return p;
        };

        const double c1 = options.sufficient_decrease;
        const double c2 = options.curvature;
        const auto armijo_ok = [&](const Probe& p) {
            return p.finite && p.value <= fx + c1 * p.alpha * slope0;
        };
        const auto curvature_ok = [&](const Probe& p) {
            return std::abs(p.slope) <= -c2 * slope0;
        };

        // Trial point inside (lo, hi) by cubic (then quadratic) interpolation
        // of the endpoint values/slopes, safeguarded toward bisection.
        const auto interpolate = [](const Probe& lo, const Probe& hi) {
            const double a = lo.alpha, b = hi.alpha;
            double t = 0.5 * (a + b);
            if (lo.finite && hi.finite) {
                const double d1 = lo.slope + hi.slope - 3.0 * (lo.value - hi.value) / (a - b);
                const double disc = d1 * d1 - lo.slope * hi.slope;
                if (disc >= 0.0) {
                    const double d2 = std::copysign(std::sqrt(disc), b - a);
                    const double cand =
                        b - (b - a) * (hi.slope + d2 - d1) / (hi.slope - lo.slope + 2.0 * d2);
                    if (std::isfinite(cand)) t = cand;
                }
            }
            const double width = std::abs(b - a);
            const double lo_guard = std::min(a, b) + 0.1 * width;
            const double hi_guard = std::max(a, b) - 0.1 * width;
            return std::clamp(t, lo_guard, hi_guard);
        };

        const auto zoom = [&](Probe lo, Probe hi) {
            while (evals < options.max_line_search_evals) {
                const Probe p = probe(interpolate(lo, hi));
                if (!p.finite || !armijo_ok(p) || p.value >= lo.value) {
                    hi = p;
                } else {
                    if (curvature_ok(p)) {
                        ls.wolfe = true;
                        return;
                    }
                    if (p.slope * (hi.alpha - lo.alpha) >= 0.0) hi = lo;
                    lo = p;
                }
                if (std::abs(hi.alpha - lo.alpha) < 1e-16) return;
            }
        };

        Probe prev{0.0, fx, slope0, true};
        double alpha = iter == 1 ? std::min(1.0, 1.0 / std::max(1.0, gnorm)) : 1.0;
        while (evals < options.max_line_search_evals) {
            const Probe p = probe(alpha);
            if (!p.finite) {
                // Probed past the feasible region; contract.
                alpha = 0.5 * (prev.alpha + alpha);
                continue;
            }
            if (!armijo_ok(p) || (prev.alpha > 0.0 && p.value >= prev.value)) {
                zoom(prev, p);
                break;
            }
            if (curvature_ok(p)) {
                ls.wolfe = true;
                break;
            }
            if (p.slope >= 0.0) {
                zoom(p, prev);
                break;
            }
            prev = p;
            alpha = 2.0 * alpha;
        }

        if (!ls.found_decrease) {
            result.status = LbfgsStatus::LineSearchFailed;
            break;
        }

        // Accept the best decreasing point (the Wolfe point when found).
        Pair pair;
        pair.s.resize(n);
        pair.y.resize(n);
        for (std::size_t j = 0; j < n; ++j) {
            pair.s[j] = ls.x[j] - x[j];
            pair.y[j] = ls.grad[j] - grad[j];
        }
        x = ls.x;
        grad = ls.grad;
        fx = ls.best.value;
        if (!all_finite(fx, grad))
            throw std::runtime_error("lbfgs_minimize: non-finite objective at accepted point");
        result.trace.push_back({iter, fx, norm(grad)});

        const double sy = dot(pair.s, pair.y);
        if (sy > 1e-10 * norm(pair.s) * norm(pair.y)) {
            pair.rho = 1.0 / sy;
            memory.push_back(std::move(pair));
            if (static_cast<int>(memory.size()) > options.history) memory.pop_front();
        }
    }

    if (result.status != LbfgsStatus::LineSearchFailed)
        result.status = norm(grad) < options.gradient_tolerance ? LbfgsStatus::Converged
                                                                : LbfgsStatus::MaxIterations;

    result.x = std::move(x);
    result.value = fx;
    result.gradient_norm = norm(grad);
    return result;
}

}  // namespace lumen
