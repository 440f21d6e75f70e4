#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

#include "deltanls/errors.hpp"

namespace deltanls::quadrature {

template <std::size_t N>
struct GaussLegendreRule {
    std::array<double, N> nodes{};
    std::array<double, N> weights{};
};

/// N-point Gauss-Legendre rule on [-1, 1]; nodes from Newton iteration on P_N.
template <std::size_t N>
const GaussLegendreRule<N>& gauss_legendre() {
    static const GaussLegendreRule<N> rule = [] {
        GaussLegendreRule<N> r;
        constexpr double n = static_cast<double>(N);
        for (std::size_t i = 0; i < (N + 1) / 2; ++i) {
            double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (std::size_t k = 2; k <= N; ++k) {
                    const double kk = static_cast<double>(k);
                    const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-17) break;
            }
            const double w = 2.0 / ((1.0 - x * x) * dp * dp);
            r.nodes[i] = -x;
            r.nodes[N - 1 - i] = x;
            r.weights[i] = w;
            r.weights[N - 1 - i] = w;
        }
        return r;
    }();
    return rule;
}

template <class F>
double gauss_legendre_panel(const F& f, double a, double b) {
    const auto& rule = gauss_legendre<20>();
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return sum * half;
}

struct Tolerance {
    double absolute = 1e-13;
    double relative = 1e-14;
    int max_depth = 60;
    /// Splits allowed in total; past this every panel is accepted as is.
    long max_splits = 1L << 18;
};

/// Composite Gauss-Legendre with panel bisection until each panel agrees with
/// its two halves. Panels are refined independently, so endpoint cusps only
/// refine locally.
template <class F>
double integrate(const F& f, double a, double b, Tolerance tol = {}) {
    if (a == b) return 0.0;
    if (b < a) return -integrate(f, b, a, tol);

    struct Panel {
        double a, b, estimate;
        int depth;
    };
    const double whole = gauss_legendre_panel(f, a, b);
    if (!std::isfinite(whole)) throw NumericalError("quadrature produced a non-finite value");
    // One-panel magnitude, only used to scale the relative criterion.
    const double scale = std::abs(whole);
    std::vector<Panel> stack{{a, b, whole, 0}};
    double total = 0.0;
    const double width = b - a;
    long splits = 0;
    while (!stack.empty()) {
        const Panel p = stack.back();
        stack.pop_back();
        const double m = 0.5 * (p.a + p.b);
        const double left = gauss_legendre_panel(f, p.a, m);
        const double right = gauss_legendre_panel(f, m, p.b);
        const double refined = left + right;
        if (!std::isfinite(refined)) throw NumericalError("quadrature produced a non-finite value");
        const double share = (p.b - p.a) / width;
        // Below the rounding level of the panel itself further halving cannot help.
        const double allowed = std::max(std::max(tol.absolute, tol.relative * scale) * share,
                                        64.0 * std::numeric_limits<double>::epsilon() * std::abs(refined));
        if (std::abs(refined - p.estimate) <= allowed || p.depth >= tol.max_depth || splits >= tol.max_splits) {
            total += refined;
        } else {
            ++splits;
            stack.push_back({p.a, m, left, p.depth + 1});
            stack.push_back({m, p.b, right, p.depth + 1});
        }
    }
    return total;
}

}  // namespace deltanls::quadrature
