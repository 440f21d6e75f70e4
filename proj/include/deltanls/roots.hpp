#pragma once

#include <algorithm>
#include <cmath>

#include "deltanls/errors.hpp"

namespace deltanls::roots {

struct BracketOptions {
    int bisection_steps = 200;
    int newton_steps = 8;
    double width_tolerance = 1e-14;
};

/// Root of an increasing function on [lo, hi] with f(lo) < 0 < f(hi).
///
/// Bisects on `residual` (any increasing transform of the equation, e.g. its
/// logarithm) down to `width_tolerance`, then polishes with Newton steps on
/// `f`/`df` that are only kept while they stay inside the bracket and reduce
/// |f|.
template <class Residual, class F, class DF>
double bisect_then_newton(const Residual& residual, const F& f, const DF& df, double lo, double hi,
                          BracketOptions opts = {}) {
    if (!(lo < hi)) throw ParameterError("empty root bracket");
    if (!(residual(lo) < 0.0 && residual(hi) > 0.0)) throw NumericalError("root is not bracketed");

    for (int i = 0; i < opts.bisection_steps && hi - lo > opts.width_tolerance * std::max(std::abs(lo), std::abs(hi)); ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (residual(mid) < 0.0 ? lo : hi) = mid;
    }

    double x = 0.5 * (lo + hi);
    double fx = f(x);
    for (int i = 0; i < opts.newton_steps; ++i) {
        const double d = df(x);
        if (!(std::isfinite(d) && d != 0.0)) break;
        const double next = x - fx / d;
        if (!(next >= lo && next <= hi)) break;
        const double fn = f(next);
        if (!(std::abs(fn) < std::abs(fx))) break;
        x = next;
        fx = fn;
    }
    return x;
}

}  // namespace deltanls::roots
