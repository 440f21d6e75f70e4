#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "deltanls/analytic.hpp"
#include "deltanls/core.hpp"
#include "deltanls/errors.hpp"

namespace deltanls {

// Discrete norms. Integrals use the uniform weight h at every node, so that a
// permutation of the values leaves them unchanged; the derivative is a sum
// over cells, which keeps the kink at the origin node intact.
namespace discrete {

inline double inner(const GridFunction& v, const GridFunction& w) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * w[i];
    return v.grid().spacing() * s;
}

inline double mass(const GridFunction& u) { return inner(u, u); }

inline double norm(const GridFunction& u) { return std::sqrt(mass(u)); }

/// ||u'||_2^2 as a sum of squared cell slopes.
inline double kinetic(const GridFunction& u) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < u.size(); ++i) {
        const double d = u[i + 1] - u[i];
        s += d * d;
    }
    return s / u.grid().spacing();
}

/// ||u||_p^p; p may be infinite, in which case this is max |u|^2.
inline double power_sum(const GridFunction& u, double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : u.values()) m = std::max(m, std::abs(v));
        return m * m;
    }
    double s = 0.0;
    for (double v : u.values()) s += std::pow(std::abs(v), p);
    return u.grid().spacing() * s;
}

/// h-weighted L2 distance.
inline double distance(const GridFunction& v, const GridFunction& w) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += (v[i] - w[i]) * (v[i] - w[i]);
    return std::sqrt(v.grid().spacing() * s);
}

/// u scaled to discrete mass mu.
inline GridFunction with_mass(GridFunction u, double mu) {
    const double m = mass(u);
    if (!(m > 0.0)) throw NumericalError("cannot rescale a zero function to positive mass");
    const double factor = std::sqrt(mu / m);
    for (double& v : u.values()) v *= factor;
    return u;
}

}  // namespace discrete

namespace detail {

inline void require_finite(const GridFunction& u) {
    const auto values = u.values();
    for (std::size_t i = 0; i < values.size(); ++i)
        if (!std::isfinite(values[i]))
            throw NumericalError("non-finite value at node " + std::to_string(i), static_cast<std::ptrdiff_t>(i));
}

inline double signed_power(double v, double exponent) { return std::pow(std::abs(v), exponent) * (v < 0 ? -1.0 : 1.0); }

}  // namespace detail

/// (1/2)||u'||^2 - (1/p)||u||_p^p - (1/q)|u(0)|^q on the grid.
inline double energy(const GridFunction& u, const EnergyParams& params) {
    detail::require_finite(u);
    double e = 0.5 * discrete::kinetic(u);
    if (params.has_standard()) e -= discrete::power_sum(u, params.p()) / params.p();
    if (params.has_point()) e -= std::pow(std::abs(u.at_origin()), params.q()) / params.q();
    if (!std::isfinite(e)) throw NumericalError("energy is not finite");
    return e;
}

/// Gradient of energy() in the inner product h * sum(v w).
inline GridFunction gradient(const GridFunction& u, const EnergyParams& params) {
    detail::require_finite(u);
    const std::size_t n = u.size();
    const double h = u.grid().spacing();
    const double inv_h2 = 1.0 / (h * h);
    GridFunction g(u.grid());
    for (std::size_t i = 0; i < n; ++i) {
        const double left = i > 0 ? u[i - 1] - u[i] : 0.0;
        const double right = i + 1 < n ? u[i + 1] - u[i] : 0.0;
        g[i] = -(left + right) * inv_h2;
    }
    if (params.has_standard()) {
        const double p = params.p();
        for (std::size_t i = 0; i < n; ++i) g[i] -= detail::signed_power(u[i], p - 1.0);
    }
    if (params.has_point()) g[u.grid().center()] -= detail::signed_power(u.at_origin(), params.q() - 1.0) / h;
    for (std::size_t i = 0; i < n; ++i)
        if (!std::isfinite(g[i])) throw NumericalError("gradient is not finite", static_cast<std::ptrdiff_t>(i));
    return g;
}

/// Symmetric decreasing rearrangement: sorted |u| placed at the origin node,
/// then alternately right and left.
inline GridFunction rearrange(const GridFunction& u) {
    std::vector<double> sorted(u.size());
    std::transform(u.values().begin(), u.values().end(), sorted.begin(), [](double v) { return std::abs(v); });
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    GridFunction out(u.grid());
    const std::size_t c = u.grid().center();
    out[c] = sorted[0];
    for (std::size_t k = 1; k <= c; ++k) {
        out[c + k] = sorted[2 * k - 1];
        out[c - k] = sorted[2 * k];
    }
    return out;
}

struct ElResidual {
    double interior = 0.0;
    double jump = 0.0;
};

/// Residuals of u'' + |u|^{p-2}u = w u away from 0 and of the jump condition.
inline ElResidual el_residual(const GridFunction& u, const EnergyParams& params, double omega) {
    const std::size_t n = u.size();
    const std::size_t c = u.grid().center();
    const double h = u.grid().spacing();
    ElResidual r;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (i + 1 >= c && i <= c + 1) continue;
        double v = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (h * h) - omega * u[i];
        if (params.has_standard()) v += detail::signed_power(u[i], params.p() - 1.0);
        r.interior = std::max(r.interior, std::abs(v));
    }
    if (c >= 2) {
        const double right = (-3.0 * u[c] + 4.0 * u[c + 1] - u[c + 2]) / (2.0 * h);
        const double left = (3.0 * u[c] - 4.0 * u[c - 1] + u[c - 2]) / (2.0 * h);
        double jump = left - right;
        if (params.has_point()) jump -= detail::signed_power(u[c], params.q() - 1.0);
        r.jump = std::abs(jump);
    }
    return r;
}

enum class StepRule { Fixed, Backtracking };
enum class InitialGuess { AnalyticExponential, CallerSupplied };

struct MinimizerOptions {
    std::optional<Grid> grid;  ///< defaults to the rule in default_grid()
    int max_iterations = 20000;
    double gradient_tolerance = 1e-8;
    StepRule step_rule = StepRule::Backtracking;
    /// Step length in units of the preconditioned gradient; the fixed rule uses it as is.
    double step = 1.0;
    int rearrange_every = 10;
    bool rearrangement = true;
    InitialGuess initial_guess = InitialGuess::AnalyticExponential;
    std::optional<GridFunction> initial_profile;

    void validate() const {
        if (max_iterations < 0) throw ParameterError("max_iterations must be non-negative");
        if (!(gradient_tolerance > 0.0)) throw ParameterError("gradient_tolerance must be positive");
        if (!(step > 0.0) || !std::isfinite(step)) throw ParameterError("step must be positive");
        if (rearrange_every < 1) throw ParameterError("rearrange_every must be at least 1");
        if (initial_guess == InitialGuess::CallerSupplied && !initial_profile)
            throw ParameterError("caller-supplied initial guess needs initial_profile");
    }
};

struct MinimizerResult {
    GridFunction profile;
    double energy = 0.0;
    double multiplier_estimate = 0.0;
    int iterations = 0;
    /// h-weighted norm of gradient + w u, the discrete Euler-Lagrange residual.
    double el_residual = 0.0;
    ElResidual pointwise_residual;  ///< el_residual() at the final multiplier
    bool converged = false;
    std::vector<double> energy_history;  ///< energy after each accepted step
};

/// Multiplier w with gradient + w u orthogonal to u.
inline double multiplier(const GridFunction& u, const GridFunction& g) { return -discrete::inner(g, u) / discrete::mass(u); }

/// Rough frequency at mass mu: the largest frequency among the subcritical
/// single-term problems at that mass.
inline double initial_frequency(const EnergyParams& params, double mu) {
    double omega = 0.0;
    auto consider = [&](const EnergyParams& single) {
        const auto regime = classify_regime(single, MassConstraint{mu});
        if (regime.verdict != Verdict::UniqueGroundState) return;
        try {
            omega = std::max(omega, omega_of_mass(single, mu));
        } catch (const ParameterError&) {
        } catch (const RegimeError&) {
        }
    };
    if (params.has_point()) consider(EnergyParams::pointwise(params.q()));
    if (params.has_standard()) consider(EnergyParams::standard(params.p()));
    if (!(omega > 0.0)) omega = 1.0;
    return std::clamp(omega, kOmegaMin, kOmegaMax);
}

/// Half width max(40, 25/sqrt(w0)) with 8001 nodes.
inline Grid default_grid(const EnergyParams& params, double mu) {
    const double omega = initial_frequency(params, mu);
    return Grid(std::max(40.0, 25.0 / std::sqrt(omega)), 8001);
}

namespace detail {

// LU factors of (alpha I - L) with L the Neumann second difference.
class ShiftedLaplacian {
public:
    ShiftedLaplacian(const Grid& grid, double alpha) : n_(grid.count()), upper_(n_), pivot_(n_) {
        const double inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
        off_ = -inv_h2;
        for (std::size_t i = 0; i < n_; ++i) {
            const double diag = alpha + (i == 0 || i + 1 == n_ ? 1.0 : 2.0) * inv_h2;
            pivot_[i] = i == 0 ? diag : diag - off_ * upper_[i - 1];
            upper_[i] = off_ / pivot_[i];
        }
    }

    GridFunction solve(const GridFunction& rhs) const {
        GridFunction x(rhs.grid());
        x[0] = rhs[0] / pivot_[0];
        for (std::size_t i = 1; i < n_; ++i) x[i] = (rhs[i] - off_ * x[i - 1]) / pivot_[i];
        for (std::size_t i = n_ - 1; i-- > 0;) x[i] -= upper_[i] * x[i + 1];
        return x;
    }

private:
    std::size_t n_;
    double off_ = 0.0;
    std::vector<double> upper_;
    std::vector<double> pivot_;
};

inline GridFunction initial_profile(const EnergyParams& params, double mu, const Grid& grid) {
    const double omega = initial_frequency(params, mu);
    GridFunction u = params.has_point() ? sample(RadialProfile(RadialProfile::Exponential{1.0, std::sqrt(omega)}), grid)
                                        : sample(soliton(params.p(), omega), grid);
    return discrete::with_mass(std::move(u), mu);
}

}  // namespace detail

namespace detail {

// Rounding level of energy(): a few ulps of the largest term.
inline double energy_noise(const GridFunction& u, const EnergyParams& params) {
    double scale = 0.5 * discrete::kinetic(u);
    if (params.has_standard()) scale += discrete::power_sum(u, params.p()) / params.p();
    if (params.has_point()) scale += std::pow(std::abs(u.at_origin()), params.q()) / params.q();
    return 64.0 * std::numeric_limits<double>::epsilon() * scale;
}

// Linear interpolation onto another grid, continued by exp(-sqrt(w)|x|) past
// the old ends.
inline GridFunction resample(const GridFunction& u, const Grid& grid, double omega) {
    const Grid& old = u.grid();
    const double h = old.spacing();
    const double decay = std::sqrt(std::max(omega, 0.0));
    return sample(
        [&](double x) {
            const double s = x / h + static_cast<double>(old.center());
            if (s <= 0.0) return u[0] * std::exp(decay * s * h);
            const double last = static_cast<double>(old.count() - 1);
            if (s >= last) return u[old.count() - 1] * std::exp(-decay * (s - last) * h);
            const auto i = static_cast<std::size_t>(s);
            const double f = s - static_cast<double>(i);
            return i + 1 < old.count() ? (1.0 - f) * u[i] + f * u[i + 1] : u[i];
        },
        grid);
}

// Descent from u on u's grid.
inline MinimizerResult descend(const EnergyParams& params, double mu, GridFunction u, const MinimizerOptions& opts,
                               double shift) {
    const Grid grid = u.grid();
    u = discrete::with_mass(std::move(u), mu);
    double e = energy(u, params);
    GridFunction g = gradient(u, params);
    double omega = multiplier(u, g);
    const ShiftedLaplacian precond(grid, shift);

    MinimizerResult result{u, e, omega, 0, 0.0, {}, false, {e}};
    double tau = opts.step;
    constexpr double armijo = 1e-4;

    auto residual_of = [&](const GridFunction& uu, const GridFunction& gg, double w) {
        GridFunction r(grid);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = gg[i] + w * uu[i];
        return r;
    };

    int it = 0;
    for (;; ++it) {
        const GridFunction r = residual_of(u, g, omega);
        const double res = discrete::norm(r);
        result.el_residual = res;
        if (res <= opts.gradient_tolerance) {
            result.converged = true;
            break;
        }
        if (it >= opts.max_iterations) break;

        // Tangent Sobolev direction: z = P r - c P u with <z, u> = 0.
        GridFunction z = precond.solve(r);
        const GridFunction pu = precond.solve(u);
        const double c = discrete::inner(z, u) / discrete::inner(pu, u);
        for (std::size_t i = 0; i < z.size(); ++i) z[i] -= c * pu[i];
        const double slope = -discrete::inner(r, z);
        const double noise = energy_noise(u, params);

        // Armijo on the energy. Once the predicted decrease is below rounding,
        // a step that lowers the residual is taken as long as the energy stays
        // within rounding of its current value.
        bool accepted = false;
        GridFunction trial(grid);
        GridFunction g_trial(grid);
        double e_trial = e;
        while (tau >= 1e-12 * opts.step) {
            for (std::size_t i = 0; i < trial.size(); ++i) trial[i] = u[i] - tau * z[i];
            trial = discrete::with_mass(std::move(trial), mu);
            e_trial = energy(trial, params);
            if (opts.step_rule == StepRule::Fixed || e_trial < e + armijo * tau * slope) {
                g_trial = gradient(trial, params);
                accepted = true;
                break;
            }
            if (-tau * slope < noise && e_trial <= e + noise) {
                g_trial = gradient(trial, params);
                if (discrete::norm(residual_of(trial, g_trial, multiplier(trial, g_trial))) < res) {
                    accepted = true;
                    break;
                }
            }
            tau *= 0.5;
        }
        if (!accepted) break;
        if (opts.step_rule == StepRule::Backtracking) tau = std::min(tau * 1.5, 16.0 * opts.step);

        u = std::move(trial);
        e = e_trial;
        g = std::move(g_trial);
        if (opts.rearrangement && (it + 1) % opts.rearrange_every == 0) {
            GridFunction sym = discrete::with_mass(rearrange(u), mu);
            const double e_sym = energy(sym, params);
            if (e_sym <= e) {
                u = std::move(sym);
                e = e_sym;
                g = gradient(u, params);
            }
        }
        result.energy_history.push_back(e);
        omega = multiplier(u, g);
    }

    result.profile = u;
    result.energy = e;
    result.multiplier_estimate = omega;
    result.iterations = it;
    result.pointwise_residual = el_residual(u, params, omega);
    return result;
}

}  // namespace detail

/// Mass-constrained minimization of the discrete energy.
///
/// Each iteration steps along the Sobolev gradient (alpha - L)^{-1} r of the
/// Lagrangian residual r = g + w u, made tangent to the mass sphere, and then
/// rescales to mass mu. Backtracking enforces the Armijo condition.
///
/// Without an explicit grid the run has two stages: a first solve on
/// default_grid(), then a second one on a grid sized by the multiplier the
/// first solve found, started from the first profile.
inline MinimizerResult minimize(const EnergyParams& params, const MassConstraint& mass,
                                const MinimizerOptions& opts = {}) {
    const double mu = mass.value();
    const RegimeClassification regime = classify_regime(params, mass);
    if (regime.verdict != Verdict::UniqueGroundState)
        throw RegimeError("minimization needs a unique ground state for " + params.label(), regime);
    opts.validate();

    const double omega0 = initial_frequency(params, mu);
    if (opts.initial_guess == InitialGuess::CallerSupplied)
        return detail::descend(params, mu, *opts.initial_profile, opts, omega0);
    if (opts.grid) return detail::descend(params, mu, detail::initial_profile(params, mu, *opts.grid), opts, omega0);

    const Grid first_grid = default_grid(params, mu);
    MinimizerOptions first = opts;
    first.gradient_tolerance = std::max(opts.gradient_tolerance, 1e-6);
    MinimizerResult coarse = detail::descend(params, mu, detail::initial_profile(params, mu, first_grid), first, omega0);
    const double omega1 = coarse.multiplier_estimate;
    if (!(omega1 > 0.0)) return coarse;
    const Grid grid(std::max(40.0, 25.0 / std::sqrt(omega1)), first_grid.count());
    MinimizerResult fine = detail::descend(params, mu, detail::resample(coarse.profile, grid, omega1), opts, omega1);
    fine.iterations += coarse.iterations;
    return fine;
}

}  // namespace deltanls
