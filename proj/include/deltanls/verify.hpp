#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "deltanls/analytic.hpp"
#include "deltanls/core.hpp"
#include "deltanls/phase.hpp"
#include "deltanls/probes.hpp"
#include "deltanls/variational.hpp"

namespace deltanls {

namespace sampling {

/// Positive even profile: a few Gaussian bumps plus an exponential tail,
/// with random heights and widths.
inline GridFunction random_even_profile(const Grid& grid, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> height(0.1, 1.5);
    std::uniform_real_distribution<double> width(0.3, 3.0);
    std::uniform_int_distribution<int> bumps(1, 3);
    const int k = bumps(rng);
    std::vector<double> a(k), b(k);
    for (int i = 0; i < k; ++i) {
        a[i] = height(rng);
        b[i] = 1.0 / (width(rng) * width(rng));
    }
    const double c = height(rng);
    const double d = 1.0 / width(rng);
    return sample(
        [&](double x) {
            double v = c * std::exp(-d * std::abs(x));
            for (int i = 0; i < k; ++i) v += a[i] * std::exp(-b[i] * x * x);
            return v;
        },
        grid);
}

/// Like random_even_profile but with independent node noise, so neither
/// even nor smooth.
inline GridFunction random_rough_profile(const Grid& grid, std::mt19937_64& rng, bool signed_values) {
    GridFunction u = random_even_profile(grid, rng);
    std::uniform_real_distribution<double> noise(signed_values ? -1.0 : 0.5, 1.0);
    for (double& v : u.values()) v *= noise(rng);
    return u;
}

inline std::vector<double> log_spaced(double lo, double hi, int count) {
    std::vector<double> out(count);
    for (int i = 0; i < count; ++i)
        out[i] = lo * std::pow(hi / lo, count == 1 ? 0.0 : static_cast<double>(i) / (count - 1));
    return out;
}

inline std::vector<double> lin_spaced(double lo, double hi, int count) {
    std::vector<double> out(count);
    for (int i = 0; i < count; ++i) out[i] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
    return out;
}

}  // namespace sampling

namespace verify {

/// Outcome of one invariant. A check passes when measured <= tolerance, or
/// measured >= tolerance for lower bounds.
struct CheckResult {
    std::string name;
    std::string description;
    double measured = 0.0;
    double tolerance = 0.0;
    bool lower_bound = false;
    bool passed = false;

    /// Distance to the failure boundary, positive when passing.
    double slack() const { return lower_bound ? measured - tolerance : tolerance - measured; }
};

struct Check {
    std::string name;
    std::string description;
    double tolerance;
    bool lower_bound;
    std::function<double()> measure;
};

namespace detail {

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Sup of |u'' + u^{p-1} - w u| over sampled x != 0, 5-point stencil on the closed form.
inline double interior_ode_defect(const GroundStateSolution& gs) {
    const double p = gs.params.p();
    const double w = gs.omega;
    const double eta = 2e-3 / std::max(1.0, std::sqrt(w));
    double worst = 0.0;
    for (double x : sampling::lin_spaced(0.05, 6.0 / std::sqrt(w), 60)) {
        for (double s : {-1.0, 1.0}) {
            const double y = s * x;
            const auto& u = gs.profile;
            const double d2 = (-u(y + 2 * eta) + 16 * u(y + eta) - 30 * u(y) + 16 * u(y - eta) - u(y - 2 * eta)) /
                              (12 * eta * eta);
            worst = std::max(worst, std::abs(d2 + std::pow(u(y), p - 1) - w * u(y)));
        }
    }
    return worst;
}

// Lower bound standing in for "strictly positive".
inline constexpr double kTiny = std::numeric_limits<double>::min();

inline std::vector<double> sample_p() { return {2.5, 3.0, 4.0, 5.0, 6.0}; }
inline std::vector<double> sample_q() { return {2.5, 3.0, 3.5, 4.0}; }

}  // namespace detail

/// The invariant checks, in report order.
inline std::vector<Check> registry() {
    using detail::kTiny;
    using detail::rel;
    std::vector<Check> c;

    c.push_back({"mu-star", "critical_mass(6,4) and mass_of_omega(6,4,w) equal sqrt(3)(pi/2 - asin sqrt(3/7))", 1e-10,
                 false, [] {
                     const double closed = std::sqrt(3.0) * (kPi / 2.0 - std::asin(std::sqrt(3.0 / 7.0)));
                     double worst = std::abs(*critical_mass(EnergyParams::doubly(6, 4)) - closed);
                     for (double w : {0.5, 1.0, 2.0}) worst = std::max(worst, std::abs(mass_of_omega(6, 4, w) - closed));
                     return worst;
                 }});

    c.push_back({"matching", "|f(t_bar) - rhs| / max(1, rhs) over sampled (p, q, w)", 1e-12, false, [] {
                     double worst = 0.0;
                     for (double p : detail::sample_p())
                         for (double q : detail::sample_q())
                             for (double w : sampling::log_spaced(1e-3, 1e3, 7)) {
                                 const auto m = solve_matching(p, q, w);
                                 worst = std::max(worst, std::abs(m.residual(q)) / std::max(1.0, m.rhs));
                             }
                     return worst;
                 }});

    c.push_back({"matching-doubly-critical", "t_bar(6,4,w) = sqrt(3/7) over 10 log-spaced w", 1e-12, false, [] {
                     double worst = 0.0;
                     for (double w : sampling::log_spaced(1e-3, 1e3, 10))
                         worst = std::max(worst, std::abs(solve_matching(6, 4, w).t_bar - std::sqrt(3.0 / 7.0)));
                     return worst;
                 }});

    c.push_back({"jump", "relative defect of u'(0-) - u'(0+) = u(0)^{q-1}", 1e-10, false, [] {
                     double worst = 0.0;
                     for (double p : detail::sample_p())
                         for (double q : detail::sample_q())
                             for (double w : sampling::log_spaced(1e-2, 1e2, 5)) {
                                 const auto gs = ground_state(p, q, w);
                                 const double target = std::pow(gs.norms.origin, q - 1.0);
                                 const double jump = gs.profile.left_derivative_at_origin() -
                                                     gs.profile.right_derivative_at_origin();
                                 worst = std::max(worst, rel(jump, target));
                             }
                     return worst;
                 }});

    c.push_back({"interior-ode", "sup |u'' + u^{p-1} - w u| away from 0 (5-point differences)", 1e-6, false, [] {
                     double worst = 0.0;
                     for (double p : detail::sample_p())
                         for (double q : detail::sample_q())
                             for (double w : {0.3, 1.0, 3.0})
                                 worst = std::max(worst, detail::interior_ode_defect(ground_state(p, q, w)));
                     return worst;
                 }});

    c.push_back({"monotone-mass", "min dmu/dw over sampled (p, q, w) != (6, 4)", kTiny, true, [] {
                     double worst = std::numeric_limits<double>::infinity();
                     for (double p : detail::sample_p())
                         for (double q : detail::sample_q()) {
                             if (p == 6.0 && q == 4.0) continue;
                             for (double w : sampling::log_spaced(1e-2, 1e2, 7))
                                 worst = std::min(worst, dmass_domega(p, q, w));
                         }
                     return worst;
                 }});

    c.push_back({"mass-derivative", "closed-form dmu/dw vs central difference of mu(w), relative", 1e-6, false, [] {
                     double worst = 0.0;
                     for (double p : detail::sample_p())
                         for (double q : detail::sample_q()) {
                             if (p == 6.0 && q == 4.0) continue;
                             for (double w : sampling::log_spaced(1e-2, 1e2, 7)) {
                                 const double h = 1e-5 * w;
                                 const double fd = (mass_of_omega(p, q, w + h) - mass_of_omega(p, q, w - h)) / (2 * h);
                                 worst = std::max(worst, rel(fd, dmass_domega(p, q, w)));
                             }
                         }
                     return worst;
                 }});

    c.push_back({"round-trip", "mass_of_omega(omega_of_mass(mu)) = mu, relative", 1e-10, false, [] {
                     double worst = 0.0;
                     for (double p : {3.0, 4.0, 5.0})
                         for (double q : {2.5, 3.0, 3.5})
                             for (double mu : sampling::log_spaced(0.1, 10.0, 5))
                                 worst = std::max(worst, rel(mass_of_omega(p, q, omega_of_mass(p, q, mu)), mu));
                     return worst;
                 }});

    c.push_back({"bracket-sign", "min of the dmu/dw bracket over t in (0,1), sigma in (0,2), q in (2,4)", kTiny, true, [] {
                     double worst = std::numeric_limits<double>::infinity();
                     for (double t : sampling::lin_spaced(0.01, 0.99, 25))
                         for (double s : sampling::lin_spaced(0.05, 1.95, 20))
                             for (double q : sampling::lin_spaced(2.05, 3.95, 10))
                                 worst = std::min(worst, mass_derivative_bracket(s, q, t));
                     return worst;
                 }});

    c.push_back({"doubly-critical-energy", "|energy| of ground_state(6,4,w)", 1e-9, false, [] {
                     double worst = 0.0;
                     for (double w : {0.5, 1.0, 2.0}) worst = std::max(worst, std::abs(ground_state(6, 4, w).energy));
                     return worst;
                 }});

    c.push_back({"gn-extremality", "relative GN slack of the optimizers (soliton, e^{-|x|})", 1e-4, false, [] {
                     double worst = 0.0;
                     const Grid grid(30.0, 30001);
                     for (double p : {3.0, 4.0, 5.0, 6.0})
                         worst = std::max(worst, std::abs(gn_relative_slack(sample(soliton(p, 1.0), grid), p)));
                     const auto e = sample([](double x) { return std::exp(-std::abs(x)); }, grid);
                     return std::max(worst, std::abs(gn_relative_slack(e, kInfinityPower)));
                 }});

    c.push_back({"gn-inequality", "min GN slack over random positive even profiles, p in {4, 6, inf}", -1e-8, true, [] {
                     std::mt19937_64 rng(20240611);
                     const Grid grid(30.0, 6001);
                     double worst = std::numeric_limits<double>::infinity();
                     for (int i = 0; i < 30; ++i) {
                         const auto u = sampling::random_even_profile(grid, rng);
                         for (double p : {4.0, 6.0, kInfinityPower}) worst = std::min(worst, gn_slack(u, p));
                     }
                     return worst;
                 }});

    c.push_back({"scaling", "relative deviation of F_{6,4}(u_l) from l^2 F_{6,4}(u)", 1e-3, false, [] {
                     std::mt19937_64 rng(7);
                     const auto params = EnergyParams::doubly(6, 4);
                     double worst = 0.0;
                     for (int i = 0; i < 3; ++i) {
                         const auto u = discrete::with_mass(sampling::random_even_profile(Grid(30.0, 6001), rng), 1.7);
                         const auto curve = scaling_curve(u, params, {0.5, 2.0, 10.0});
                         const double base = energy(u, params);
                         for (const auto& pt : curve) worst = std::max(worst, rel(pt.energy, pt.lambda * pt.lambda * base));
                     }
                     return worst;
                 }});

    c.push_back({"witness", "failures of unboundedness_witness (success when unbounded, refusal when bounded)", 0.0,
                 false, [] {
                     int failures = 0;
                     const std::vector<std::pair<EnergyParams, double>> unbounded{
                         {EnergyParams::pointwise(4), 3.0}, {EnergyParams::doubly(6, 3), 2.8},
                         {EnergyParams::doubly(6, 4), 1.6}, {EnergyParams::doubly(4, 4), 2.0},
                         {EnergyParams::standard(6), 3.0}};
                     for (const auto& [params, mu] : unbounded)
                         if (!unboundedness_witness(params, MassConstraint{mu}, -1e6).succeeded) ++failures;
                     const std::vector<std::pair<EnergyParams, double>> bounded{
                         {EnergyParams::doubly(4, 3), 1.0}, {EnergyParams::pointwise(4), 1.0},
                         {EnergyParams::doubly(6, 4), 1.0}, {EnergyParams::doubly(6, 3), 2.0}};
                     for (const auto& [params, mu] : bounded) {
                         try {
                             unboundedness_witness(params, MassConstraint{mu}, -1e6);
                             ++failures;
                         } catch (const RegimeError&) {
                         }
                     }
                     return static_cast<double>(failures);
                 }});

    c.push_back({"coercivity", "sign mismatches of coercivity_margin(6, q, mu) against mu < sqrt(3) pi / 2", 0.0, false,
                 [] {
                     int mismatches = 0;
                     const double m6 = critical::standard_mass();
                     std::vector<double> masses = sampling::lin_spaced(0.1, 5.0, 50);
                     masses.insert(masses.end(), {m6, std::nextafter(m6, 0.0), std::nextafter(m6, 10.0)});
                     for (double q : {2.5, 3.0, 3.5})
                         for (double mu : masses)
                             if ((coercivity_margin(EnergyParams::doubly(6, q), MassConstraint{mu}) > 0.0) != (mu < m6))
                                 ++mismatches;
                     return static_cast<double>(mismatches);
                 }});

    c.push_back({"gradient", "componentwise relative error of gradient vs central differences", 1e-6, false, [] {
                     std::mt19937_64 rng(11);
                     const Grid grid(5.0, 101);
                     double worst = 0.0;
                     for (const auto& params : {EnergyParams::doubly(4, 3), EnergyParams::doubly(6, 4)}) {
                         GridFunction u = sampling::random_even_profile(grid, rng);
                         const auto g = gradient(u, params);
                         double gmax = 0.0;
                         for (double v : g.values()) gmax = std::max(gmax, std::abs(v));
                         for (std::size_t i = 0; i < u.size(); ++i) {
                             const double keep = u[i];
                             const double d = 1e-6 * std::max(1.0, std::abs(keep));
                             u[i] = keep + d;
                             const double ep = energy(u, params);
                             u[i] = keep - d;
                             const double em = energy(u, params);
                             u[i] = keep;
                             const double fd = (ep - em) / (2 * d * grid.spacing());
                             worst = std::max(worst, std::abs(fd - g[i]) / std::max(std::abs(g[i]), 1e-3 * gmax));
                         }
                     }
                     return worst;
                 }});

    c.push_back({"rearrangement", "violations of the rearrange layout (same multiset, interleaved decreasing)", 0.0,
                 false, [] {
                     std::mt19937_64 rng(3);
                     int violations = 0;
                     for (int i = 0; i < 5; ++i) {
                         const auto u = sampling::random_rough_profile(Grid(10.0, 401), rng, true);
                         const auto r = rearrange(u);
                         std::vector<double> before, after(r.values().begin(), r.values().end());
                         for (double v : u.values()) before.push_back(std::abs(v));
                         std::sort(before.begin(), before.end());
                         std::sort(after.begin(), after.end());
                         if (before != after) ++violations;
                         const std::size_t c0 = r.grid().center();
                         for (std::size_t k = 1; k <= c0; ++k) {
                             if (r[c0 + k] > r[c0 + k - 1] || r[c0 - k] > r[c0 + k]) ++violations;
                             if (k < c0 && r[c0 + k + 1] > r[c0 - k]) ++violations;
                         }
                     }
                     return static_cast<double>(violations);
                 }});

    c.push_back({"minimizer", "relative energy gap of minimize(4,3,1) to the analytic ground state", 1e-4, false, [] {
                     MinimizerOptions opts;
                     opts.grid = Grid(40.0, 8001);
                     const auto params = EnergyParams::doubly(4, 3);
                     const auto r = minimize(params, MassConstraint{1.0}, opts);
                     if (!r.converged) return std::numeric_limits<double>::infinity();
                     return rel(r.energy, ground_state_at_mass(params, 1.0).energy);
                 }});

    c.push_back({"phase", "distance of verdict flips from the closed-form critical mass, in sweep steps", 1.0 + 1e-9, false,
                 [] {
                     double worst = 0.0;
                     const std::vector<EnergyParams> cases{EnergyParams::pointwise(4), EnergyParams::doubly(6, 3),
                                                           EnergyParams::doubly(6, 4), EnergyParams::doubly(4, 4)};
                     const double step = (4.0 - 0.1) / 39.0;
                     for (const auto& params : cases) {
                         const auto flips = verdict_transitions(phase_sweep(params, 0.1, 4.0, 40));
                         const double mc = *critical_mass(params);
                         // The first flip is the row at the critical mass itself.
                         if (flips.empty() || flips.front() != mc) return std::numeric_limits<double>::infinity();
                         for (double f : flips) worst = std::max(worst, std::abs(f - mc) / step);
                     }
                     return worst;
                 }});

    return c;
}

inline std::vector<std::string> names() {
    std::vector<std::string> out;
    for (const auto& c : registry()) out.push_back(c.name);
    return out;
}

/// Runs the checks whose name contains one of the filters (all when empty),
/// with every tolerance multiplied by tolerance_scale. Zero tolerances stay zero.
inline std::vector<CheckResult> run(const std::vector<std::string>& only = {}, double tolerance_scale = 1.0) {
    if (!(tolerance_scale > 0.0) || !std::isfinite(tolerance_scale))
        throw ParameterError("tolerance scale must be positive");
    std::vector<CheckResult> out;
    for (const auto& check : registry()) {
        if (!only.empty() && std::none_of(only.begin(), only.end(), [&](const std::string& f) {
                return check.name.find(f) != std::string::npos;
            }))
            continue;
        CheckResult r{check.name, check.description, 0.0, check.tolerance * tolerance_scale, check.lower_bound, false};
        try {
            r.measured = check.measure();
            r.passed = std::isfinite(r.measured) &&
                       (check.lower_bound ? r.measured >= r.tolerance : r.measured <= r.tolerance);
        } catch (const std::exception& e) {
            r.measured = std::numeric_limits<double>::quiet_NaN();
            r.description += std::string(" [error: ") + e.what() + "]";
        }
        out.push_back(std::move(r));
    }
    if (out.empty()) throw ParameterError("no verification check matches the filter");
    return out;
}

}  // namespace verify

}  // namespace deltanls
