#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "deltanls/analytic.hpp"
#include "deltanls/core.hpp"
#include "deltanls/errors.hpp"
#include "deltanls/variational.hpp"

namespace deltanls {

/// K_p ||u||_2^{p/2+1} ||u'||_2^{p/2-1} - ||u||_p^p on the grid; for p = inf,
/// ||u||_2 ||u'||_2 - ||u||_inf^2.
inline double gn_slack(const GridFunction& u, double p) {
    const double mass = discrete::mass(u);
    if (!(mass > 0.0)) throw ParameterError("gn_slack needs a nonzero function");
    const double kinetic = discrete::kinetic(u);
    const double lhs = discrete::power_sum(u, p);
    if (std::isinf(p)) return std::sqrt(mass * kinetic) - lhs;
    return gn_constant(p) * std::pow(mass, 0.25 * p + 0.5) * std::pow(kinetic, 0.25 * p - 0.5) - lhs;
}

/// gn_slack divided by ||u||_p^p.
inline double gn_relative_slack(const GridFunction& u, double p) { return gn_slack(u, p) / discrete::power_sum(u, p); }

struct ScalingPoint {
    double lambda;
    double energy;
};

namespace detail {

inline void check_lambdas(const std::vector<double>& lambdas) {
    for (double l : lambdas)
        if (!(std::isfinite(l) && l > 0.0)) throw ParameterError("scaling factors must be positive");
}

}  // namespace detail

/// Energies of u_l(x) = sqrt(l) u(l x) for a closed-form u, each sampled on
/// the same grid. Fails when u_l has not decayed by the grid ends.
template <class Profile>
std::vector<ScalingPoint> scaling_curve(const Profile& u, const Grid& grid, const EnergyParams& params,
                                        const std::vector<double>& lambdas, double tail_tolerance = 1e-8) {
    detail::check_lambdas(lambdas);
    std::vector<ScalingPoint> out;
    out.reserve(lambdas.size());
    for (double l : lambdas) {
        const double root = std::sqrt(l);
        const GridFunction s = sample([&](double x) { return root * u(l * x); }, grid);
        double peak = 0.0;
        for (double v : s.values()) peak = std::max(peak, std::abs(v));
        if (s.tail() > tail_tolerance * peak)
            throw RangeError("scaled profile at lambda = " + std::to_string(l) + " does not decay inside the grid");
        out.push_back({l, energy(s, params)});
    }
    return out;
}

/// Same for grid data: u_l lives on the grid of half width L/l with values
/// sqrt(l) u_i, which is exact and needs no interpolation.
inline std::vector<ScalingPoint> scaling_curve(const GridFunction& u, const EnergyParams& params,
                                               const std::vector<double>& lambdas) {
    detail::check_lambdas(lambdas);
    std::vector<ScalingPoint> out;
    out.reserve(lambdas.size());
    for (double l : lambdas) {
        const Grid grid(u.grid().half_width() / l, u.grid().count());
        std::vector<double> values(u.values().begin(), u.values().end());
        for (double& v : values) v *= std::sqrt(l);
        out.push_back({l, energy(GridFunction(grid, std::move(values)), params)});
    }
    return out;
}

struct WitnessResult {
    double lambda = 0.0;
    double trial_energy = 0.0;
    std::string trial_description;
    bool succeeded = false;
};

/// Scaled trial families driving the infimum to -inf.
enum class WitnessRoute { PointCritical, StandardCritical, DoublyCritical };

inline WitnessRoute witness_route(const EnergyParams& params) {
    if (params.standard_critical() && params.point_critical()) return WitnessRoute::DoublyCritical;
    if (params.standard_critical()) return WitnessRoute::StandardCritical;
    if (params.point_critical()) return WitnessRoute::PointCritical;
    throw ParameterError(params.label() + " has no critical term");
}

inline std::string_view to_string(WitnessRoute r) noexcept {
    switch (r) {
        case WitnessRoute::PointCritical: return "sqrt(mu/2) chi_lambda";
        case WitnessRoute::StandardCritical: return "sqrt(mu/m6) phi_{lambda^2}, p = 6";
        case WitnessRoute::DoublyCritical: return "sqrt(mu/mu*) lambda-scaled ground state of F_{6,4}";
    }
    return "?";
}

/// Closed-form energy of the trial function at scale lambda.
inline double witness_trial_energy(const EnergyParams& params, double mu, double lambda) {
    switch (witness_route(params)) {
        case WitnessRoute::PointCritical: {
            // sqrt(mu/2) chi_lambda: kinetic (mu/2) 2 l^2, u(0)^4 = (mu/2)^2 4 l^2.
            const double half = mu / 2.0;
            double e = lambda * lambda * half * (1.0 - half);
            if (params.has_standard()) {
                const double p = params.p();
                e -= std::pow(half, p / 2.0) * std::pow(2.0 * lambda, p / 2.0) * 2.0 / (p * p * lambda);
            }
            return e;
        }
        case WitnessRoute::StandardCritical: {
            // phi_1 at p = 6 has ||phi'||^2 = K, ||phi||_6^6 = 3K, phi(0) = 3^{1/4}.
            const double r = mu / critical::standard_mass();
            const double k = soliton_norms(6.0, 1.0).kinetic;
            double e = lambda * lambda * 0.5 * r * k * (1.0 - r * r);
            if (params.has_point()) {
                const double q = params.q();
                e -= std::pow(r, q / 2.0) * std::pow(lambda, q / 2.0) * std::pow(3.0, q / 4.0) / q;
            }
            return e;
        }
        case WitnessRoute::DoublyCritical: {
            const ProfileNorms n = ground_state(6.0, 4.0, 1.0).norms;
            const double s = mu / critical::doubly_critical_mass();
            const double base = 0.5 * s * n.kinetic - s * s * s * n.power_sum / 6.0 -
                                s * s * std::pow(n.origin, 4.0) / 4.0;
            return lambda * lambda * base;
        }
    }
    return 0.0;
}

/// Grows lambda by doubling until the trial energy drops below target.
inline WitnessResult unboundedness_witness(const EnergyParams& params, const MassConstraint& mass, double target) {
    if (!(std::isfinite(target) && target < 0.0)) throw ParameterError("witness target must be negative");
    const RegimeClassification regime = classify_regime(params, mass);
    if (regime.verdict != Verdict::UnboundedBelow)
        throw RegimeError("the infimum of " + params.label() + " is finite at this mass", regime);
    WitnessResult w;
    w.trial_description = std::string(to_string(witness_route(params)));
    for (double lambda = 1.0; lambda <= 1e150; lambda *= 2.0) {
        w.lambda = lambda;
        w.trial_energy = witness_trial_energy(params, mass.value(), lambda);
        if (w.trial_energy < target) {
            w.succeeded = true;
            return w;
        }
    }
    w.trial_description += " (lambda budget exhausted)";
    return w;
}

namespace detail {

inline constexpr double kSextic = 4.0 / (3.0 * kPi * kPi);  // K_6 / 3

// Positive root of 1 - mu/2 - K_6 mu^2/3.
inline double doubly_coercivity_root() {
    return (-0.5 + std::sqrt(0.25 + 4.0 * kSextic)) / (2.0 * kSextic);
}

}  // namespace detail

/// Coefficient of ||u'||^2 in the Gagliardo-Nirenberg lower bound for the
/// energy at mass mu. Positive means coercive; doubly subcritical gives 1.
/// Written in factored form so the sign flips exactly at the root.
inline double coercivity_margin(const EnergyParams& params, const MassConstraint& mass) {
    const double mu = mass.value();
    const bool pc = params.standard_critical();
    const bool qc = params.point_critical();
    if (pc && qc) {
        const double r1 = detail::doubly_coercivity_root();
        const double r2 = -0.5 / detail::kSextic - r1;
        return detail::kSextic * (r1 - mu) * (mu - r2);
    }
    if (pc) {
        const double m = critical::standard_mass();
        return detail::kSextic * (m - mu) * (m + mu);
    }
    if (qc) return (2.0 - mu) / 2.0;
    return 1.0;
}

/// Mass at which coercivity_margin vanishes, if any.
inline std::optional<double> coercivity_threshold(const EnergyParams& params) {
    const bool pc = params.standard_critical();
    const bool qc = params.point_critical();
    if (pc && qc) return detail::doubly_coercivity_root();
    if (pc) return critical::standard_mass();
    if (qc) return 2.0;
    return std::nullopt;
}

/// f_u(mu) = F_{6,4}(sqrt(mu) u) = A mu - B mu^3 - C mu^2 for a unit-mass u.
struct MassPolynomial {
    double A = 0.0;  ///< ||u'||^2 / 2
    double B = 0.0;  ///< ||u||_6^6 / 6
    double C = 0.0;  ///< u(0)^4 / 4

    double operator()(double mu) const { return A * mu - B * mu * mu * mu - C * mu * mu; }

    /// Positive zero of A - C mu - B mu^2.
    double positive_root() const {
        if (B == 0.0) return C > 0.0 ? A / C : std::numeric_limits<double>::infinity();
        return 2.0 * A / (C + std::sqrt(C * C + 4.0 * A * B));
    }
};

inline MassPolynomial mass_polynomial(const GridFunction& u) {
    const double m = discrete::mass(u);
    if (!(std::abs(m - 1.0) <= 1e-10))
        throw NormalizationError("mass_polynomial needs a unit-mass profile, got mass " + std::to_string(m));
    return {0.5 * discrete::kinetic(u), discrete::power_sum(u, 6.0) / 6.0, std::pow(std::abs(u.at_origin()), 4.0) / 4.0};
}

}  // namespace deltanls
