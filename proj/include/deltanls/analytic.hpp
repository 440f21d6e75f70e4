#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <variant>

#include "deltanls/core.hpp"
#include "deltanls/quadrature.hpp"
#include "deltanls/roots.hpp"

namespace deltanls {

/// Frequencies accepted by the public entry points.
inline constexpr double kOmegaMin = 1e-9;
inline constexpr double kOmegaMax = 1e9;

/// Marker for the L-infinity form of the Gagliardo-Nirenberg inequality.
inline constexpr double kInfinityPower = std::numeric_limits<double>::infinity();

namespace detail {

inline void check_standard_power(double p) {
    if (!(std::isfinite(p) && p > 2.0 && p <= 6.0))
        throw ParameterError("standard power p must lie in (2, 6], got " + std::to_string(p));
}

inline void check_point_power(double q) {
    if (!(std::isfinite(q) && q > 2.0 && q <= 4.0))
        throw ParameterError("point power q must lie in (2, 4], got " + std::to_string(q));
}

inline void check_omega(double omega) {
    if (!(std::isfinite(omega) && omega >= kOmegaMin && omega <= kOmegaMax))
        throw ParameterError("frequency must lie in [1e-9, 1e9], got " + std::to_string(omega));
}

inline double sech(double y) noexcept {
    const double e = std::exp(-std::abs(y));
    return 2.0 * e / (1.0 + e * e);
}

// log(cosh y) without overflow.
inline double log_cosh(double y) noexcept {
    y = std::abs(y);
    return y + std::log1p(std::exp(-2.0 * y)) - std::numbers::ln2;
}

}  // namespace detail

/// An even profile u(x) = g(|x|) known in closed form.
///
/// Two shapes occur: a soliton half-line piece g(r) = phi_omega(r + a), which
/// covers both the plain soliton (a = 0) and the pasted ground states, and an
/// exponential g(r) = A exp(-k r) for the purely pointwise problem.
class RadialProfile {
public:
    struct PastedSoliton {
        double p;
        double omega;
        double shift;
    };
    struct Exponential {
        double amplitude;
        double rate;
    };

    explicit RadialProfile(PastedSoliton s) : shape_(s) {}
    explicit RadialProfile(Exponential e) : shape_(e) {}

    double operator()(double x) const { return radial(std::abs(x)); }

    /// g(r) for r >= 0.
    double radial(double r) const {
        if (const auto* s = std::get_if<PastedSoliton>(&shape_)) {
            const double sigma = s->p / 2.0 - 1.0;
            const double amplitude = std::pow((sigma + 1.0) * s->omega, 0.5 / sigma);
            const double y = sigma * std::sqrt(s->omega) * (r + s->shift);
            return amplitude * std::pow(detail::sech(y), 1.0 / sigma);
        }
        const auto& e = std::get<Exponential>(shape_);
        return e.amplitude * std::exp(-e.rate * r);
    }

    /// g'(r) for r >= 0, one-sided at r = 0.
    double radial_slope(double r) const {
        if (const auto* s = std::get_if<PastedSoliton>(&shape_)) {
            const double sigma = s->p / 2.0 - 1.0;
            const double root = std::sqrt(s->omega);
            return -root * std::tanh(sigma * root * (r + s->shift)) * radial(r);
        }
        const auto& e = std::get<Exponential>(shape_);
        return -e.rate * radial(r);
    }

    /// u'(x) for x != 0.
    double derivative(double x) const {
        const double slope = radial_slope(std::abs(x));
        return x < 0.0 ? -slope : slope;
    }

    double right_derivative_at_origin() const { return radial_slope(0.0); }
    double left_derivative_at_origin() const { return -radial_slope(0.0); }

    const std::variant<PastedSoliton, Exponential>& shape() const noexcept { return shape_; }

private:
    std::variant<PastedSoliton, Exponential> shape_;
};

/// Integrals of a closed-form profile over the whole line.
struct ProfileNorms {
    double mass = 0.0;       ///< ||u||_2^2
    double kinetic = 0.0;    ///< ||u'||_2^2
    double power_sum = 0.0;  ///< ||u||_p^p, zero without a standard term
    double origin = 0.0;     ///< u(0)
};

/// Solution of the transcendental matching equation for the pasted soliton.
struct MatchingSolution {
    double t_bar;             ///< tanh(sigma sqrt(omega) a)
    double one_minus_t_bar_sq;  ///< 1 - t_bar^2, kept separately for t_bar near 1
    double shift_a;
    double sigma;
    double omega;
    double rhs;  ///< right-hand side the root satisfies

    /// f(t_bar) - rhs with f(t) = t / (1 - t^2)^{(q-2)/(2 sigma)}.
    double residual(double q) const {
        return t_bar / std::pow(one_minus_t_bar_sq, (q - 2.0) / (2.0 * sigma)) - rhs;
    }
};

struct GroundStateSolution {
    EnergyParams params;
    double omega;
    std::optional<MatchingSolution> matching;
    RadialProfile profile;
    ProfileNorms norms;
    double mass;
    double energy;
};

namespace detail {

// Integrands below are positive, so accuracy is asked relative to the value.
inline constexpr quadrature::Tolerance kRelativeOnly{0.0, 1e-14};

// Integral of sin^k over [0, phi_max]; equals int_t^1 (1 - s^2)^{(k-1)/2} ds
// after s = cos(phi), phi_max = acos(t). Bounded integrand for k >= 0.
inline double sine_power_integral(double k, double phi_max) {
    if (phi_max <= 0.0) return 0.0;
    return quadrature::integrate([k](double phi) { return std::pow(std::sin(phi), k); }, 0.0, phi_max,
                                 kRelativeOnly);
}

// Same integral divided by sin(phi_max)^k, with an integrand bounded by 1;
// keeps large k (p near 2) away from underflow.
inline double scaled_sine_power_integral(double k, double phi_max) {
    if (phi_max <= 0.0) return 0.0;
    const double top = std::sin(phi_max);
    // 1 - sin(phi)/top formed without cancellation; k can be in the thousands.
    auto f = [k, top, phi_max](double phi) {
        const double ratio = std::sin(phi) / top;
        if (ratio < 0.5) return std::pow(ratio, k);
        const double gap = 2.0 * std::cos(0.5 * (phi_max + phi)) * std::sin(0.5 * (phi_max - phi)) / top;
        return std::exp(k * std::log1p(-gap));
    };
    return quadrature::integrate(f, 0.0, phi_max, kRelativeOnly);
}

inline double cos_sq_sine_power_integral(double k, double phi_max) {
    if (phi_max <= 0.0) return 0.0;
    return quadrature::integrate(
        [k](double phi) {
            const double c = std::cos(phi);
            return c * c * std::pow(std::sin(phi), k);
        },
        0.0, phi_max, kRelativeOnly);
}

// acos(t) from t and 1 - t^2 without cancellation near t = 1.
inline double arc_from_tbar(double t, double one_minus_sq) { return std::atan2(std::sqrt(one_minus_sq), t); }

inline double standard_energy(const ProfileNorms& n, std::optional<double> p, std::optional<double> q) {
    double e = 0.5 * n.kinetic;
    if (p) e -= n.power_sum / *p;
    if (q) e -= std::pow(std::abs(n.origin), *q) / *q;
    return e;
}

// Norms of g(r) = phi_omega(r + a) with tanh(sigma sqrt(omega) a) = t.
//   mass      = 2 B^{1/s} / (s sqrt w) * int_t^1 (1-s^2)^{1/s-1} ds
//   kinetic   = 2 w B^{1/s} / (s sqrt w) * int_t^1 s^2 (1-s^2)^{1/s-1} ds
//   power_sum = 2 B^{1/s+1} / (s sqrt w) * int_t^1 (1-s^2)^{1/s} ds
// with B = (s+1) w and s = sigma.
inline ProfileNorms pasted_soliton_norms(double p, double omega, double t, double one_minus_sq) {
    const double sigma = p / 2.0 - 1.0;
    const double k = 2.0 / sigma - 1.0;
    const double phi_max = arc_from_tbar(t, one_minus_sq);
    const double log_b = std::log((sigma + 1.0) * omega);
    const double log_prefactor = std::log(2.0) + log_b / sigma - std::log(sigma) - 0.5 * std::log(omega);

    ProfileNorms n;
    n.mass = std::exp(log_prefactor) * sine_power_integral(k, phi_max);
    n.kinetic = omega * std::exp(log_prefactor) * cos_sq_sine_power_integral(k, phi_max);
    n.power_sum = std::exp(log_prefactor + log_b) * sine_power_integral(k + 2.0, phi_max);
    n.origin = std::exp(0.5 * (log_b + std::log(one_minus_sq)) / sigma);
    return n;
}

inline ProfileNorms exponential_norms(double amplitude, double rate, std::optional<double> p) {
    ProfileNorms n;
    n.mass = amplitude * amplitude / rate;
    n.kinetic = amplitude * amplitude * rate;
    if (p) n.power_sum = 2.0 * std::pow(amplitude, *p) / (*p * rate);
    n.origin = amplitude;
    return n;
}

}  // namespace detail

/// The soliton phi_omega(x) = [(s+1) w sech^2(s sqrt(w) x)]^{1/(2s)}, s = p/2 - 1.
inline RadialProfile soliton(double p, double omega) {
    detail::check_standard_power(p);
    detail::check_omega(omega);
    return RadialProfile(RadialProfile::PastedSoliton{p, omega, 0.0});
}

/// Closed-form norms of soliton(p, omega).
inline ProfileNorms soliton_norms(double p, double omega) {
    detail::check_standard_power(p);
    detail::check_omega(omega);
    return detail::pasted_soliton_norms(p, omega, 0.0, 1.0);
}

/// Sharp Gagliardo-Nirenberg constant K_p; pass kInfinityPower for the sup-norm form.
inline double gn_constant(double p) {
    if (p == kInfinityPower) return 1.0;
    detail::check_standard_power(p);
    if (p == 6.0) return 4.0 / (kPi * kPi);
    // The soliton is the optimizer, so the quotient at omega = 1 is the constant.
    const ProfileNorms n = detail::pasted_soliton_norms(p, 1.0, 0.0, 1.0);
    return n.power_sum / (std::pow(n.mass, 0.25 * p + 0.5) * std::pow(n.kinetic, 0.25 * p - 0.5));
}

namespace detail {

// Root of the matching equation in y = artanh(t), no argument checks.
inline MatchingSolution matching_root(double p, double q, double omega) {
    const double sigma = p / 2.0 - 1.0;
    const double beta = (q - 2.0) / (2.0 * sigma);
    const double two_c = (q - 2.0 - sigma) / sigma;
    const double log_rhs = beta * std::log(sigma + 1.0) + 0.5 * two_c * std::log(omega) - std::numbers::ln2;
    const double rhs = std::exp(log_rhs);

    auto residual = [&](double y) { return std::log(std::tanh(y)) + 2.0 * beta * log_cosh(y) - log_rhs; };
    auto slope = [&](double y) {
        const double t = std::tanh(y);
        return (1.0 + two_c * t * t) / t;
    };

    // f(t) >= t, so tanh(y) <= rhs at the root.
    double hi = rhs < 0.5 ? 2.0 * std::atanh(rhs) : std::max(1.0, log_rhs / (2.0 * beta) + 2.0);
    while (residual(hi) <= 0.0) hi *= 2.0;
    double lo = 0.5 * hi;
    while (residual(lo) >= 0.0) lo *= 0.5;

    const double y = roots::bisect_then_newton(residual, residual, slope, lo, hi);

    MatchingSolution m{};
    m.sigma = sigma;
    m.omega = omega;
    m.t_bar = std::tanh(y);
    const double s = sech(y);
    m.one_minus_t_bar_sq = s * s;
    m.shift_a = y / (sigma * std::sqrt(omega));
    m.rhs = rhs;
    return m;
}

}  // namespace detail

/// Unique solution of the matching equation
///   t / (1 - t^2)^{(q-2)/(2s)} = (s+1)^{(q-2)/(2s)} w^{(q-2-s)/(2s)} / 2.
///
/// Solved for y = artanh(t) so that both ends of (0, 1) stay representable:
/// bisection on log f(tanh y) - log rhs, then Newton with the closed-form
/// derivative (1 + (q-2-s)/s t^2) / t of that residual.
inline MatchingSolution solve_matching(double p, double q, double omega) {
    detail::check_standard_power(p);
    detail::check_point_power(q);
    detail::check_omega(omega);
    return detail::matching_root(p, q, omega);
}

namespace detail {

inline GroundStateSolution pasted_ground_state(double p, double q, double omega) {
    const MatchingSolution m = matching_root(p, q, omega);
    GroundStateSolution gs{EnergyParams::doubly(p, q),
                           omega,
                           m,
                           RadialProfile(RadialProfile::PastedSoliton{p, omega, m.shift_a}),
                           pasted_soliton_norms(p, omega, m.t_bar, m.one_minus_t_bar_sq),
                           0.0,
                           0.0};
    gs.mass = gs.norms.mass;
    gs.energy = standard_energy(gs.norms, p, q);
    return gs;
}

inline GroundStateSolution exponential_ground_state(double q, double amplitude, double rate) {
    GroundStateSolution gs{EnergyParams::pointwise(q),
                           rate * rate,
                           std::nullopt,
                           RadialProfile(RadialProfile::Exponential{amplitude, rate}),
                           exponential_norms(amplitude, rate, std::nullopt),
                           0.0,
                           0.0};
    gs.mass = gs.norms.mass;
    gs.energy = standard_energy(gs.norms, std::nullopt, q);
    return gs;
}

// mass_of_omega for F_{p,q} without the public frequency clamp.
inline double pasted_mass(double p, double q, double omega) {
    const MatchingSolution m = matching_root(p, q, omega);
    return pasted_soliton_norms(p, omega, m.t_bar, m.one_minus_t_bar_sq).mass;
}

}  // namespace detail

/// phi_omega(|x| + a) with a from solve_matching; mass and energy by quadrature.
inline GroundStateSolution ground_state(double p, double q, double omega) {
    detail::check_standard_power(p);
    detail::check_point_power(q);
    detail::check_omega(omega);
    return detail::pasted_ground_state(p, q, omega);
}

/// Stationary state at frequency omega for any functional: pasted soliton for
/// F_{p,q}, (2 sqrt w)^{1/(q-2)} exp(-sqrt(w)|x|) for D_q, the soliton for E_p.
inline GroundStateSolution ground_state(const EnergyParams& params, double omega) {
    detail::check_omega(omega);
    switch (params.functional()) {
        case EnergyParams::Functional::Doubly:
            return detail::pasted_ground_state(params.p(), params.q(), omega);
        case EnergyParams::Functional::Pointwise: {
            const double q = params.q();
            const double root = std::sqrt(omega);
            return detail::exponential_ground_state(q, std::pow(2.0 * root, 1.0 / (q - 2.0)), root);
        }
        case EnergyParams::Functional::Standard: {
            const double p = params.p();
            GroundStateSolution gs{params,
                                   omega,
                                   std::nullopt,
                                   RadialProfile(RadialProfile::PastedSoliton{p, omega, 0.0}),
                                   detail::pasted_soliton_norms(p, omega, 0.0, 1.0),
                                   0.0,
                                   0.0};
            gs.mass = gs.norms.mass;
            gs.energy = detail::standard_energy(gs.norms, p, std::nullopt);
            return gs;
        }
    }
    throw ParameterError("unknown functional");
}

/// Ground state of D_q, 2 < q < 4, at mass mu:
///   (mu/2)^{1/(4-q)} exp(-2^{-2/(4-q)} mu^{(q-2)/(4-q)} |x|),
/// i.e. (2 sqrt w)^{1/(q-2)} exp(-sqrt(w)|x|) with mu = 2^{2/(q-2)} w^{(4-q)/(2(q-2))}.
inline GroundStateSolution pointwise_ground_state(double q, double mu) {
    detail::check_point_power(q);
    if (q == 4.0) throw ParameterError("q = 4 has no ground state at generic mass; use pointwise_critical_family");
    MassConstraint{mu};
    const double amplitude = std::pow(mu / 2.0, 1.0 / (4.0 - q));
    const double rate = std::pow(2.0, -2.0 / (4.0 - q)) * std::pow(mu, (q - 2.0) / (4.0 - q));
    return detail::exponential_ground_state(q, amplitude, rate);
}

/// chi_lambda(x) = sqrt(2 lambda) exp(-lambda |x|): mass 2, zero D_4 energy.
inline RadialProfile pointwise_critical_family(double lambda) {
    if (!(std::isfinite(lambda) && lambda > 0.0)) throw ParameterError("lambda must be positive");
    return RadialProfile(RadialProfile::Exponential{std::sqrt(2.0 * lambda), lambda});
}

/// Mass of the stationary state of F_{p,q} at frequency omega.
inline double mass_of_omega(double p, double q, double omega) {
    detail::check_standard_power(p);
    detail::check_point_power(q);
    detail::check_omega(omega);
    return detail::pasted_mass(p, q, omega);
}

namespace detail {

inline double mass_of_omega_unchecked(const EnergyParams& params, double omega) {
    switch (params.functional()) {
        case EnergyParams::Functional::Doubly: return pasted_mass(params.p(), params.q(), omega);
        case EnergyParams::Functional::Pointwise: {
            const double q = params.q();
            return std::pow(2.0, 2.0 / (q - 2.0)) * std::pow(omega, (4.0 - q) / (2.0 * (q - 2.0)));
        }
        case EnergyParams::Functional::Standard:
            return pasted_soliton_norms(params.p(), omega, 0.0, 1.0).mass;
    }
    return 0.0;
}

}  // namespace detail

inline double mass_of_omega(const EnergyParams& params, double omega) {
    detail::check_omega(omega);
    return detail::mass_of_omega_unchecked(params, omega);
}

namespace detail {

// mass_derivative_bracket divided by (1 - t^2)^{1/s - 1/2}.
inline double scaled_bracket(double sigma, double q, double t, double one_minus_t_sq) {
    const double c = (q - 2.0 - sigma) / (2.0 * sigma);
    const double integral = scaled_sine_power_integral(2.0 / sigma - 1.0, arc_from_tbar(t, one_minus_t_sq));
    return (2.0 - sigma) / (2.0 * sigma) * integral - c * t * std::sqrt(one_minus_t_sq) / (2.0 * c * t * t + 1.0);
}

}  // namespace detail

/// The bracketed factor of dmu/domega as a function of t_bar:
///   (2-s)/(2s) int_t^1 (1-s^2)^{1/s-1} ds - c t (1-t^2)^{1/s} / (2 c t^2 + 1),
/// c = (q-2-s)/(2s).
inline double mass_derivative_bracket(double sigma, double q, double t, double one_minus_t_sq) {
    return std::pow(one_minus_t_sq, 1.0 / sigma - 0.5) * detail::scaled_bracket(sigma, q, t, one_minus_t_sq);
}

inline double mass_derivative_bracket(double sigma, double q, double t) {
    return mass_derivative_bracket(sigma, q, t, (1.0 - t) * (1.0 + t));
}

/// dmu/domega for F_{p,q}; identically zero in the doubly critical case.
inline double dmass_domega(double p, double q, double omega) {
    detail::check_standard_power(p);
    detail::check_point_power(q);
    detail::check_omega(omega);
    if (p == 6.0 && q == 4.0) return 0.0;
    const MatchingSolution m = solve_matching(p, q, omega);
    const double sigma = m.sigma;
    const double log_prefactor = std::log(2.0) + std::log(sigma + 1.0) / sigma - std::log(sigma) +
                                 (1.0 / sigma - 1.5) * std::log(omega) +
                                 (1.0 / sigma - 0.5) * std::log(m.one_minus_t_bar_sq);
    return std::exp(log_prefactor) * detail::scaled_bracket(sigma, q, m.t_bar, m.one_minus_t_bar_sq);
}

/// Closed-form critical mass of the functional, if it has one.
inline std::optional<double> critical_mass(const EnergyParams& params) {
    const bool pc = params.standard_critical();
    const bool qc = params.point_critical();
    if (pc && qc) return critical::doubly_critical_mass();
    if (qc) return critical::point_mass();
    if (pc) return critical::standard_mass();
    return std::nullopt;
}

/// Unique frequency whose stationary state has mass mu. Only defined where the
/// mass-frequency map is a strictly increasing bijection, i.e. where
/// classify_regime reports UniqueGroundState.
inline double omega_of_mass(const EnergyParams& params, double mu) {
    const MassConstraint mass{mu};
    const RegimeClassification regime = classify_regime(params, mass);
    if (regime.verdict != Verdict::UniqueGroundState)
        throw RegimeError("mass-frequency map is not invertible for " + params.label(), regime);

    auto m = [&](double w) { return detail::mass_of_omega_unchecked(params, w); };

    auto outside = [&] {
        return ParameterError("mass " + std::to_string(mu) + " needs a frequency outside [1e-9, 1e9]");
    };
    double lo = 1.0, hi = 1.0;
    if (m(1.0) < mu) {
        while (m(hi) < mu) {
            if (hi == kOmegaMax) throw outside();
            lo = hi;
            hi = std::min(2.0 * hi, kOmegaMax);
        }
    } else {
        while (m(lo) > mu) {
            if (lo == kOmegaMin) throw outside();
            hi = lo;
            lo = std::max(0.5 * lo, kOmegaMin);
        }
    }
    while (hi - lo > 1e-13 * lo) {
        const double mid = std::sqrt(lo * hi);
        if (mid <= lo || mid >= hi) break;
        (m(mid) < mu ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

inline double omega_of_mass(double p, double q, double mu) { return omega_of_mass(EnergyParams::doubly(p, q), mu); }

/// Ground state at prescribed mass in the UniqueGroundState regime.
inline GroundStateSolution ground_state_at_mass(const EnergyParams& params, double mu) {
    if (params.functional() == EnergyParams::Functional::Pointwise) {
        const RegimeClassification regime = classify_regime(params, MassConstraint{mu});
        if (regime.verdict != Verdict::UniqueGroundState)
            throw RegimeError("no unique ground state for " + params.label(), regime);
        return pointwise_ground_state(params.q(), mu);
    }
    return ground_state(params, omega_of_mass(params, mu));
}

}  // namespace deltanls
