#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "deltanls/errors.hpp"

namespace deltanls {

inline constexpr double kPi = std::numbers::pi;

/// Which nonlinear terms are switched on, and at which powers.
///
/// Both present gives F_{p,q}; only the point power gives D_q; only the
/// standard power gives E_p.  Powers equal to 6 (standard) or 4 (point) are
/// the L2-critical ones and are detected by exact comparison.
class EnergyParams {
public:
    enum class Functional { Doubly, Pointwise, Standard };

    static EnergyParams make(std::optional<double> p, std::optional<double> q) {
        if (!p && !q) throw ParameterError("at least one nonlinearity must be active");
        if (p && !(std::isfinite(*p) && *p > 2.0 && *p <= 6.0))
            throw ParameterError("standard power p must lie in (2, 6], got " + std::to_string(*p));
        if (q && !(std::isfinite(*q) && *q > 2.0 && *q <= 4.0))
            throw ParameterError("point power q must lie in (2, 4], got " + std::to_string(*q));
        return EnergyParams(p, q);
    }
    static EnergyParams doubly(double p, double q) { return make(p, q); }
    static EnergyParams pointwise(double q) { return make(std::nullopt, q); }
    static EnergyParams standard(double p) { return make(p, std::nullopt); }

    std::optional<double> standard_power() const noexcept { return p_; }
    std::optional<double> point_power() const noexcept { return q_; }
    bool has_standard() const noexcept { return p_.has_value(); }
    bool has_point() const noexcept { return q_.has_value(); }

    /// Value of p; only valid when has_standard().
    double p() const {
        if (!p_) throw ParameterError("standard nonlinearity is not active");
        return *p_;
    }
    double q() const {
        if (!q_) throw ParameterError("point nonlinearity is not active");
        return *q_;
    }

    Functional functional() const noexcept {
        if (p_ && q_) return Functional::Doubly;
        return q_ ? Functional::Pointwise : Functional::Standard;
    }

    bool standard_critical() const noexcept { return p_ && *p_ == 6.0; }
    bool point_critical() const noexcept { return q_ && *q_ == 4.0; }

    std::string label() const {
        auto num = [](double v) {
            std::string s = std::to_string(v);
            s.erase(s.find_last_not_of('0') + 1);
            if (!s.empty() && s.back() == '.') s.pop_back();
            return s;
        };
        switch (functional()) {
            case Functional::Doubly: return "F_{" + num(*p_) + "," + num(*q_) + "}";
            case Functional::Pointwise: return "D_{" + num(*q_) + "}";
            case Functional::Standard: return "E_{" + num(*p_) + "}";
        }
        return {};
    }

    friend bool operator==(const EnergyParams&, const EnergyParams&) = default;

private:
    EnergyParams(std::optional<double> p, std::optional<double> q) : p_(p), q_(q) {}

    std::optional<double> p_;
    std::optional<double> q_;
};

/// Prescribed squared L2 norm.
class MassConstraint {
public:
    explicit MassConstraint(double mu) : mu_(mu) {
        if (!(std::isfinite(mu) && mu > 0.0))
            throw ParameterError("mass must be positive and finite, got " + std::to_string(mu));
    }
    double value() const noexcept { return mu_; }

private:
    double mu_;
};

/// Closed-form critical masses.
namespace critical {

/// Threshold of the point term at q = 4.
inline double point_mass() noexcept { return 2.0; }

/// Threshold of the standard term at p = 6, sqrt(3) pi / 2.
inline double standard_mass() noexcept { return std::sqrt(3.0) * kPi / 2.0; }

/// Threshold when both terms are critical, sqrt(3) (pi/2 - asin(sqrt(3/7))).
inline double doubly_critical_mass() noexcept {
    return std::sqrt(3.0) * (kPi / 2.0 - std::asin(std::sqrt(3.0 / 7.0)));
}

}  // namespace critical

enum class Verdict { UniqueGroundState, ThresholdFamily, NoMinimizerZeroInfimum, UnboundedBelow };
enum class Infimum { FiniteNegative, Zero, MinusInfinity };

inline std::string_view to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::UniqueGroundState: return "UniqueGroundState";
        case Verdict::ThresholdFamily: return "ThresholdFamily";
        case Verdict::NoMinimizerZeroInfimum: return "NoMinimizerZeroInfimum";
        case Verdict::UnboundedBelow: return "UnboundedBelow";
    }
    return "?";
}

inline std::string_view to_string(Infimum i) noexcept {
    switch (i) {
        case Infimum::FiniteNegative: return "finite-negative";
        case Infimum::Zero: return "zero";
        case Infimum::MinusInfinity: return "minus-infinity";
    }
    return "?";
}

struct RegimeClassification {
    Verdict verdict;
    Infimum infimum;
    std::optional<double> critical_mass;

    friend bool operator==(const RegimeClassification&, const RegimeClassification&) = default;
};

/// Thrown when an operation needs a regime the (params, mass) pair is not in.
class RegimeError : public std::runtime_error {
public:
    RegimeError(const std::string& what, RegimeClassification c)
        : std::runtime_error(what + " (verdict " + std::string(to_string(c.verdict)) + ")"),
          classification_(c) {}

    const RegimeClassification& classification() const noexcept { return classification_; }

private:
    RegimeClassification classification_;
};

namespace detail {

// Critical regime: zero infimum below the threshold, family at it, -inf above.
inline RegimeClassification critical_only(double mu, double mc) {
    if (mu < mc) return {Verdict::NoMinimizerZeroInfimum, Infimum::Zero, mc};
    if (mu == mc) return {Verdict::ThresholdFamily, Infimum::Zero, mc};
    return {Verdict::UnboundedBelow, Infimum::MinusInfinity, mc};
}

// One critical and one subcritical term: unique ground states strictly below
// the threshold, -inf from the threshold on.
inline RegimeClassification single_critical(double mu, double mc) {
    if (mu < mc) return {Verdict::UniqueGroundState, Infimum::FiniteNegative, mc};
    return {Verdict::UnboundedBelow, Infimum::MinusInfinity, mc};
}

}  // namespace detail

inline RegimeClassification classify_regime(const EnergyParams& params, const MassConstraint& mass) {
    const double mu = mass.value();
    const bool pc = params.standard_critical();
    const bool qc = params.point_critical();
    constexpr RegimeClassification subcritical{Verdict::UniqueGroundState, Infimum::FiniteNegative,
                                               std::nullopt};

    switch (params.functional()) {
        case EnergyParams::Functional::Pointwise:
            return qc ? detail::critical_only(mu, critical::point_mass()) : subcritical;
        case EnergyParams::Functional::Standard:
            return pc ? detail::critical_only(mu, critical::standard_mass()) : subcritical;
        case EnergyParams::Functional::Doubly:
            if (pc && qc) return detail::critical_only(mu, critical::doubly_critical_mass());
            if (pc) return detail::single_critical(mu, critical::standard_mass());
            if (qc) return detail::single_critical(mu, critical::point_mass());
            return subcritical;
    }
    return subcritical;
}

/// Uniform grid on [-L, L] with an odd number of nodes, the middle one at 0.
class Grid {
public:
    Grid(double half_width, std::size_t count) : half_width_(half_width), count_(count) {
        if (!(std::isfinite(half_width) && half_width > 0.0))
            throw ParameterError("grid half width must be positive");
        if (count < 3 || count % 2 == 0)
            throw ParameterError("grid node count must be odd and at least 3, got " +
                                 std::to_string(count));
        spacing_ = 2.0 * half_width / static_cast<double>(count - 1);
    }

    double half_width() const noexcept { return half_width_; }
    std::size_t count() const noexcept { return count_; }
    double spacing() const noexcept { return spacing_; }
    std::size_t center() const noexcept { return (count_ - 1) / 2; }

    /// Node i, built as (i - center) h so the origin and the mirror symmetry are exact.
    double node(std::size_t i) const noexcept {
        const auto offset = static_cast<double>(static_cast<std::ptrdiff_t>(i) -
                                                static_cast<std::ptrdiff_t>(center()));
        return offset * spacing_;
    }

    std::vector<double> nodes() const {
        std::vector<double> x(count_);
        for (std::size_t i = 0; i < count_; ++i) x[i] = node(i);
        return x;
    }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    double half_width_;
    std::size_t count_;
    double spacing_ = 0.0;
};

inline Grid make_grid(double half_width, std::size_t count) { return Grid(half_width, count); }

/// Samples of a real function on a Grid.
class GridFunction {
public:
    explicit GridFunction(Grid grid) : grid_(grid), values_(grid.count(), 0.0) {}

    GridFunction(Grid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
        if (values_.size() != grid_.count())
            throw ParameterError("value count does not match the grid");
    }

    const Grid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }

    double operator[](std::size_t i) const noexcept { return values_[i]; }
    double& operator[](std::size_t i) noexcept { return values_[i]; }

    double at_origin() const noexcept { return values_[grid_.center()]; }

    /// max(|u(-L)|, |u(L)|).
    double tail() const noexcept { return std::max(std::abs(values_.front()), std::abs(values_.back())); }

    bool all_finite() const noexcept {
        for (double v : values_)
            if (!std::isfinite(v)) return false;
        return true;
    }

private:
    Grid grid_;
    std::vector<double> values_;
};

/// Pointwise samples of a callable on the grid nodes.
template <class Profile>
GridFunction sample(const Profile& profile, const Grid& grid) {
    std::vector<double> values(grid.count());
    for (std::size_t i = 0; i < grid.count(); ++i) {
        const double x = grid.node(i);
        const double v = profile(x);
        if (!std::isfinite(v))
            throw NumericalError("non-finite sample at node " + std::to_string(i) + " (x = " +
                                     std::to_string(x) + ")",
                                 static_cast<std::ptrdiff_t>(i));
        values[i] = v;
    }
    return GridFunction(grid, std::move(values));
}

}  // namespace deltanls
