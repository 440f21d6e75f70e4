#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

#include "deltanls/analytic.hpp"
#include "deltanls/core.hpp"
#include "deltanls/errors.hpp"

namespace deltanls {

struct PhaseRow {
    double mu;
    RegimeClassification regime;
};

/// Regime of every mass in an evenly spaced sweep, ascending in mu. The
/// closed-form critical mass is added as its own row when it falls inside
/// the sweep, so the row at the threshold is always present.
inline std::vector<PhaseRow> phase_sweep(const EnergyParams& params, double mu_min, double mu_max, std::size_t steps,
                                         bool include_critical = true) {
    if (!(std::isfinite(mu_min) && std::isfinite(mu_max) && mu_min > 0.0 && mu_min < mu_max))
        throw ParameterError("sweep bounds must satisfy 0 < mu_min < mu_max");
    if (steps < 2) throw ParameterError("a sweep needs at least 2 steps");

    std::vector<double> masses(steps);
    const double last = static_cast<double>(steps - 1);
    for (std::size_t i = 0; i < steps; ++i) {
        const double k = static_cast<double>(i);
        masses[i] = (mu_min * (last - k) + mu_max * k) / last;
    }
    if (const auto mc = critical_mass(params); include_critical && mc && *mc >= mu_min && *mc <= mu_max)
        masses.push_back(*mc);
    std::sort(masses.begin(), masses.end());
    masses.erase(std::unique(masses.begin(), masses.end()), masses.end());

    std::vector<PhaseRow> rows;
    rows.reserve(masses.size());
    for (double mu : masses) rows.push_back({mu, classify_regime(params, MassConstraint{mu})});
    return rows;
}

/// Masses at which the verdict changes between consecutive rows.
inline std::vector<double> verdict_transitions(const std::vector<PhaseRow>& rows) {
    std::vector<double> out;
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].regime.verdict != rows[i - 1].regime.verdict) out.push_back(rows[i].mu);
    return out;
}

}  // namespace deltanls
