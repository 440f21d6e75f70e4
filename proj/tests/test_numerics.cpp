#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "deltanls/quadrature.hpp"
#include "deltanls/roots.hpp"

using namespace deltanls;

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
    // 20 points: exact through degree 39.
    for (int k = 0; k <= 39; ++k) {
        const double got = quadrature::gauss_legendre_panel([k](double x) { return std::pow(x, k); }, 0.0, 1.0);
        EXPECT_NEAR(got, 1.0 / (k + 1), 1e-15) << "degree " << k;
    }
}

TEST(GaussLegendre, WeightsSumToTwo) {
    const auto& r = quadrature::gauss_legendre<20>();
    double s = 0.0;
    for (double w : r.weights) s += w;
    EXPECT_NEAR(s, 2.0, 1e-15);
}

TEST(Integrate, SmoothAndSingularIntegrands) {
    EXPECT_NEAR(quadrature::integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi), 2.0, 1e-14);
    // Square-root cusp at the right end.
    EXPECT_NEAR(quadrature::integrate([](double x) { return std::sqrt(1.0 - x); }, 0.0, 1.0), 2.0 / 3.0, 1e-13);
    // Integrable x^{-1/2} singularity.
    EXPECT_NEAR(quadrature::integrate([](double x) { return x > 0 ? 1.0 / std::sqrt(x) : 0.0; }, 0.0, 1.0), 2.0,
                1e-9);
    EXPECT_NEAR(quadrature::integrate([](double x) { return std::exp(x); }, 1.0, 0.0), 1.0 - std::exp(1.0), 1e-14);
    EXPECT_EQ(quadrature::integrate([](double) { return 1.0; }, 2.0, 2.0), 0.0);
}

TEST(Integrate, NonFiniteIntegrandThrows) {
    EXPECT_THROW(quadrature::integrate([](double) { return std::nan(""); }, 0.0, 1.0), NumericalError);
}

TEST(BisectThenNewton, FindsRoots) {
    auto f = [](double x) { return x * x * x - 2.0; };
    auto df = [](double x) { return 3.0 * x * x; };
    EXPECT_NEAR(roots::bisect_then_newton(f, f, df, 0.0, 2.0), std::cbrt(2.0), 1e-15);
    // Residual in log form, Newton on the raw function.
    auto lg = [](double x) { return std::log(x) - std::log(7.0); };
    auto g = [](double x) { return x - 7.0; };
    auto dg = [](double) { return 1.0; };
    EXPECT_NEAR(roots::bisect_then_newton(lg, g, dg, 1e-3, 1e3), 7.0, 1e-13);
}

TEST(BisectThenNewton, RejectsMissingBracket) {
    auto f = [](double x) { return x - 5.0; };
    auto df = [](double) { return 1.0; };
    EXPECT_THROW(roots::bisect_then_newton(f, f, df, 0.0, 1.0), NumericalError);
    EXPECT_THROW(roots::bisect_then_newton(f, f, df, 1.0, 0.0), ParameterError);
}
