#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "deltanls/core.hpp"
#include "oracle_values.hpp"

using namespace deltanls;

TEST(EnergyParams, ActiveTermsSelectTheFunctional) {
    EXPECT_EQ(EnergyParams::doubly(4, 3).functional(), EnergyParams::Functional::Doubly);
    EXPECT_EQ(EnergyParams::pointwise(3).functional(), EnergyParams::Functional::Pointwise);
    EXPECT_EQ(EnergyParams::standard(5).functional(), EnergyParams::Functional::Standard);
    EXPECT_EQ(EnergyParams::doubly(4, 3).label(), "F_{4,3}");
    EXPECT_EQ(EnergyParams::pointwise(3.5).label(), "D_{3.5}");
    EXPECT_EQ(EnergyParams::standard(6).label(), "E_{6}");
}

TEST(EnergyParams, RejectsPowersOutsideTheBox) {
    EXPECT_THROW(EnergyParams::make(std::nullopt, std::nullopt), ParameterError);
    EXPECT_THROW(EnergyParams::doubly(2.0, 3), ParameterError);
    EXPECT_THROW(EnergyParams::doubly(6.0000001, 3), ParameterError);
    EXPECT_THROW(EnergyParams::doubly(4, 2.0), ParameterError);
    EXPECT_THROW(EnergyParams::doubly(4, 4.5), ParameterError);
    EXPECT_THROW(EnergyParams::doubly(std::numeric_limits<double>::quiet_NaN(), 3), ParameterError);
    EXPECT_THROW(EnergyParams::standard(1.5), ParameterError);
    EXPECT_NO_THROW(EnergyParams::doubly(6, 4));
    EXPECT_NO_THROW(EnergyParams::doubly(2.0000001, 2.0000001));
}

TEST(EnergyParams, InactivePowerAccessThrows) {
    EXPECT_THROW(EnergyParams::pointwise(3).p(), ParameterError);
    EXPECT_THROW(EnergyParams::standard(4).q(), ParameterError);
}

TEST(EnergyParams, CriticalityIsExactEquality) {
    EXPECT_TRUE(EnergyParams::doubly(6, 3).standard_critical());
    EXPECT_FALSE(EnergyParams::doubly(std::nextafter(6.0, 0.0), 3).standard_critical());
    EXPECT_TRUE(EnergyParams::pointwise(4).point_critical());
    EXPECT_FALSE(EnergyParams::pointwise(std::nextafter(4.0, 0.0)).point_critical());
}

TEST(MassConstraint, MustBePositiveAndFinite) {
    EXPECT_THROW(MassConstraint{0.0}, ParameterError);
    EXPECT_THROW(MassConstraint{-1.0}, ParameterError);
    EXPECT_THROW(MassConstraint{std::numeric_limits<double>::infinity()}, ParameterError);
    EXPECT_DOUBLE_EQ(MassConstraint{2.5}.value(), 2.5);
}

TEST(CriticalMasses, ClosedForms) {
    EXPECT_EQ(critical::point_mass(), 2.0);
    EXPECT_NEAR(critical::standard_mass(), oracle::kStandardCriticalMass, 1e-15);
    EXPECT_NEAR(critical::doubly_critical_mass(), oracle::kMuStar, 1e-15);
    EXPECT_LT(critical::doubly_critical_mass(), critical::point_mass());
}

TEST(ClassifyRegime, Examples) {
    auto v = [](EnergyParams p, double mu) { return classify_regime(p, MassConstraint{mu}); };

    auto r = v(EnergyParams::doubly(4, 3), 1.0);
    EXPECT_EQ(r.verdict, Verdict::UniqueGroundState);
    EXPECT_EQ(r.infimum, Infimum::FiniteNegative);
    EXPECT_FALSE(r.critical_mass);

    r = v(EnergyParams::pointwise(4), 2.0);
    EXPECT_EQ(r.verdict, Verdict::ThresholdFamily);
    EXPECT_EQ(r.infimum, Infimum::Zero);

    r = v(EnergyParams::doubly(6, 4), 1.0);
    EXPECT_EQ(r.verdict, Verdict::NoMinimizerZeroInfimum);

    r = v(EnergyParams::doubly(6, 3), 2.8);
    EXPECT_EQ(r.verdict, Verdict::UnboundedBelow);
    EXPECT_EQ(r.infimum, Infimum::MinusInfinity);
}

TEST(ClassifyRegime, BoundaryMasses) {
    const double m6 = critical::standard_mass();
    const double ms = critical::doubly_critical_mass();
    auto verdict = [](EnergyParams p, double mu) { return classify_regime(p, MassConstraint{mu}).verdict; };

    EXPECT_EQ(verdict(EnergyParams::doubly(4, 4), 2.0), Verdict::UnboundedBelow);
    EXPECT_EQ(verdict(EnergyParams::doubly(4, 4), std::nextafter(2.0, 0.0)), Verdict::UniqueGroundState);
    EXPECT_EQ(verdict(EnergyParams::doubly(6, 3), m6), Verdict::UnboundedBelow);
    EXPECT_EQ(verdict(EnergyParams::doubly(6, 3), std::nextafter(m6, 0.0)), Verdict::UniqueGroundState);
    EXPECT_EQ(verdict(EnergyParams::standard(6), m6), Verdict::ThresholdFamily);
    EXPECT_EQ(verdict(EnergyParams::standard(6), 1.0), Verdict::NoMinimizerZeroInfimum);
    EXPECT_EQ(verdict(EnergyParams::doubly(6, 4), ms), Verdict::ThresholdFamily);
    EXPECT_EQ(verdict(EnergyParams::doubly(6, 4), std::nextafter(ms, 10.0)), Verdict::UnboundedBelow);
    EXPECT_EQ(verdict(EnergyParams::pointwise(4), std::nextafter(2.0, 10.0)), Verdict::UnboundedBelow);
    EXPECT_EQ(verdict(EnergyParams::pointwise(3), 1e6), Verdict::UniqueGroundState);
    EXPECT_EQ(verdict(EnergyParams::standard(5), 1e-6), Verdict::UniqueGroundState);
}

// Random (params, mass) in the admissible box: the verdict and infimum must
// agree, and crossing the critical mass must change the verdict to unbounded.
TEST(ClassifyRegime, PropertyConsistencyAndThresholds) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
        const int kind = static_cast<int>(unit(rng) * 3);
        std::optional<double> p, q;
        if (kind != 1) p = unit(rng) < 0.3 ? 6.0 : 2.0 + 4.0 * (1.0 - unit(rng));
        if (kind != 2) q = unit(rng) < 0.3 ? 4.0 : 2.0 + 2.0 * (1.0 - unit(rng));
        const auto params = EnergyParams::make(p, q);
        const double mu = 0.01 + 5.0 * unit(rng);
        const auto r = classify_regime(params, MassConstraint{mu});

        EXPECT_EQ(r.verdict == Verdict::UnboundedBelow, r.infimum == Infimum::MinusInfinity);
        if (r.verdict == Verdict::ThresholdFamily || r.verdict == Verdict::NoMinimizerZeroInfimum) {
            EXPECT_EQ(r.infimum, Infimum::Zero);
        }
        if (r.verdict == Verdict::UniqueGroundState) {
            EXPECT_EQ(r.infimum, Infimum::FiniteNegative);
        }

        if (r.critical_mass) {
            const double mc = *r.critical_mass;
            const auto below = classify_regime(params, MassConstraint{mc * 0.999});
            const auto above = classify_regime(params, MassConstraint{mc * 1.001});
            EXPECT_NE(below.verdict, above.verdict);
            EXPECT_EQ(above.verdict, Verdict::UnboundedBelow);
        } else {
            EXPECT_EQ(r.verdict, Verdict::UniqueGroundState);
        }
    }
}

TEST(Grid, SmallestGrid) {
    const Grid g = make_grid(1.0, 3);
    EXPECT_EQ(g.spacing(), 1.0);
    EXPECT_EQ(g.nodes(), (std::vector<double>{-1.0, 0.0, 1.0}));
}

TEST(Grid, SpacingAndOrigin) {
    const Grid g = make_grid(40.0, 4001);
    EXPECT_DOUBLE_EQ(g.spacing(), 0.02);
    EXPECT_EQ(g.center(), 2000u);
    EXPECT_EQ(g.node(2000), 0.0);
}

TEST(Grid, RejectsBadShapes) {
    EXPECT_THROW(make_grid(1.0, 4), ParameterError);
    EXPECT_THROW(make_grid(1.0, 1), ParameterError);
    EXPECT_THROW(make_grid(0.0, 5), ParameterError);
    EXPECT_THROW(make_grid(-1.0, 5), ParameterError);
}

TEST(Grid, OriginAndMirrorAreExact) {
    for (std::size_t n : {3u, 5u, 101u, 8001u, 12001u}) {
        for (double L : {0.3, 1.0, 40.0, 783.7}) {
            const Grid g(L, n);
            EXPECT_EQ(g.node(g.center()), 0.0);
            for (std::size_t k = 1; k <= g.center(); k += 37) EXPECT_EQ(g.node(g.center() + k), -g.node(g.center() - k));
        }
    }
}

TEST(Sample, Examples) {
    const Grid g(40.0, 4001);
    const auto zero = sample([](double) { return 0.0; }, g);
    for (double v : zero.values()) EXPECT_EQ(v, 0.0);
    const auto e = sample([](double x) { return std::exp(-std::abs(x)); }, g);
    EXPECT_EQ(e.at_origin(), 1.0);
    EXPECT_NEAR(e.tail(), std::exp(-40.0), 1e-30);
}

TEST(Sample, NonFiniteValueReportsNode) {
    const Grid g(1.0, 5);
    try {
        sample([](double x) { return x > 0.4 ? std::numeric_limits<double>::infinity() : 1.0; }, g);
        FAIL() << "expected NumericalError";
    } catch (const NumericalError& e) {
        EXPECT_EQ(e.node(), 3);
    }
}

TEST(GridFunction, SizeMismatchRejected) {
    EXPECT_THROW(GridFunction(Grid(1.0, 5), std::vector<double>(4)), ParameterError);
}
