#include <cmath>

#include <gtest/gtest.h>

#include "rou/quadrature.hpp"

using namespace rou;

TEST(Quadrature, PolynomialIsExact) {
    const auto r = integrate([](double x) { return x * x * x - 2 * x; }, -1.0, 3.0);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.value, 20.0 - 8.0, 1e-13);
}

TEST(Quadrature, GaussianMass) {
    const auto r = integrate([](double x) { return std::exp(-x * x / 2); }, -12.0, 12.0);
    EXPECT_NEAR(r.value, std::sqrt(2 * M_PI), 1e-12);
}

TEST(Quadrature, ReversedLimitsNegate) {
    auto f = [](double x) { return std::cos(x); };
    EXPECT_DOUBLE_EQ(integrate(f, 2.0, 0.0).value, -integrate(f, 0.0, 2.0).value);
}

TEST(Quadrature, SqrtEndpointSingularityConverges) {
    const auto r = integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0, {1e-12, 1e-12, 4000});
    EXPECT_NEAR(r.value, 2.0 / 3.0, 1e-10);
}

TEST(Quadrature, PiecewiseSumsPanels) {
    auto f = [](double x) { return std::exp(-x); };
    const auto r = integrate_piecewise(f, {0.0, 0.5, 2.0, 10.0});
    EXPECT_NEAR(r.value, 1.0 - std::exp(-10.0), 1e-13);
}

TEST(Quadrature, Deterministic) {
    auto f = [](double x) { return std::sin(10 * x) * std::exp(-x); };
    EXPECT_EQ(integrate(f, 0.0, 7.0).value, integrate(f, 0.0, 7.0).value);
}
