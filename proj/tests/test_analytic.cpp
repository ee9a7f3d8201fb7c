#include <cmath>
#include <random>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <gtest/gtest.h>

#include "rou/analytic.hpp"
#include "rou/error.hpp"

using namespace rou;

namespace {

const double kSqrt2 = std::sqrt(2.0);

// 50-digit reference values (mpmath), rounded to double.
constexpr double kHalfNormalDensity0 = 0.79788456080286536;
constexpr double kHalfNormalDensity1 = 0.48394144903828670;
constexpr double kW1 = 0.60653065971263342;
constexpr double kHPrime1 = 0.52315658373024674;
constexpr double kH1 = 0.71961847856006965;
constexpr double kTau2S0 = 0.88254240061060637;
constexpr double kTau2Unit = 0.098241649562717945;
constexpr double kQUnit = 0.11263562131432873;
constexpr double kDoublyQ = 0.70887490522720679;
constexpr double kDoublyQdSmall = 0.99999966666671111;
constexpr double kQSmallGamma = 5.0009996003994091;

OUParams s0() { return {0.0, 1.0, kSqrt2}; }
const BoundarySpec kLower0 = BoundarySpec::lower_at(0.0);

std::vector<OUParams> random_params(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> a(-3, 3), g(0.1, 3), s(0.2, 3);
    std::vector<OUParams> out;
    for (std::size_t i = 0; i < n; ++i) {
        const double alpha = a(gen), gamma = g(gen), sigma = s(gen);
        out.emplace_back(alpha, gamma, sigma);
    }
    return out;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

template <class F>
ErrorCode code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::InvalidConfig;
}

}  // namespace

TEST(Weight, Values) {
    EXPECT_DOUBLE_EQ(weight_W(s0(), 0.0), 1.0);
    EXPECT_NEAR(weight_W(s0(), 1.0), kW1, 2e-16);
    EXPECT_NEAR(log_weight_W(s0(), 1.0), -0.5, 2e-16);
}

TEST(StationaryLaw, HalfNormalDensity) {
    const StationaryLaw law(s0(), kLower0);
    EXPECT_NEAR(law.density(0.0), kHalfNormalDensity0, 1e-15);
    EXPECT_NEAR(law.density(1.0), kHalfNormalDensity1, 1e-15);
    EXPECT_EQ(law.density(-0.1), 0.0);
    EXPECT_EQ(law.cdf(-1.0), 0.0);
    EXPECT_NEAR(law.cdf(1.0), 2 * 0.84134474606854295 - 1, 1e-15);
    EXPECT_NEAR(law.boundary_density(), kHalfNormalDensity0, 1e-15);
}

TEST(StationaryLaw, UpperBarrierMirrors) {
    const StationaryLaw up(s0(), BoundarySpec::upper_at(0.0));
    EXPECT_NEAR(up.density(-1.0), kHalfNormalDensity1, 1e-15);
    EXPECT_EQ(up.density(0.5), 0.0);
    EXPECT_NEAR(up.cdf(-1.0), 1 - (2 * 0.84134474606854295 - 1), 1e-15);
}

TEST(StationaryLaw, RejectsTwoBarriers) {
    EXPECT_EQ(code_of([] { StationaryLaw(s0(), BoundarySpec::interval(0, 1)); }),
              ErrorCode::DoublyReflectedUnsupported);
}

TEST(StationaryLaw, QuantileInvertsTail) {
    for (const auto& b : {kLower0, BoundarySpec::upper_at(0.3)}) {
        const StationaryLaw law(OUParams(0.7, 2.0, 0.9), b);
        for (double p : {1e-9, 0.01, 0.3, 0.5, 0.9, 1 - 1e-9}) {
            const double y = law.quantile_from_barrier(p);
            EXPECT_NEAR(law.tail_from_barrier(y), p, 1e-12);
        }
    }
}

TEST(StationaryMean, Examples) {
    EXPECT_NEAR(stationary_mean(s0(), kLower0), kHalfNormalDensity0, 1e-15);
    EXPECT_NEAR(stationary_mean(OUParams(10, 1, 1), kLower0), 10.0, 1e-6);
    EXPECT_NEAR(stationary_mean(s0(), BoundarySpec::upper_at(0.0)), -kHalfNormalDensity0, 1e-15);
}

TEST(BoundaryRate, Examples) {
    EXPECT_NEAR(boundary_rate(s0(), kLower0), kHalfNormalDensity0, 1e-15);
    EXPECT_NEAR(boundary_rate(s0(), BoundarySpec::upper_at(0.0)), kHalfNormalDensity0, 1e-15);
    EXPECT_NEAR(boundary_rate(OUParams(1, 1, 1), kLower0), kQUnit, 1e-15);
    EXPECT_NEAR(rel(boundary_rate(OUParams(-5, 0.01, 1), kLower0), kQSmallGamma), 0.0, 1e-13);
}

TEST(DoublyLossRate, Examples) {
    EXPECT_NEAR(doubly_loss_rate(s0(), 1.0), kDoublyQ, 1e-13);
    EXPECT_NEAR(doubly_loss_rate(s0(), 1e-3) * 1e-3, kDoublyQdSmall, 1e-13);
    EXPECT_EQ(code_of([] { doubly_loss_rate(s0(), 0.0); }), ErrorCode::NonPositiveWidth);
    EXPECT_EQ(code_of([] { doubly_loss_rate(s0(), -1.0); }), ErrorCode::NonPositiveWidth);
}

TEST(DoublyLossRate, PositiveAndMatchesOracle) {
    boost::math::quadrature::tanh_sinh<double> ts;
    for (const auto& p : random_params(40, 11)) {
        for (double d : {0.05, 0.7, 3.0}) {
            const double q = doubly_loss_rate(p, d);
            ASSERT_GT(q, 0.0);
            // sigma^2/2 / int_0^d W(v)/W(d) dv
            auto f = [&](double v) { return std::exp(log_weight_W(p, v) - log_weight_W(p, d)); };
            const double oracle = p.sigma() * p.sigma() / 2 / ts.integrate(f, 0.0, d);
            EXPECT_LT(rel(q, oracle), 1e-10) << p.alpha() << ' ' << p.gamma() << ' ' << p.sigma() << ' ' << d;
        }
    }
}

TEST(HPrime, Examples) {
    EXPECT_DOUBLE_EQ(h_prime(s0(), kLower0, 0.0), 1.0);
    EXPECT_NEAR(h_prime(s0(), kLower0, 1.0), kHPrime1, 1e-15);
    EXPECT_LT(rel(50 * h_prime(s0(), kLower0, 50.0), kHalfNormalDensity0), 1e-3);
    EXPECT_EQ(code_of([] { h_prime(s0(), kLower0, -0.5); }), ErrorCode::OutOfSupport);
}

TEST(HValue, Examples) {
    EXPECT_EQ(h_value(s0(), kLower0, 0.0), 0.0);
    EXPECT_NEAR(h_value(s0(), kLower0, 1.0), kH1, 1e-13);
    EXPECT_EQ(h_value(OUParams(0.3, 2, 0.5), BoundarySpec::upper_at(0.4), 0.4), 0.0);
    // Derivative of h matches h' for an upper barrier as well.
    const OUParams p(0.3, 2, 0.5);
    const auto b = BoundarySpec::upper_at(0.4);
    const double e = 1e-4;
    const double fd = (h_value(p, b, 0.1 + e) - h_value(p, b, 0.1 - e)) / (2 * e);
    EXPECT_NEAR(fd, h_prime(p, b, 0.1), 1e-7);
}

TEST(AsymptoticVariance, Examples) {
    EXPECT_LT(rel(asymptotic_variance(s0(), kLower0), kTau2S0), 1e-10);
    EXPECT_LT(rel(asymptotic_variance(OUParams(1, 1, 1), kLower0), kTau2Unit), 1e-10);
    const auto rv = rate_and_variance(OUParams(1, 1, 1), kLower0);
    EXPECT_NEAR(rv.q, kQUnit, 1e-15);
    EXPECT_LT(rel(rv.tau2, kTau2Unit), 1e-10);
}

TEST(AsymptoticVariance, MatchesIndependentQuadrature) {
    // tau^2 = sigma^2 int h'(x)^2 p(x) dx with h' from its defining ratio
    // p(barrier) P(Y > x) / p(x), all through boost erfc.
    for (const auto& p : random_params(25, 5)) {
        const double m = p.mean(), s = p.sd();
        const double u0 = -m / s;
        if (u0 > 6) continue;  // tail ratio loses precision there; covered by the identity sweeps
        auto tail = [&](double x) { return 0.5 * boost::math::erfc((x - m) / (s * kSqrt2)); };
        auto pdf = [&](double x) { return std::exp(-0.5 * ((x - m) / s) * ((x - m) / s)); };
        const double mass = tail(0.0);
        auto f = [&](double x) {
            const double hp = pdf(0.0) * tail(x) / (pdf(x) * mass);
            return hp * hp * pdf(x) / (s * std::sqrt(2 * M_PI) * mass);
        };
        const double hi = std::max(m, 0.0) + 10 * s;
        const double oracle = p.sigma() * p.sigma() *
                              boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, hi, 15, 1e-14);
        EXPECT_LT(rel(asymptotic_variance(p, kLower0), oracle), 1e-8)
            << p.alpha() << ' ' << p.gamma() << ' ' << p.sigma();
    }
}

TEST(Identities, WeightTimesBarrierDensity) {
    for (const auto& p : random_params(50, 3)) {
        const StationaryLaw law(p, kLower0);
        const double hi = std::max(p.mean(), 0.0) + 6 * p.sd();
        for (int i = 0; i <= 40; ++i) {
            const double y = hi * i / 40;
            const double lhs = log_weight_W(p, y) + law.log_density(0.0);
            const double rhs = law.log_density(y);
            // Relative 1e-12 on p is absolute 1e-12 on log p.
            EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, std::abs(rhs))) << y;
            if (std::abs(lhs) < 700) EXPECT_LT(rel(weight_W(p, y) * law.density(0.0), law.density(y)), 1e-12);
        }
    }
}

TEST(Identities, MeanMatchesQuadrature) {
    boost::math::quadrature::exp_sinh<double> es(12);
    for (const auto& p : random_params(100, 1)) {
        const StationaryLaw law(p, kLower0);
        const double oracle = es.integrate([&](double y) { return y * law.density(y); }, 0.0,
                                           std::numeric_limits<double>::infinity(), 1e-14);
        EXPECT_LT(rel(stationary_mean(p, kLower0), oracle), 1e-9) << p.alpha() << ' ' << p.gamma() << ' ' << p.sigma();
    }
}

TEST(Identities, HPrimeSolvesGeneratorEquation) {
    // h'(x) = p(0) int_x^inf W(v)/W(x) dv solves Lh = -q with h'(0) = 1.
    boost::math::quadrature::exp_sinh<double> es(12);
    for (const auto& p : random_params(20, 9)) {
        const StationaryLaw law(p, kLower0);
        const double hi = std::max(p.mean(), 0.0) + 6 * p.sd();
        for (int i = 0; i <= 12; ++i) {
            const double x = hi * i / 12;
            const double lw = log_weight_W(p, x);
            const double integral = es.integrate(
                [&](double t) { return std::exp(log_weight_W(p, x + t) - lw); }, 0.0,
                std::numeric_limits<double>::infinity(), 1e-14);
            EXPECT_LT(rel(h_prime(p, kLower0, x), law.density(0.0) * integral), 1e-8) << x;
        }
    }
}

TEST(Identities, TranslationAndFlip) {
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> shift(-2, 2);
    for (const auto& p : random_params(50, 23)) {
        const double l = shift(gen);
        const OUParams moved = p.with_alpha(p.alpha() - p.gamma() * l);
        const auto base = rate_and_variance(moved, kLower0);
        const auto shifted = rate_and_variance(p, BoundarySpec::lower_at(l));
        EXPECT_LT(rel(shifted.q, base.q), 1e-12);
        EXPECT_LT(rel(shifted.tau2, base.tau2), 1e-10);
        EXPECT_NEAR(stationary_mean(p, BoundarySpec::lower_at(l)) - l, stationary_mean(moved, kLower0),
                    1e-12 * (std::abs(l) + std::abs(stationary_mean(moved, kLower0))));

        const double d = shift(gen);
        const OUParams flipped = p.with_alpha(p.gamma() * d - p.alpha());
        const auto lower = rate_and_variance(flipped, kLower0);
        const auto upper = rate_and_variance(p, BoundarySpec::upper_at(d));
        EXPECT_LT(rel(upper.q, lower.q), 1e-12);
        EXPECT_LT(rel(upper.tau2, lower.tau2), 1e-10);
        EXPECT_NEAR(d - stationary_mean(p, BoundarySpec::upper_at(d)), stationary_mean(flipped, kLower0),
                    1e-12 * (std::abs(d) + std::abs(stationary_mean(flipped, kLower0))));
    }
}

TEST(GeneratorResidual, Examples) {
    const double s = s0().sd();
    EXPECT_LT(std::abs(generator_residual(s0(), kLower0, 0.5, 1e-5 * s)), 1e-6);
    EXPECT_LT(std::abs(generator_residual(s0(), kLower0, 3.0, 1e-5 * s)), 1e-6);
}

TEST(GeneratorResidual, SweepBothBarrierSides) {
    for (const auto& p : random_params(20, 31)) {
        for (const auto& b : {kLower0, BoundarySpec::upper_at(0.0)}) {
            const bool up = b.upper().has_value();
            const double m = p.mean(), s = p.sd();
            const double far = up ? std::min(m, 0.0) - 5 * s : std::max(m, 0.0) + 5 * s;
            for (int i = 0; i < 50; ++i) {
                const double x = far * i / 49;
                EXPECT_LT(std::abs(generator_residual(p, b, x, 1e-5 * s)), 1e-6) << x;
            }
        }
    }
}
