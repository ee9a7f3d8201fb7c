#include <cmath>

#include <gtest/gtest.h>

#include "rou/normal.hpp"

using namespace rou;

namespace {

struct MillsCase {
    double z;
    double value;
};

// 50-digit reference values (mpmath), rounded to double.
const MillsCase kMills[] = {
    {-5.0, 672621.63672287925}, {-1.0, 3.4770518117036945},   {0.0, 1.2533141373155003},
    {0.5, 0.87636445645369235}, {2.0, 0.42136922928805447},   {2.9, 0.31344865828623178},
    {3.1, 0.29619124799152701}, {10.0, 0.099028596471731921}, {30.0, 0.033296419072497213},
    {40.0, 0.024984404205720571},
};

}  // namespace

TEST(Normal, MillsRatioMatchesReference) {
    for (const auto& c : kMills) {
        EXPECT_NEAR(mills_ratio(c.z) / c.value, 1.0, 1e-13) << "z=" << c.z;
        EXPECT_NEAR(log_mills_ratio(c.z), std::log(c.value), 1e-13) << "z=" << c.z;
    }
}

TEST(Normal, LogMillsRatioIsFiniteFarLeft) {
    // Mills(z) ~ sqrt(2 pi) exp(z^2/2) for z -> -inf.
    const double z = -60.0;
    EXPECT_TRUE(std::isinf(mills_ratio(z)));
    EXPECT_NEAR(log_mills_ratio(z), z * z / 2 + std::log(std::sqrt(2 * M_PI)), 1e-10);
}

TEST(Normal, MillsRatioContinuousAcrossBranches) {
    for (double z : {0.0, 5.0 * std::sqrt(2.0)}) {
        const double below = mills_ratio(std::nextafter(z, -1.0));
        const double above = mills_ratio(z);
        EXPECT_NEAR(below / above, 1.0, 1e-14);
    }
}

TEST(Normal, CdfValues) {
    EXPECT_DOUBLE_EQ(normal_cdf(0.0), 0.5);
    EXPECT_NEAR(normal_cdf(1.0), 0.84134474606854295, 1e-15);
    EXPECT_NEAR(normal_pdf(0.0) * 2, 0.79788456080286536, 1e-15);
    EXPECT_NEAR(normal_sf(1.0) + normal_cdf(1.0), 1.0, 1e-15);
    EXPECT_NEAR(log_normal_sf(40.0), -800.0 - std::log(std::sqrt(2 * M_PI)) + std::log(0.024984404205720571), 1e-12);
}

TEST(Normal, ErfcxAgreesWithDefinition) {
    for (double x : {-3.0, -0.5, 0.0, 0.7, 2.0, 4.9, 5.0, 8.0}) {
        EXPECT_NEAR(erfcx(x) / (std::exp(x * x) * std::erfc(x)), 1.0, 1e-13) << x;
    }
    EXPECT_NEAR(erfcx(1e4) * 1e4 * std::sqrt(M_PI), 1.0, 1e-8);
}
