#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "arbhedge/black_scholes.hpp"
#include "arbhedge/errors.hpp"

using namespace arbhedge;

namespace {

// Discounted expectation of the payoff under the lognormal law, by composite
// Simpson in the standard normal variable from the exercise boundary up.
// Shares no code with bs_price.
double quadrature_call(double spot, double strike, double r, double sigma, double tau) {
    const int n = 200000;
    const double kink = (std::log(strike / spot) - (r - 0.5 * sigma * sigma) * tau) / (sigma * std::sqrt(tau));
    const double lo = std::max(kink, -12.0), hi = 12.0, h = (hi - lo) / n;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double z = lo + i * h;
        const double st = spot * std::exp((r - 0.5 * sigma * sigma) * tau + sigma * std::sqrt(tau) * z);
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        acc += w * std::max(st - strike, 0.0) * std::exp(-0.5 * z * z);
    }
    return std::exp(-r * tau) * acc * h / 3.0 / std::sqrt(2.0 * M_PI);
}

}  // namespace

TEST(BlackScholes, PayoffAtExpiry) {
    EXPECT_EQ(bs_price({25.0, 0.05, 0.0}, {20.0, 1.0}, 0.2), 5.0);
    EXPECT_EQ(bs_price({15.0, 0.05, 0.0}, {20.0, 1.0}, 0.2), 0.0);
}

TEST(BlackScholes, MatchesQuadrature) {
    const double oracle = quadrature_call(100.0, 100.0, 0.0, 0.2, 1.0);
    EXPECT_NEAR(oracle, 7.9656, 5e-5);
    EXPECT_NEAR(bs_price({100.0, 0.0, 1.0}, {100.0, 1.0}, 0.2), oracle, 1e-9);

    const double oracle2 = quadrature_call(87.0, 100.0, 0.07, 0.35, 0.6);
    EXPECT_NEAR(bs_price({87.0, 0.07, 0.6}, {100.0, 1.0}, 0.35), oracle2, 1e-9);
}

TEST(BlackScholes, LargeSpotApproachesForwardIntrinsic) {
    const QuoteContext ctx{1e4, 0.05, 1.0};
    const VanillaCall c{100.0, 1.0};
    EXPECT_NEAR(bs_price(ctx, c, 0.2) - (1e4 - 100.0 * std::exp(-0.05)), 0.0, 1e-9);
}

TEST(BlackScholes, RejectsNegativeSigma) {
    EXPECT_THROW(bs_price({100.0, 0.0, 1.0}, {100.0, 1.0}, -0.1), Error);
}

TEST(BlackScholes, DeltaLimitsAndFiniteDifference) {
    const VanillaCall c{100.0, 1.0};
    EXPECT_NEAR(bs_delta({400.0, 0.01, 1.0}, c, 0.2), 1.0, 1e-12);
    EXPECT_NEAR(bs_delta({20.0, 0.01, 1.0}, c, 0.2), 0.0, 1e-12);
    for (double s : {70.0, 100.0, 130.0}) {
        const double h = 1e-4;
        const double fd = (bs_price({s + h, 0.03, 0.7}, c, 0.25) - bs_price({s - h, 0.03, 0.7}, c, 0.25)) / (2 * h);
        EXPECT_NEAR(bs_delta({s, 0.03, 0.7}, c, 0.25), fd, 1e-7);
    }
}

TEST(BlackScholes, VegaMatchesFiniteDifference) {
    const QuoteContext ctx{95.0, 0.02, 0.5};
    const VanillaCall c{100.0, 1.0};
    const double h = 1e-5;
    const double fd = (bs_price(ctx, c, 0.3 + h) - bs_price(ctx, c, 0.3 - h)) / (2 * h);
    EXPECT_NEAR(bs_vega(ctx, c, 0.3), fd, 1e-6);
}

TEST(BlackScholes, BoundsAndMonotonicity) {
    std::mt19937_64 g(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
        const QuoteContext ctx{50.0 + 100.0 * u(g), 0.1 * u(g), 0.01 + 2.0 * u(g)};
        const VanillaCall c{100.0, 2.0};
        const auto b = call_price_bounds(ctx, c);
        const double s1 = 0.01 + u(g), s2 = s1 + 0.05;
        const double p1 = bs_price(ctx, c, s1), p2 = bs_price(ctx, c, s2);
        EXPECT_GE(p1, b.lower);
        EXPECT_LE(p1, b.upper);
        EXPECT_GE(p2, p1);
    }
}

TEST(ImpliedVol, RoundTrip) {
    const QuoteContext ctx{100.0, 0.03, 1.0};
    const VanillaCall c{105.0, 1.0};
    const auto iv = bs_implied_vol(ctx, c, bs_price(ctx, c, 0.2));
    ASSERT_EQ(iv.status, VolStatus::Ok);
    EXPECT_NEAR(*iv.sigma, 0.2, 1e-8);
}

TEST(ImpliedVol, LowerBoundHasNoSolution) {
    const QuoteContext ctx{120.0, 0.05, 1.0};
    const VanillaCall c{100.0, 1.0};
    const auto iv = bs_implied_vol(ctx, c, 120.0 - 100.0 * std::exp(-0.05));
    EXPECT_EQ(iv.status, VolStatus::NoSolution);
    EXPECT_FALSE(iv.sigma.has_value());
    EXPECT_EQ(bs_implied_vol(ctx, c, 5.0).status, VolStatus::NoSolution);
}

TEST(ImpliedVol, NearUpperBound) {
    const QuoteContext ctx{100.0, 0.0, 1.0};
    const VanillaCall c{100.0, 1.0};
    const double p = 100.0 * 0.999999;
    // bs_price at sigma_max = 10 is 100 (1 - 2 N(-5)) > p, so p is still bracketed.
    ASSERT_GT(bs_price(ctx, c, 10.0), p);
    const auto iv = bs_implied_vol(ctx, c, p);
    ASSERT_EQ(iv.status, VolStatus::Ok);
    EXPECT_GT(*iv.sigma, 5.0);
    EXPECT_NEAR(bs_price(ctx, c, *iv.sigma), p, 1e-8);
    EXPECT_EQ(bs_implied_vol(ctx, c, 100.0 * (1.0 - 1e-12)).status, VolStatus::NoSolution);
}

TEST(ImpliedVol, TinyOutOfTheMoneyPrice) {
    const QuoteContext ctx{56.0, 0.07, 0.08};
    const VanillaCall c{100.0, 1.0};
    const double p = bs_price(ctx, c, 0.1);
    ASSERT_GT(p, 0.0);
    const auto iv = bs_implied_vol(ctx, c, p);
    ASSERT_EQ(iv.status, VolStatus::Ok);
    EXPECT_NEAR(*iv.sigma, 0.1, 1e-8);
}

TEST(ImpliedVol, IterLimitIsReported) {
    const QuoteContext ctx{100.0, 0.0, 1.0};
    const VanillaCall c{130.0, 1.0};
    ImpliedVolOptions opts;
    opts.max_iterations = 2;
    const auto iv = bs_implied_vol(ctx, c, bs_price(ctx, c, 0.8123), opts);
    EXPECT_EQ(iv.status, VolStatus::IterLimit);
    EXPECT_FALSE(iv.sigma.has_value());
}
