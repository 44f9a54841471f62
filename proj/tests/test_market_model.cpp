#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "arbhedge/errors.hpp"
#include "arbhedge/market_model.hpp"

using namespace arbhedge;

TEST(SharpeGap, HandValues) {
    EXPECT_NEAR(sharpe_gap({0.07, 0.07, 0.3, 0.1, 0.07}), 0.0, 1e-15);
    EXPECT_NEAR(sharpe_gap({0.10, 0.05, 0.2, 0.1, 0.0}), 0.0, 1e-15);
    EXPECT_NEAR(sharpe_gap({0.10, 0.03, 0.2, 0.1, 0.0}), 0.02, 1e-15);
    // sigma2 ((mu1 - r)/sigma1 - (mu2 - r)/sigma2) with r = 0.01: 0.1 (0.45 - 0.2)
    EXPECT_NEAR(sharpe_gap({0.10, 0.03, 0.2, 0.1, 0.01}), 0.025, 1e-15);
}

TEST(MarketParams, Validation) {
    EXPECT_THROW((MarketParams{0.1, 0.1, 0.2, 0.2, 0.0}).validate(), Error);
    EXPECT_THROW((MarketParams{0.1, 0.1, -0.2, 0.1, 0.0}).validate(), Error);
    EXPECT_NO_THROW((MarketParams{0.1, 0.1, 0.2, 0.1, 0.0}).validate());
}

TEST(SimulatePaths, SharedDriverCorrelation) {
    const MarketParams p{0.1, 0.03, 0.2, 0.1, 0.0};
    const auto ens = simulate_paths(p, 20.0, 1.0, 1.0, 10000, 1, 5);
    const int n = 10000;
    Eigen::ArrayXd x(n), y(n);
    for (int k = 0; k < n; ++k) {
        x[k] = std::log(ens.s1(0, k + 1) / ens.s1(0, k));
        y[k] = std::log(ens.s2(0, k + 1) / ens.s2(0, k));
    }
    const Eigen::ArrayXd dx = x - x.mean(), dy = y - y.mean();
    const double corr = (dx * dy).sum() / std::sqrt((dx * dx).sum() * (dy * dy).sum());
    EXPECT_NEAR(corr, 1.0, 1e-12);
}

TEST(SimulatePaths, EqualParametersKeepRatio) {
    const MarketParams p{0.05, 0.05, 0.3, 0.3, 0.0};
    const auto ens = simulate_paths(p, 10.0, 4.0, 1.0, 50, 20, 9);
    for (Eigen::Index i = 0; i < ens.n_paths(); ++i)
        for (Eigen::Index k = 0; k <= ens.n_steps(); ++k) EXPECT_NEAR(ens.s2(i, k) / ens.s1(i, k), 0.4, 1e-12);
}

TEST(SimulatePaths, OneStepReplaysSampler) {
    const MarketParams p{0.1, 0.03, 0.2, 0.1, 0.0};
    const double dt = 0.25;
    const auto ens = simulate_paths(p, 20.0, 1.0, dt, 1, 3, 77);
    for (int i = 0; i < 3; ++i) {
        NormalSampler z(77, i);
        const double zi = z();
        EXPECT_DOUBLE_EQ(ens.s1(i, 1), 20.0 * std::exp((0.1 - 0.02) * dt + 0.2 * std::sqrt(dt) * zi));
        EXPECT_DOUBLE_EQ(ens.s2(i, 1), 1.0 * std::exp((0.03 - 0.005) * dt + 0.1 * std::sqrt(dt) * zi));
    }
}

TEST(SimulatePaths, Deterministic) {
    const MarketParams p{0.1, 0.03, 0.2, 0.1, 0.0};
    const auto a = simulate_paths(p, 20.0, 1.0, 1.0, 20, 30, 1);
    const auto b = simulate_paths(p, 20.0, 1.0, 1.0, 20, 30, 1);
    const auto c = simulate_paths(p, 20.0, 1.0, 1.0, 20, 30, 2);
    EXPECT_TRUE((a.s1.array() == b.s1.array()).all());
    EXPECT_TRUE((a.s2.array() == b.s2.array()).all());
    EXPECT_FALSE((a.s1.array() == c.s1.array()).all());
}

TEST(SimulatePaths, TerminalMeanWithinThreeStandardErrors) {
    const MarketParams p{0.1, 0.03, 0.25, 0.1, 0.0};
    const auto ens = simulate_paths(p, 20.0, 1.0, 1.0, 4, 20000, 3);
    for (int a = 0; a < 2; ++a) {
        const Eigen::VectorXd st = a == 0 ? ens.s1.col(4) : ens.s2.col(4);
        const double mean = st.mean();
        const double sd = std::sqrt((st.array() - mean).square().sum() / (st.size() - 1));
        const double expected = a == 0 ? 20.0 * std::exp(0.1) : std::exp(0.03);
        EXPECT_LT(std::abs(mean - expected), 3.0 * sd / std::sqrt(double(st.size())));
    }
}

TEST(SimulatePaths, RejectsBadInputs) {
    const MarketParams p{0.1, 0.03, 0.2, 0.1, 0.0};
    EXPECT_THROW(simulate_paths(p, -1.0, 1.0, 1.0, 10, 1, 1), Error);
    EXPECT_THROW(simulate_paths(p, 1.0, 1.0, 0.0, 10, 1, 1), Error);
    EXPECT_THROW(simulate_paths(p, 1.0, 1.0, 1.0, 0, 1, 1), Error);
}

TEST(SimulatePaths, CsvLayout) {
    const MarketParams p{0.1, 0.03, 0.2, 0.1, 0.0};
    const auto ens = simulate_paths(p, 20.0, 1.0, 1.0, 2, 2, 1);
    std::ostringstream os;
    write_paths_csv(os, ens);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    EXPECT_EQ(line, "time,path_id,s1,s2");
    int rows = 0;
    while (std::getline(is, line)) ++rows;
    EXPECT_EQ(rows, 6);
}
