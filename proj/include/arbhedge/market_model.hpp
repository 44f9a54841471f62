#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

namespace arbhedge {

/// Two geometric Brownian motions driven by one Wiener process:
///   dS_i = mu_i S_i dt + sigma_i S_i dW,  i = 1, 2,
/// plus the riskless rate r.
struct MarketParams {
    double mu1 = 0.0;
    double mu2 = 0.0;
    double sigma1 = 0.0;
    double sigma2 = 0.0;
    double r = 0.0;

    /// Throws InvalidArgument unless both volatilities are positive and distinct.
    void validate() const;
};

/// Coefficient of delta2 * S2 in the two-asset pricing equation,
///   lambda = mu1 sigma2/sigma1 - mu2 - r sigma2/sigma1 + r
///          = sigma2 * ((mu1 - r)/sigma1 - (mu2 - r)/sigma2).
/// Zero exactly when both assets carry the same market price of risk.
double sharpe_gap(const MarketParams& params);

/// Monte Carlo trajectories of (S1, S2) on a shared time grid. Row p of s1/s2
/// is path p; column k is time index k.
struct PathEnsemble {
    Eigen::VectorXd times;
    Eigen::MatrixXd s1;
    Eigen::MatrixXd s2;
    std::uint64_t seed = 0;

    Eigen::Index n_paths() const { return s1.rows(); }
    Eigen::Index n_steps() const { return times.size() - 1; }
};

/// Standard normal sampler used for path generation.
///
/// Uniforms come from the top 53 bits of std::mt19937_64 and normals from the
/// Box-Muller transform, so a given seed yields the same numbers on every
/// conforming standard library (unlike std::normal_distribution).
class NormalSampler {
public:
    explicit NormalSampler(std::uint64_t seed, std::uint64_t stream = 0);
    double operator()();

private:
    double uniform_open();

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Exact lognormal simulation of both assets with identical normal draws.
///
/// Path p draws from NormalSampler(seed, p), so results do not depend on how
/// paths are scheduled across threads.
PathEnsemble simulate_paths(const MarketParams& params, double s1_0, double s2_0, double maturity, int n_steps,
                            int n_paths, std::uint64_t seed);

/// CSV with columns time,path_id,s1,s2 (one row per path and time point).
void write_paths_csv(std::ostream& out, const PathEnsemble& ensemble);

}  // namespace arbhedge
