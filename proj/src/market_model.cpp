#include "arbhedge/market_model.hpp"

#include "arbhedge/errors.hpp"
#include "arbhedge/parallel.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

namespace arbhedge {

void MarketParams::validate() const {
    require(std::isfinite(mu1) && std::isfinite(mu2) && std::isfinite(r), "drifts and rate must be finite");
    require(sigma1 > 0.0 && sigma2 > 0.0, "volatilities must be positive");
    require(sigma1 != sigma2, "assets must differ in volatility (sigma1 != sigma2)");
}

double sharpe_gap(const MarketParams& p) {
    const double ratio = p.sigma2 / p.sigma1;
    return p.mu1 * ratio - p.mu2 - p.r * ratio + p.r;
}

NormalSampler::NormalSampler(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
}

double NormalSampler::uniform_open() {
    // (k + 0.5) / 2^53 lies strictly inside (0, 1).
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double NormalSampler::operator()() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double radius = std::sqrt(-2.0 * std::log(uniform_open()));
    const double angle = 2.0 * std::numbers::pi * uniform_open();
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

PathEnsemble simulate_paths(const MarketParams& params, double s1_0, double s2_0, double maturity, int n_steps,
                            int n_paths, std::uint64_t seed) {
    require(params.sigma1 > 0.0 && params.sigma2 > 0.0, "volatilities must be positive");
    require(s1_0 > 0.0 && s2_0 > 0.0, "initial prices must be positive");
    require(maturity > 0.0, "maturity must be positive");
    require(n_steps >= 1 && n_paths >= 1, "need at least one step and one path");

    PathEnsemble ens;
    ens.seed = seed;
    ens.times = Eigen::VectorXd::LinSpaced(n_steps + 1, 0.0, maturity);
    ens.s1.resize(n_paths, n_steps + 1);
    ens.s2.resize(n_paths, n_steps + 1);

    const double dt = maturity / n_steps;
    const double sqrt_dt = std::sqrt(dt);
    const double drift1 = (params.mu1 - 0.5 * params.sigma1 * params.sigma1) * dt;
    const double drift2 = (params.mu2 - 0.5 * params.sigma2 * params.sigma2) * dt;

    parallel_for(static_cast<std::size_t>(n_paths), [&](std::size_t p) {
        NormalSampler normal(seed, p);
        const auto row = static_cast<Eigen::Index>(p);
        ens.s1(row, 0) = s1_0;
        ens.s2(row, 0) = s2_0;
        for (int k = 0; k < n_steps; ++k) {
            const double z = normal();
            ens.s1(row, k + 1) = ens.s1(row, k) * std::exp(drift1 + params.sigma1 * sqrt_dt * z);
            ens.s2(row, k + 1) = ens.s2(row, k) * std::exp(drift2 + params.sigma2 * sqrt_dt * z);
        }
    });
    return ens;
}

void write_paths_csv(std::ostream& out, const PathEnsemble& ens) {
    out << "time,path_id,s1,s2\n";
    out.precision(17);
    for (Eigen::Index p = 0; p < ens.n_paths(); ++p) {
        for (Eigen::Index k = 0; k < ens.times.size(); ++k) {
            out << ens.times[k] << ',' << p << ',' << ens.s1(p, k) << ',' << ens.s2(p, k) << '\n';
        }
    }
}

}  // namespace arbhedge
