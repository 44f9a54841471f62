#pragma once

#include "arbhedge/black_scholes.hpp"
#include "arbhedge/market_model.hpp"
#include "arbhedge/transform.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace arbhedge {

struct SmilePoint {
    double strike = 0.0;
    double price_classical = 0.0;
    std::optional<double> price_arbitrage;
    std::optional<double> implied_vol;
    VolStatus vol_status = VolStatus::NoSolution;
    /// Set when the arbitrage price falls outside [0, spot]; the value is kept as computed.
    bool price_out_of_bounds = false;
    /// Solver or input failure for this strike.
    std::optional<std::string> error;
};

struct SmileCurve {
    double maturity = 0.0;
    double spot = 0.0;
    std::vector<SmilePoint> points;
    std::optional<double> skew;  ///< least-squares slope of implied vol against strike
};

struct SmileOptions {
    Eigen::Index n_nodes = 101;
    double dt = 2e-4;
    double theta = 0.5;
    double picard_tol_rel = 1e-10;  ///< Picard tolerance as a fraction of A
    int picard_max = 50;
    double sigma_ref = 0.0;         ///< volatility of the classical curve; 0 means sigma1
    double skew_window = 0.2;       ///< fit over |X/spot - 1| <= window
    bool control = false;           ///< solve with f = 0 instead of the cubic
};

/// Arbitrage-strategy and classical prices across strikes at fixed spot and
/// maturity (taken from contract_template.maturity). Each strike re-derives A
/// and B and solves its own problem; failures are recorded per point.
std::vector<SmilePoint> price_curve(const std::vector<double>& strikes, double spot, const MarketParams& params,
                                    const ContractSpec& contract_template, const SmileOptions& opts);

/// Fill implied_vol/vol_status by inverting Black-Scholes on price_arbitrage.
void invert_points(std::vector<SmilePoint>& points, double spot, double maturity, double rate);

/// Least-squares slope of implied vol against strike over OK points inside
/// the window; throws EmptyCurve with fewer than two such points.
double fit_skew(const std::vector<SmilePoint>& points, double spot, double window);

/// Invert prices and fit the skew; throws EmptyCurve if no skew can be fitted.
SmileCurve implied_curve(std::vector<SmilePoint> points, double maturity, double spot, double rate, double window);

/// One curve per maturity; a curve without a fittable skew keeps skew empty.
std::vector<SmileCurve> build_smile(const std::vector<double>& strikes, const std::vector<double>& maturities,
                                    double spot, const MarketParams& params, const ContractSpec& contract_template,
                                    const SmileOptions& opts);

/// CSV with columns strike,price_classical,price_arbitrage,implied_vol,vol_status.
void write_smile_csv(std::ostream& out, const SmileCurve& curve);

}  // namespace arbhedge
