#pragma once

#include "arbhedge/market_model.hpp"
#include "arbhedge/pde.hpp"
#include "arbhedge/transform.hpp"

#include <Eigen/Core>

#include <iosfwd>
#include <vector>

namespace arbhedge {

/// Long one option, short delta1 of asset 1 and delta2 of asset 2.
struct HedgePosition {
    double delta1 = 0.0;
    double delta2 = 0.0;
    double portfolio_value = 0.0;  ///< V - delta1 S1 - delta2 S2
};

/// Units of asset 2 that turn the pricing equation into the cubic reaction
/// problem: delta2 = -e^{-r tau} f(U) / (S2 lambda) with U = e^{r tau} V.
/// Throws SharpeGapZero when lambda = 0 (no such strategy exists).
double compute_delta2(double V, double S2, double tau, const MarketParams& params, const DerivedConstants& dc);

/// The r = 0 closed form
///   delta2 = V (V - (S+ - X)/2)(V - (S+ - X)) / (S2 (mu2 - mu1 sigma2/sigma1)),
/// which coincides with compute_delta2 when r = 0.
double compute_delta2_zero_rate(double V, double S2, const MarketParams& params, double s_plus, double strike);

/// delta1 = V_S1 + (sigma2 S2 / (sigma1 S1)) V_S2 - delta2 sigma2 S2 / (sigma1 S1).
double compute_delta1(double V_S1, double V_S2, double S1, double S2, double delta2, const MarketParams& params);

/// dW coefficient of dPi: sigma1 S1 V_S1 + sigma2 S2 V_S2 - delta1 sigma1 S1 - delta2 sigma2 S2.
double diffusion_residual(double V_S1, double V_S2, double S1, double S2, double delta1, double delta2,
                          const MarketParams& params);

struct SurfacePoint {
    double V;
    double V_S1;
};

/// Option value and dV/dS1 at (S1, t) read off a transformed-coordinate
/// surface: V = e^{-r tau} U, V_S1 = e^{-r tau} U_y alpha1 / S1.
/// Throws OutOfCorridor when S1 is outside the corridor at t.
SurfacePoint surface_gradient(const SolutionSurface& surface, double S1, double t, const MarketParams& params,
                              const DerivedConstants& dc, const ContractSpec& contract);

struct HedgeSimOptions {
    /// Classical delta hedge: delta2 = 0 regardless of the surface.
    bool classical = false;
    /// Reference volatility for the Black-Scholes price at t = 0 (defaults to sigma1).
    double sigma_ref = 0.0;
    /// Keep a per-step ledger (path, time, S1, S2, V, delta1, delta2, pi, tracking_increment).
    bool keep_ledger = false;
    /// Only paths below this index enter the ledger.
    Eigen::Index ledger_paths = 10;
};

struct LedgerRow {
    Eigen::Index path;
    double time, s1, s2, V, delta1, delta2, pi, tracking_increment;
};

struct PathOutcome {
    double tracking_error = 0.0;     ///< sum over rebalances of dPi - r Pi dt
    double abs_tracking_sum = 0.0;   ///< sum of |dPi - r Pi dt|
    double terminal_payoff = 0.0;
    Eigen::Index steps_used = 0;
    bool corridor_exit = false;
};

struct HedgeSimResult {
    std::vector<PathOutcome> paths;
    double initial_value = 0.0;        ///< V(S1(0), 0) from the surface
    double bs_price_t0 = 0.0;          ///< Black-Scholes price at t = 0 with sigma_ref
    double mean_tracking_error = 0.0;
    double mean_abs_tracking_error = 0.0;
    double std_tracking_error = 0.0;
    double mean_payoff = 0.0;
    double mean_payoff_in_the_money = 0.0;  ///< over paths ending above the strike
    double fraction_in_the_money = 0.0;
    Eigen::Index corridor_exits = 0;
    double arbitrage_margin = 0.0;     ///< bs_price_t0 - initial_value
    double mean_seller_pnl = 0.0;      ///< margin e^{rT} - tracking error, averaged
    std::vector<LedgerRow> ledger;
};

/// Rebalance at every path time step along an ensemble and account
///   dPi = dV - delta1 dS1 - delta2 dS2,   tracking increment dPi - r Pi dt.
/// Paths leaving the corridor are cut at the exit and flagged. Cross-path
/// statistics use compensated summation in path order.
HedgeSimResult simulate_hedged_portfolio(const PathEnsemble& ensemble, const SolutionSurface& surface,
                                         const MarketParams& params, const DerivedConstants& dc,
                                         const ContractSpec& contract, const HedgeSimOptions& opts = {});

/// CSV with columns path,time,S1,S2,V,delta1,delta2,pi,tracking_increment.
void write_ledger_csv(std::ostream& out, const std::vector<LedgerRow>& ledger);

}  // namespace arbhedge
