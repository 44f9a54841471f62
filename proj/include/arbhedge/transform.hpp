#pragma once

#include "arbhedge/market_model.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <utility>

namespace arbhedge {

/// Call contract with a cancellation corridor. The corridor exponents live in
/// computational units: S_minus = e^{K_minus/alpha1}, S_plus = e^{K_plus/alpha1}
/// at expiry.
struct ContractSpec {
    double strike = 0.0;
    double maturity = 0.0;
    double k_minus = 0.0;
    double k_plus = 0.0;
    double alpha1 = 1.0;
    double alpha2 = 1.0;

    /// Build K_minus/K_plus from corridor prices at expiry.
    static ContractSpec from_corridor(double strike, double maturity, double s_minus, double s_plus,
                                      double alpha1 = 1.0, double alpha2 = 1.0);

    void validate() const;
};

/// Constants of the reduced problem, all fixed by (MarketParams, ContractSpec).
struct DerivedConstants {
    double c1 = 0.0;      ///< shift rate of y1: alpha1 (r - sigma1^2/2)
    double c2 = 0.0;      ///< shift rate of y2: alpha2 (mu2 sigma1 - mu1 sigma2 + sigma1 sigma2 (sigma1 - sigma2)/2)
    double eps = 0.0;     ///< diffusion scale, eps^2 = sigma1^2 alpha1^2 / 2
    double A = 0.0;       ///< middle root of the cubic, (e^{K+/alpha1} - X)/2
    double B = 0.0;       ///< upper root, 2A
    double x0 = 0.0;      ///< predicted transition coordinate (K- + K+)/2
    double s_minus = 0.0; ///< corridor floor at expiry
    double s_plus = 0.0;  ///< corridor cap at expiry
    double s0 = 0.0;      ///< transition price sqrt(s_minus s_plus)
    double lambda = 0.0;  ///< sharpe_gap(params)
};

/// Throws InvalidArgument on invalid inputs, including e^{K+/alpha1} <= X.
DerivedConstants derive_constants(const MarketParams& params, const ContractSpec& contract);

/// Non-empty when sigma1^2 T exceeds `threshold`, i.e. when freezing the
/// right boundary value at e^{K+/alpha1} - X is a poor approximation.
std::optional<std::string> frozen_boundary_warning(const MarketParams& params, const ContractSpec& contract,
                                                   double threshold = 0.01);

struct ComputationalPoint {
    double y1;
    double tau;
};

struct FinancialPoint {
    double s1;
    double t;
};

/// tau = T - t, y1 = alpha1 ln S1 + c1 tau.
ComputationalPoint to_computational(double s1, double t, const DerivedConstants& dc, const ContractSpec& contract);
FinancialPoint from_computational(double y1, double tau, const DerivedConstants& dc, const ContractSpec& contract);

/// Moving corridor (S_minus(tau), S_plus(tau)) = e^{K/alpha1 - (c1/alpha1) tau}.
std::pair<double, double> corridor_prices(double tau, const DerivedConstants& dc, const ContractSpec& contract);

/// y2 = alpha2 (sigma1 ln S2 - sigma2 ln S1) + c2 tau.
double y2_from_prices(double s1, double s2, double tau, const DerivedConstants& dc, const MarketParams& params,
                      const ContractSpec& contract);

/// Inverse of y2_from_prices for S2 given (y1, y2, tau).
double s2_from_coords(double y1, double y2, double tau, const DerivedConstants& dc, const MarketParams& params,
                      const ContractSpec& contract);

/// V = e^{-r tau} U.
inline double price_from_grid_value(double u, double tau, double r) { return std::exp(-r * tau) * u; }

/// Payoff in computational coordinates: (e^{y1/alpha1} - X)^+.
double terminal_profile(double y1, const DerivedConstants& dc, const ContractSpec& contract);

/// Dirichlet data (0, e^{K+/alpha1} - X) = (0, 2A) with time dependence frozen.
std::pair<double, double> boundary_values(const DerivedConstants& dc);

/// f(u) = u (u - A)(u - B) and its derivative.
template <typename Scalar>
struct CubicNonlinearity {
    Scalar A;
    Scalar B;

    Scalar operator()(Scalar u) const { return u * (u - A) * (u - B); }
    Scalar derivative(Scalar u) const { return Scalar(3) * u * u - Scalar(2) * (A + B) * u + A * B; }
};

inline CubicNonlinearity<double> cubic_nonlinearity(const DerivedConstants& dc) { return {dc.A, dc.B}; }

}  // namespace arbhedge
