#include "arbhedge/transform.hpp"

#include "arbhedge/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace arbhedge {

ContractSpec ContractSpec::from_corridor(double strike, double maturity, double s_minus, double s_plus,
                                         double alpha1, double alpha2) {
    require(s_minus > 0.0 && s_plus > 0.0, "corridor prices must be positive");
    ContractSpec c;
    c.strike = strike;
    c.maturity = maturity;
    c.alpha1 = alpha1;
    c.alpha2 = alpha2;
    c.k_minus = alpha1 * std::log(s_minus);
    c.k_plus = alpha1 * std::log(s_plus);
    return c;
}

void ContractSpec::validate() const {
    require(strike > 0.0, "strike must be positive");
    require(maturity > 0.0, "maturity must be positive");
    require(alpha1 > 0.0 && alpha2 > 0.0, "scale constants alpha1, alpha2 must be positive");
    require(k_minus < 0.0 && k_plus > 0.0, "corridor exponents need K_minus < 0 < K_plus");
    require(std::exp(k_plus / alpha1) > strike, "corridor cap e^{K+/alpha1} must exceed the strike");
}

DerivedConstants derive_constants(const MarketParams& p, const ContractSpec& c) {
    p.validate();
    c.validate();

    DerivedConstants dc;
    dc.c1 = c.alpha1 * (p.r - 0.5 * p.sigma1 * p.sigma1);
    dc.c2 = c.alpha2 * (p.mu2 * p.sigma1 - p.mu1 * p.sigma2 + 0.5 * p.sigma1 * p.sigma2 * (p.sigma1 - p.sigma2));
    dc.eps = p.sigma1 * c.alpha1 / std::sqrt(2.0);
    dc.s_minus = std::exp(c.k_minus / c.alpha1);
    dc.s_plus = std::exp(c.k_plus / c.alpha1);
    dc.A = 0.5 * (dc.s_plus - c.strike);
    dc.B = 2.0 * dc.A;
    dc.x0 = 0.5 * (c.k_minus + c.k_plus);
    dc.s0 = std::sqrt(dc.s_minus * dc.s_plus);
    dc.lambda = sharpe_gap(p);
    return dc;
}

std::optional<std::string> frozen_boundary_warning(const MarketParams& p, const ContractSpec& c, double threshold) {
    const double v = p.sigma1 * p.sigma1 * c.maturity;
    if (v <= threshold) return std::nullopt;
    std::ostringstream msg;
    msg << "sigma1^2 T = " << v << " exceeds " << threshold
        << "; the frozen right boundary value e^{K+/alpha1} - X is inaccurate";
    return msg.str();
}

ComputationalPoint to_computational(double s1, double t, const DerivedConstants& dc, const ContractSpec& c) {
    require(s1 > 0.0, "S1 must be positive");
    require(t >= 0.0 && t <= c.maturity, "t must lie in [0, T]");
    const double tau = c.maturity - t;
    return {c.alpha1 * std::log(s1) + dc.c1 * tau, tau};
}

FinancialPoint from_computational(double y1, double tau, const DerivedConstants& dc, const ContractSpec& c) {
    require(tau >= 0.0 && tau <= c.maturity, "tau must lie in [0, T]");
    return {std::exp((y1 - dc.c1 * tau) / c.alpha1), c.maturity - tau};
}

std::pair<double, double> corridor_prices(double tau, const DerivedConstants& dc, const ContractSpec& c) {
    const double shift = dc.c1 / c.alpha1 * tau;
    return {std::exp(c.k_minus / c.alpha1 - shift), std::exp(c.k_plus / c.alpha1 - shift)};
}

double y2_from_prices(double s1, double s2, double tau, const DerivedConstants& dc, const MarketParams& p,
                      const ContractSpec& c) {
    require(s1 > 0.0 && s2 > 0.0, "prices must be positive");
    return c.alpha2 * (p.sigma1 * std::log(s2) - p.sigma2 * std::log(s1)) + dc.c2 * tau;
}

double s2_from_coords(double y1, double y2, double tau, const DerivedConstants& dc, const MarketParams& p,
                      const ContractSpec& c) {
    return std::exp((y2 - dc.c2 * tau) / (c.alpha2 * p.sigma1) + p.sigma2 * (y1 - dc.c1 * tau) / (c.alpha1 * p.sigma1));
}

double terminal_profile(double y1, const DerivedConstants&, const ContractSpec& c) {
    return std::max(std::exp(y1 / c.alpha1) - c.strike, 0.0);
}

std::pair<double, double> boundary_values(const DerivedConstants& dc) { return {0.0, dc.B}; }

}  // namespace arbhedge
