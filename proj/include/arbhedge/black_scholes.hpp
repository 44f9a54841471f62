#pragma once

#include <optional>
#include <string_view>

namespace arbhedge {

/// European call on asset 1 with payoff (S1 - X)^+ at maturity.
struct VanillaCall {
    double strike;
    double maturity;
};

/// Where and when the call is being quoted.
struct QuoteContext {
    double spot;
    double rate;
    double time_to_expiry;
};

/// Standard normal CDF, evaluated through erfc (absolute error well below 1e-15).
double norm_cdf(double x);
double norm_pdf(double x);

/// Closed-form Black-Scholes call value. At time_to_expiry == 0 the exact
/// payoff is returned rather than a limit of the formula.
double bs_price(const QuoteContext& ctx, const VanillaCall& call, double sigma);

/// dV/dS of the Black-Scholes call; in [0, 1].
double bs_delta(const QuoteContext& ctx, const VanillaCall& call, double sigma);

/// dV/dsigma.
double bs_vega(const QuoteContext& ctx, const VanillaCall& call, double sigma);

/// No-arbitrage bounds for a call price: [(S - X e^{-r tau})^+, S].
struct PriceBounds {
    double lower;
    double upper;
};
PriceBounds call_price_bounds(const QuoteContext& ctx, const VanillaCall& call);

enum class VolStatus { Ok, NoSolution, IterLimit };

constexpr std::string_view to_string(VolStatus s) noexcept {
    switch (s) {
    case VolStatus::Ok: return "OK";
    case VolStatus::NoSolution: return "NO_SOLUTION";
    case VolStatus::IterLimit: return "ITER_LIMIT";
    }
    return "UNKNOWN";
}

struct ImpliedVolOptions {
    double sigma_min = 1e-6;
    double sigma_max = 10.0;
    int max_iterations = 200;
    /// Price residual accepted as converged, scaled by max(1, price).
    double price_tolerance = 1e-10;
};

struct ImpliedVolResult {
    VolStatus status = VolStatus::NoSolution;
    std::optional<double> sigma;
    int iterations = 0;
};

/// Invert bs_price for sigma on [sigma_min, sigma_max].
///
/// Newton steps on vega, falling back to bisection whenever a step leaves the
/// current bracket. Prices on or outside the no-arbitrage bounds, or outside
/// the prices reachable on the sigma bracket, yield NoSolution. Requires
/// time_to_expiry > 0.
ImpliedVolResult bs_implied_vol(const QuoteContext& ctx, const VanillaCall& call, double observed_price,
                                const ImpliedVolOptions& opts = {});

}  // namespace arbhedge
