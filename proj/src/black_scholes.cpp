#include "arbhedge/black_scholes.hpp"

#include "arbhedge/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace arbhedge {

namespace {

void validate(const QuoteContext& ctx, const VanillaCall& call, double sigma) {
    require(ctx.spot > 0.0, "spot must be positive");
    require(ctx.time_to_expiry >= 0.0, "time to expiry must be non-negative");
    require(call.strike > 0.0, "strike must be positive");
    require(sigma >= 0.0, "volatility must be non-negative");
    require(sigma > 0.0 || ctx.time_to_expiry == 0.0, "volatility must be positive before expiry");
}

struct DTerms {
    double d1;
    double d2;
};

DTerms d_terms(const QuoteContext& ctx, const VanillaCall& call, double sigma) {
    const double vol_sqrt_t = sigma * std::sqrt(ctx.time_to_expiry);
    const double d1 =
        (std::log(ctx.spot / call.strike) + (ctx.rate + 0.5 * sigma * sigma) * ctx.time_to_expiry) / vol_sqrt_t;
    return {d1, d1 - vol_sqrt_t};
}

}  // namespace

double norm_cdf(double x) { return 0.5 * std::erfc(-x * std::numbers::sqrt2 / 2.0); }

double norm_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

double bs_price(const QuoteContext& ctx, const VanillaCall& call, double sigma) {
    validate(ctx, call, sigma);
    if (ctx.time_to_expiry == 0.0) return std::max(ctx.spot - call.strike, 0.0);
    const auto [d1, d2] = d_terms(ctx, call, sigma);
    const double discounted_strike = call.strike * std::exp(-ctx.rate * ctx.time_to_expiry);
    const double price = ctx.spot * norm_cdf(d1) - discounted_strike * norm_cdf(d2);
    // Rounding can push deep in/out-of-the-money values a few ulps past the bounds.
    return std::clamp(price, std::max(ctx.spot - discounted_strike, 0.0), ctx.spot);
}

double bs_delta(const QuoteContext& ctx, const VanillaCall& call, double sigma) {
    validate(ctx, call, sigma);
    if (ctx.time_to_expiry == 0.0) return ctx.spot > call.strike ? 1.0 : 0.0;
    return norm_cdf(d_terms(ctx, call, sigma).d1);
}

double bs_vega(const QuoteContext& ctx, const VanillaCall& call, double sigma) {
    validate(ctx, call, sigma);
    if (ctx.time_to_expiry == 0.0) return 0.0;
    return ctx.spot * std::sqrt(ctx.time_to_expiry) * norm_pdf(d_terms(ctx, call, sigma).d1);
}

PriceBounds call_price_bounds(const QuoteContext& ctx, const VanillaCall& call) {
    const double discounted_strike = call.strike * std::exp(-ctx.rate * ctx.time_to_expiry);
    return {std::max(ctx.spot - discounted_strike, 0.0), ctx.spot};
}

ImpliedVolResult bs_implied_vol(const QuoteContext& ctx, const VanillaCall& call, double observed_price,
                                const ImpliedVolOptions& opts) {
    require(ctx.time_to_expiry > 0.0, "implied volatility needs time to expiry > 0");
    require(std::isfinite(observed_price), "observed price must be finite");
    require(opts.sigma_min > 0.0 && opts.sigma_min < opts.sigma_max, "invalid volatility bracket");

    ImpliedVolResult result;
    const auto bounds = call_price_bounds(ctx, call);
    if (!(observed_price > bounds.lower && observed_price < bounds.upper)) return result;

    double lo = opts.sigma_min;
    double hi = opts.sigma_max;
    if (bs_price(ctx, call, hi) < observed_price || bs_price(ctx, call, lo) > observed_price) return result;

    const double tol = opts.price_tolerance * std::max(1.0, observed_price);

    // Manaster-Koehler start: the inflection point of price as a function of sigma.
    double sigma = std::sqrt(2.0 * std::abs(std::log(ctx.spot / call.strike) + ctx.rate * ctx.time_to_expiry) /
                             ctx.time_to_expiry);
    if (!(sigma > lo && sigma < hi)) sigma = 0.5 * (lo + hi);

    double width_before = hi - lo;
    for (int it = 1; it <= opts.max_iterations; ++it) {
        result.iterations = it;
        const double diff = bs_price(ctx, call, sigma) - observed_price;
        if (diff > 0.0) {
            hi = sigma;
        } else {
            lo = sigma;
        }

        const double vega = bs_vega(ctx, call, sigma);
        double next = vega > 0.0 ? sigma - diff / vega : lo - 1.0;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (it % 2 == 0) {
            // Newton that fails to halve the bracket over two steps gives way to bisection.
            if (hi - lo > 0.5 * width_before) next = 0.5 * (lo + hi);
            width_before = hi - lo;
        }

        // Converged once the price matches and the root is pinned to rounding level.
        const double step = std::abs(next - sigma);
        if (std::abs(diff) <= tol && (step <= 1e-15 * sigma || hi - lo <= 4e-16 * sigma || diff == 0.0)) {
            result.status = VolStatus::Ok;
            result.sigma = sigma;
            return result;
        }
        if (hi - lo <= 4e-16 * sigma) {
            // Bracket exhausted without meeting the price tolerance.
            break;
        }
        sigma = next;
    }

    const double final_diff = std::abs(bs_price(ctx, call, sigma) - observed_price);
    if (final_diff <= tol) {
        result.status = VolStatus::Ok;
        result.sigma = sigma;
        return result;
    }
    result.status = VolStatus::IterLimit;
    return result;
}

}  // namespace arbhedge
