#include "arbhedge/hedging.hpp"

#include "arbhedge/black_scholes.hpp"
#include "arbhedge/errors.hpp"
#include "arbhedge/kahan.hpp"
#include "arbhedge/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace arbhedge {

double compute_delta2(double V, double S2, double tau, const MarketParams& params, const DerivedConstants& dc) {
    require(S2 > 0.0, "S2 must be positive");
    const double lambda = sharpe_gap(params);
    if (lambda == 0.0) {
        throw Error(ErrorCode::SharpeGapZero, "equal market prices of risk: the arbitrage hedge does not exist");
    }
    const double growth = std::exp(params.r * tau);
    const double U = growth * V;
    return -cubic_nonlinearity(dc)(U) / (growth * S2 * lambda);
}

double compute_delta2_zero_rate(double V, double S2, const MarketParams& p, double s_plus, double strike) {
    require(S2 > 0.0, "S2 must be positive");
    const double denom = S2 * (p.mu2 - p.mu1 * p.sigma2 / p.sigma1);
    if (denom == 0.0) {
        throw Error(ErrorCode::SharpeGapZero, "equal market prices of risk: the arbitrage hedge does not exist");
    }
    const double height = s_plus - strike;
    return V * (V - 0.5 * height) * (V - height) / denom;
}

double compute_delta1(double V_S1, double V_S2, double S1, double S2, double delta2, const MarketParams& p) {
    require(S1 > 0.0, "S1 must be positive");
    const double ratio = p.sigma2 * S2 / (p.sigma1 * S1);
    return V_S1 + ratio * V_S2 - delta2 * ratio;
}

double diffusion_residual(double V_S1, double V_S2, double S1, double S2, double delta1, double delta2,
                          const MarketParams& p) {
    return p.sigma1 * S1 * V_S1 + p.sigma2 * S2 * V_S2 - delta1 * p.sigma1 * S1 - delta2 * p.sigma2 * S2;
}

SurfacePoint surface_gradient(const SolutionSurface& surface, double S1, double t, const MarketParams& params,
                              const DerivedConstants& dc, const ContractSpec& contract) {
    const auto [y1, tau] = to_computational(S1, t, dc, contract);
    if (y1 < surface.grid.a() - 1e-12 || y1 > surface.grid.b() + 1e-12) {
        throw Error(ErrorCode::OutOfCorridor, "S1 = " + std::to_string(S1) + " outside the corridor");
    }
    const double discount = std::exp(-params.r * tau);
    return {discount * surface.value_at(y1, tau), discount * surface.slope_at(y1, tau) * contract.alpha1 / S1};
}

namespace {

bool inside_corridor(double S1, double t, const DerivedConstants& dc, const ContractSpec& contract) {
    const double y1 = to_computational(S1, t, dc, contract).y1;
    return y1 >= contract.k_minus && y1 <= contract.k_plus;
}

}  // namespace

HedgeSimResult simulate_hedged_portfolio(const PathEnsemble& ens, const SolutionSurface& surface,
                                         const MarketParams& params, const DerivedConstants& dc,
                                         const ContractSpec& contract, const HedgeSimOptions& opts) {
    params.validate();
    require(ens.n_paths() >= 1 && ens.n_steps() >= 1, "empty ensemble");
    require(std::abs(ens.times[ens.times.size() - 1] - contract.maturity) <= 1e-12 * contract.maturity,
            "ensemble horizon must equal the contract maturity");
    if (!opts.classical && sharpe_gap(params) == 0.0) {
        throw Error(ErrorCode::SharpeGapZero, "equal market prices of risk: the arbitrage hedge does not exist");
    }

    const Eigen::Index n_paths = ens.n_paths();
    const Eigen::Index n_steps = ens.n_steps();
    std::vector<PathOutcome> outcomes(static_cast<std::size_t>(n_paths));
    std::vector<std::vector<LedgerRow>> ledgers(static_cast<std::size_t>(n_paths));

    parallel_for(static_cast<std::size_t>(n_paths), [&](std::size_t idx) {
        const auto p = static_cast<Eigen::Index>(idx);
        PathOutcome& out = outcomes[idx];
        const bool log_path = opts.keep_ledger && p < opts.ledger_paths;
        KahanSum tracking, abs_tracking;

        double S1 = ens.s1(p, 0);
        double S2 = ens.s2(p, 0);
        if (!inside_corridor(S1, ens.times[0], dc, contract)) {
            out.corridor_exit = true;
            return;
        }
        SurfacePoint here = surface_gradient(surface, S1, ens.times[0], params, dc, contract);

        for (Eigen::Index k = 0; k < n_steps; ++k) {
            const double t = ens.times[k];
            const double t_next = ens.times[k + 1];
            const double tau = contract.maturity - t;
            const double delta2 = opts.classical ? 0.0 : compute_delta2(here.V, S2, tau, params, dc);
            const double delta1 = compute_delta1(here.V_S1, 0.0, S1, S2, delta2, params);
            const double pi = here.V - delta1 * S1 - delta2 * S2;

            const double S1_next = ens.s1(p, k + 1);
            const double S2_next = ens.s2(p, k + 1);
            if (!inside_corridor(S1_next, t_next, dc, contract)) {
                out.corridor_exit = true;
                break;
            }
            const SurfacePoint next = surface_gradient(surface, S1_next, t_next, params, dc, contract);
            const double d_pi = (next.V - here.V) - delta1 * (S1_next - S1) - delta2 * (S2_next - S2);
            const double increment = d_pi - params.r * pi * (t_next - t);
            tracking += increment;
            abs_tracking += std::abs(increment);
            out.steps_used = k + 1;
            if (log_path) {
                ledgers[idx].push_back({p, t, S1, S2, here.V, delta1, delta2, pi, increment});
            }
            S1 = S1_next;
            S2 = S2_next;
            here = next;
        }
        out.tracking_error = tracking.value();
        out.abs_tracking_sum = abs_tracking.value();
        if (!out.corridor_exit) out.terminal_payoff = std::max(S1 - contract.strike, 0.0);
    });

    HedgeSimResult res;
    res.paths = std::move(outcomes);
    const double s1_0 = ens.s1(0, 0);
    res.initial_value = surface_gradient(surface, s1_0, 0.0, params, dc, contract).V;
    const double sigma_ref = opts.sigma_ref > 0.0 ? opts.sigma_ref : params.sigma1;
    res.bs_price_t0 = bs_price({s1_0, params.r, contract.maturity}, {contract.strike, contract.maturity}, sigma_ref);
    res.arbitrage_margin = res.bs_price_t0 - res.initial_value;

    KahanSum sum_te, sum_abs, sum_sq, sum_payoff, sum_itm_payoff, sum_pnl;
    Eigen::Index itm = 0;
    const double carry = std::exp(params.r * contract.maturity);
    for (const auto& o : res.paths) {
        sum_te += o.tracking_error;
        sum_abs += std::abs(o.tracking_error);
        sum_sq += o.tracking_error * o.tracking_error;
        sum_payoff += o.terminal_payoff;
        sum_pnl += res.arbitrage_margin * carry - o.tracking_error;
        if (o.corridor_exit) ++res.corridor_exits;
        if (o.terminal_payoff > 0.0) {
            ++itm;
            sum_itm_payoff += o.terminal_payoff;
        }
    }
    const auto n = static_cast<double>(n_paths);
    res.mean_tracking_error = sum_te.value() / n;
    res.mean_abs_tracking_error = sum_abs.value() / n;
    res.std_tracking_error = std::sqrt(std::max(0.0, sum_sq.value() / n - res.mean_tracking_error * res.mean_tracking_error));
    res.mean_payoff = sum_payoff.value() / n;
    res.fraction_in_the_money = static_cast<double>(itm) / n;
    res.mean_payoff_in_the_money = itm > 0 ? sum_itm_payoff.value() / static_cast<double>(itm) : 0.0;
    res.mean_seller_pnl = sum_pnl.value() / n;
    for (auto& l : ledgers) res.ledger.insert(res.ledger.end(), l.begin(), l.end());
    return res;
}

void write_ledger_csv(std::ostream& out, const std::vector<LedgerRow>& ledger) {
    out << "path,time,S1,S2,V,delta1,delta2,pi,tracking_increment\n";
    out.precision(17);
    for (const auto& r : ledger) {
        out << r.path << ',' << r.time << ',' << r.s1 << ',' << r.s2 << ',' << r.V << ',' << r.delta1 << ','
            << r.delta2 << ',' << r.pi << ',' << r.tracking_increment << '\n';
    }
}

}  // namespace arbhedge
