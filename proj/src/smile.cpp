#include "arbhedge/smile.hpp"

#include "arbhedge/errors.hpp"
#include "arbhedge/parallel.hpp"
#include "arbhedge/pde.hpp"

#include <cmath>
#include <limits>
#include <ostream>

namespace arbhedge {

std::vector<SmilePoint> price_curve(const std::vector<double>& strikes, double spot, const MarketParams& params,
                                    const ContractSpec& contract_template, const SmileOptions& opts) {
    params.validate();
    require(spot > 0.0, "spot must be positive");
    for (std::size_t i = 0; i < strikes.size(); ++i) {
        require(strikes[i] > 0.0, "strikes must be positive");
        require(i == 0 || strikes[i] > strikes[i - 1], "strikes must be strictly increasing");
    }
    const double sigma_ref = opts.sigma_ref > 0.0 ? opts.sigma_ref : params.sigma1;
    const double maturity = contract_template.maturity;

    std::vector<SmilePoint> points(strikes.size());
    parallel_for(strikes.size(), [&](std::size_t i) {
        SmilePoint& pt = points[i];
        pt.strike = strikes[i];
        pt.price_classical = bs_price({spot, params.r, maturity}, {pt.strike, maturity}, sigma_ref);
        try {
            ContractSpec contract = contract_template;
            contract.strike = pt.strike;
            const DerivedConstants dc = derive_constants(params, contract);

            SolverConfig cfg = default_solver_config(dc, opts.dt);
            cfg.theta = opts.theta;
            cfg.picard_tol = opts.picard_tol_rel * dc.A;
            cfg.picard_max = opts.picard_max;
            cfg.snapshot_stride = std::numeric_limits<int>::max();

            const SolutionSurface surface = opts.control ? solve_classical_bs(params, contract, opts.n_nodes, cfg)
                                                         : solve_arbitrage_problem(params, contract, opts.n_nodes, cfg);
            const auto [y1, tau] = to_computational(spot, 0.0, dc, contract);
            const double price = price_from_grid_value(surface.value_at(y1, tau), tau, params.r);
            pt.price_arbitrage = price;
            pt.price_out_of_bounds = !(price >= 0.0 && price <= spot);
        } catch (const Error& e) {
            pt.error = e.what();
        }
    });
    return points;
}

void invert_points(std::vector<SmilePoint>& points, double spot, double maturity, double rate) {
    for (auto& pt : points) {
        pt.implied_vol.reset();
        pt.vol_status = VolStatus::NoSolution;
        if (!pt.price_arbitrage) continue;
        const auto iv = bs_implied_vol({spot, rate, maturity}, {pt.strike, maturity}, *pt.price_arbitrage);
        pt.vol_status = iv.status;
        if (iv.status == VolStatus::Ok) pt.implied_vol = iv.sigma;
    }
}

double fit_skew(const std::vector<SmilePoint>& points, double spot, double window) {
    double n = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& pt : points) {
        if (pt.vol_status != VolStatus::Ok || !pt.implied_vol) continue;
        if (std::abs(pt.strike / spot - 1.0) > window) continue;
        n += 1.0;
        sx += pt.strike;
        sy += *pt.implied_vol;
        sxx += pt.strike * pt.strike;
        sxy += pt.strike * *pt.implied_vol;
    }
    if (n < 2.0) throw Error(ErrorCode::EmptyCurve, "fewer than two OK implied vols inside the strike window");
    const double denom = n * sxx - sx * sx;
    return (n * sxy - sx * sy) / denom;
}

SmileCurve implied_curve(std::vector<SmilePoint> points, double maturity, double spot, double rate, double window) {
    SmileCurve curve{maturity, spot, std::move(points), std::nullopt};
    invert_points(curve.points, spot, maturity, rate);
    curve.skew = fit_skew(curve.points, spot, window);
    return curve;
}

std::vector<SmileCurve> build_smile(const std::vector<double>& strikes, const std::vector<double>& maturities,
                                    double spot, const MarketParams& params, const ContractSpec& contract_template,
                                    const SmileOptions& opts) {
    std::vector<SmileCurve> curves;
    for (const double maturity : maturities) {
        require(maturity > 0.0, "maturities must be positive");
        ContractSpec contract = contract_template;
        contract.maturity = maturity;
        SmileCurve curve{maturity, spot, price_curve(strikes, spot, params, contract, opts), std::nullopt};
        invert_points(curve.points, spot, maturity, params.r);
        try {
            curve.skew = fit_skew(curve.points, spot, opts.skew_window);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::EmptyCurve) throw;
        }
        curves.push_back(std::move(curve));
    }
    return curves;
}

void write_smile_csv(std::ostream& out, const SmileCurve& curve) {
    out << "strike,price_classical,price_arbitrage,implied_vol,vol_status\n";
    out.precision(17);
    for (const auto& pt : curve.points) {
        out << pt.strike << ',' << pt.price_classical << ',';
        if (pt.price_arbitrage) out << *pt.price_arbitrage;
        out << ',';
        if (pt.implied_vol) out << *pt.implied_vol;
        out << ',' << (pt.error ? std::string("ERROR") : std::string(to_string(pt.vol_status))) << '\n';
    }
}

}  // namespace arbhedge
