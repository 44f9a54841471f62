// Batch front end: constants | solve | csls-check | hedge-sim | smile | bs.
//
// Exit codes: 0 success, 2 invalid configuration or arguments, 3 numerical failure.

#include "arbhedge/black_scholes.hpp"
#include "arbhedge/config.hpp"
#include "arbhedge/csls.hpp"
#include "arbhedge/errors.hpp"
#include "arbhedge/hedging.hpp"
#include "arbhedge/market_model.hpp"
#include "arbhedge/pde.hpp"
#include "arbhedge/report.hpp"
#include "arbhedge/smile.hpp"
#include "arbhedge/transform.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace arbhedge;

namespace {

struct Globals {
    std::string config_path;
    std::string out_dir;
    int refine = 1;
};

ExperimentConfig load(const Globals& g) {
    ExperimentConfig cfg = load_config(g.config_path);
    if (g.refine > 1) {
        apply_refinement(cfg, g.refine);
        cfg.hash += "/refine=" + std::to_string(g.refine);
    }
    if (!g.out_dir.empty()) cfg.output_dir = g.out_dir;
    fs::create_directories(cfg.output_dir);
    if (auto warning = frozen_boundary_warning(cfg.market, cfg.contract)) {
        std::cerr << "warning: " << *warning << '\n';
    }
    return cfg;
}

void write_json(const ExperimentConfig& cfg, const std::string& name, json body) {
    body["config_hash"] = cfg.hash;
    std::ofstream(cfg.output_dir / name) << body.dump(2) << '\n';
    std::cout << body.dump(2) << '\n';
}

template <typename Writer>
void write_csv(const ExperimentConfig& cfg, const std::string& name, Writer&& writer) {
    std::ofstream out(cfg.output_dir / name);
    out << "# config_hash=" << cfg.hash << '\n';
    writer(out);
}

SolutionSurface solve_surface(const ExperimentConfig& cfg, const DerivedConstants& dc, bool classical) {
    const SolverConfig solver = cfg.solver_config(dc);
    return classical ? solve_classical_bs(cfg.market, cfg.contract, cfg.grid_nodes, solver)
                     : solve_arbitrage_problem(cfg.market, cfg.contract, cfg.grid_nodes, solver);
}

int cmd_constants(const Globals& g) {
    const auto cfg = load(g);
    write_json(cfg, "constants.json", to_json(derive_constants(cfg.market, cfg.contract)));
    return 0;
}

int cmd_solve(const Globals& g, bool classical) {
    const auto cfg = load(g);
    const auto dc = derive_constants(cfg.market, cfg.contract);
    const auto surface = solve_surface(cfg, dc, classical);
    write_csv(cfg, "surface.csv", [&](std::ostream& out) { write_surface_csv(out, surface); });
    json summary = solve_summary(surface, dc);
    summary["mode"] = classical ? "classical" : "arbitrage";
    write_json(cfg, "solve_summary.json", summary);
    return 0;
}

int cmd_csls_check(const Globals& g) {
    const auto cfg = load(g);
    const auto dc = derive_constants(cfg.market, cfg.contract);
    const Grid1D grid = corridor_grid(cfg.contract, cfg.grid_nodes);
    const Eigen::VectorXd u0 = initial_profile(grid, dc, cfg.contract);
    const auto [g_a, g_b] = boundary_values(dc);
    const auto f = cubic_nonlinearity(dc);
    const auto f_prime = [f](double u) { return f.derivative(u); };

    CslsReport report = check_conditions(f, f_prime, CubicRoots::from(dc), g_a, g_b, grid, u0,
                                         transition_point(f_prime, 0.0, dc.B, grid.a(), grid.b()));
    const auto stationary = march_to_stationary(grid, dc.eps, Reaction::cubic(dc.A, dc.B), u0, g_a, g_b,
                                                cfg.solver_config(dc), cfg.csls.stat_tol_rel * dc.A, cfg.csls.t_cap);
    json body;
    try {
        const auto cmp = compare_to_limit(grid, stationary.profile, report.x0_predicted, dc, cfg.csls.layer_halfwidth_eps);
        report.x0_observed = cmp.x0_observed;
        report.sup_error_left = cmp.sup_error_left;
        report.sup_error_right = cmp.sup_error_right;
        report.layer_width_used = cmp.layer_width;
        body = to_json(report);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NoCrossing) throw;
        body = to_json(report);
        body["compare_error"] = std::string(to_string(e.code()));
    }
    body["tau_stationary"] = stationary.tau_reached;
    write_json(cfg, "csls_report.json", body);
    return 0;
}

int cmd_hedge_sim(const Globals& g, bool classical, bool ledger, bool dump_paths) {
    const auto cfg = load(g);
    const auto dc = derive_constants(cfg.market, cfg.contract);
    const auto surface = solve_surface(cfg, dc, classical);
    const auto ensemble = simulate_paths(cfg.market, cfg.mc.s1_0, cfg.mc.s2_0, cfg.contract.maturity,
                                         cfg.mc.n_steps, cfg.mc.n_paths, cfg.mc.seed);
    HedgeSimOptions opts;
    opts.classical = classical;
    opts.sigma_ref = cfg.smile.sigma_ref;
    opts.keep_ledger = ledger;
    const auto result = simulate_hedged_portfolio(ensemble, surface, cfg.market, dc, cfg.contract, opts);
    if (ledger) write_csv(cfg, "hedge_ledger.csv", [&](std::ostream& out) { write_ledger_csv(out, result.ledger); });
    if (dump_paths) write_csv(cfg, "paths.csv", [&](std::ostream& out) { write_paths_csv(out, ensemble); });
    json body = to_json(result);
    body["mode"] = classical ? "classical" : "arbitrage";
    write_json(cfg, "hedge_sim.json", body);
    return 0;
}

int cmd_smile(const Globals& g) {
    const auto cfg = load(g);
    if (cfg.smile.strikes.empty() || cfg.smile.maturities.empty()) {
        throw Error(ErrorCode::ConfigInvalid, "smile.strikes and smile.maturities must be non-empty");
    }
    SmileOptions opts;
    opts.n_nodes = cfg.grid_nodes;
    opts.dt = cfg.dt;
    opts.theta = cfg.theta;
    opts.picard_tol_rel = cfg.picard_tol_rel;
    opts.picard_max = cfg.picard_max;
    opts.sigma_ref = cfg.smile.sigma_ref;
    opts.skew_window = cfg.smile.window;
    const auto curves =
        build_smile(cfg.smile.strikes, cfg.smile.maturities, cfg.smile.spot, cfg.market, cfg.contract, opts);

    json summary = json::array();
    for (const auto& curve : curves) {
        char name[64];
        std::snprintf(name, sizeof name, "smile_T%.6g.csv", curve.maturity);
        write_csv(cfg, name, [&](std::ostream& out) { write_smile_csv(out, curve); });
        summary.push_back({{"maturity", curve.maturity},
                           {"file", name},
                           {"skew", curve.skew ? json(*curve.skew) : json(nullptr)},
                           {"skew_status", curve.skew ? "OK" : "EMPTY_CURVE"}});
    }
    write_json(cfg, "smile_summary.json", {{"spot", cfg.smile.spot}, {"curves", summary}});
    return 0;
}

int cmd_bs(double spot, double strike, double tau, double rate, double sigma, double price) {
    const QuoteContext ctx{spot, rate, tau};
    const VanillaCall call{strike, tau};
    json body{{"spot", spot}, {"strike", strike}, {"tau", tau}, {"rate", rate}};
    if (sigma > 0.0) {
        body["sigma"] = sigma;
        body["price"] = bs_price(ctx, call, sigma);
        body["delta"] = bs_delta(ctx, call, sigma);
    } else {
        const auto iv = bs_implied_vol(ctx, call, price);
        body["price"] = price;
        body["implied_vol"] = iv.sigma ? json(*iv.sigma) : json(nullptr);
        body["vol_status"] = std::string(to_string(iv.status));
        body["iterations"] = iv.iterations;
    }
    std::cout << body.dump(2) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Arbitrage hedging pipeline: reduced PDE, step-structure checks, hedge simulation, smile"};
    app.require_subcommand(1);

    Globals g;
    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", g.config_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", g.out_dir, "output directory (overrides output_dir in the config)");
        sub->add_option("--refine", g.refine, "grid and time-step refinement multiplier")->check(CLI::PositiveNumber);
    };

    auto* constants = app.add_subcommand("constants", "derived constants as JSON");
    add_common(constants);

    bool classical = false;
    auto* solve = app.add_subcommand("solve", "march the reduced problem and dump the surface");
    add_common(solve);
    solve->add_flag("--classical", classical, "solve with f = 0 (delta2 = 0, classical Black-Scholes)");

    auto* csls = app.add_subcommand("csls-check", "check step-formation conditions and the stationary profile");
    add_common(csls);

    bool ledger = false, dump_paths = false;
    auto* hedge = app.add_subcommand("hedge-sim", "Monte Carlo simulation of the hedged portfolio");
    add_common(hedge);
    hedge->add_flag("--classical", classical, "classical delta hedge on the f = 0 surface");
    hedge->add_flag("--ledger", ledger, "write the per-step ledger CSV for the first paths");
    hedge->add_flag("--paths", dump_paths, "write the simulated paths CSV");

    auto* smile = app.add_subcommand("smile", "price and implied-vol curves across strikes per maturity");
    add_common(smile);

    double spot = 0.0, strike = 0.0, tau = 0.0, rate = 0.0, sigma = 0.0, price = 0.0;
    auto* bs = app.add_subcommand("bs", "one-shot Black-Scholes price or implied volatility");
    bs->add_option("--spot", spot)->required();
    bs->add_option("--strike", strike)->required();
    bs->add_option("--tau", tau)->required();
    bs->add_option("--rate", rate);
    auto* sigma_opt = bs->add_option("--sigma", sigma, "price at this volatility");
    auto* price_opt = bs->add_option("--price", price, "invert this price");
    sigma_opt->excludes(price_opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*constants) return cmd_constants(g);
        if (*solve) return cmd_solve(g, classical);
        if (*csls) return cmd_csls_check(g);
        if (*hedge) return cmd_hedge_sim(g, classical, ledger, dump_paths);
        if (*smile) return cmd_smile(g);
        if (*bs) {
            if (!*sigma_opt && !*price_opt) {
                std::cerr << "bs: give --sigma or --price\n";
                return 2;
            }
            return cmd_bs(spot, strike, tau, rate, sigma, price);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        const bool bad_input = e.code() == ErrorCode::ConfigInvalid || e.code() == ErrorCode::InvalidArgument;
        return bad_input ? 2 : 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
