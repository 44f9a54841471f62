#include "arbhedge/report.hpp"

namespace arbhedge {

using nlohmann::json;

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

json to_json(const DerivedConstants& dc) {
    return {{"c1", dc.c1},         {"c2", dc.c2},           {"eps", dc.eps}, {"A", dc.A},
            {"B", dc.B},           {"x0", dc.x0},           {"s_minus", dc.s_minus},
            {"s_plus", dc.s_plus}, {"s0", dc.s0},           {"lambda", dc.lambda}};
}

json to_json(const CslsReport& report) {
    json conditions = json::array();
    for (const auto& c : report.conditions) {
        conditions.push_back({{"name", c.name}, {"status", std::string(to_string(c.status))}, {"detail", c.detail}});
    }
    return {{"conditions", conditions},
            {"x0_predicted", report.x0_predicted},
            {"x0_observed", optional_number(report.x0_observed)},
            {"sup_error_left", optional_number(report.sup_error_left)},
            {"sup_error_right", optional_number(report.sup_error_right)},
            {"layer_width_used", optional_number(report.layer_width_used)},
            {"u0_crossing", optional_number(report.u0_crossing)}};
}

json to_json(const HedgeSimResult& r) {
    json per_path = json::array();
    for (const auto& p : r.paths) {
        per_path.push_back({{"tracking_error", p.tracking_error},
                            {"terminal_payoff", p.terminal_payoff},
                            {"steps_used", p.steps_used},
                            {"corridor_exit", p.corridor_exit}});
    }
    return {{"n_paths", r.paths.size()},
            {"initial_value", r.initial_value},
            {"bs_price_t0", r.bs_price_t0},
            {"arbitrage_margin", r.arbitrage_margin},
            {"mean_seller_pnl", r.mean_seller_pnl},
            {"mean_tracking_error", r.mean_tracking_error},
            {"mean_abs_tracking_error", r.mean_abs_tracking_error},
            {"std_tracking_error", r.std_tracking_error},
            {"mean_payoff", r.mean_payoff},
            {"mean_payoff_in_the_money", r.mean_payoff_in_the_money},
            {"fraction_in_the_money", r.fraction_in_the_money},
            {"corridor_exits", r.corridor_exits},
            {"paths", per_path}};
}

json to_json(const SmileCurve& curve) {
    json points = json::array();
    for (const auto& pt : curve.points) {
        points.push_back({{"strike", pt.strike},
                          {"price_classical", pt.price_classical},
                          {"price_arbitrage", optional_number(pt.price_arbitrage)},
                          {"implied_vol", optional_number(pt.implied_vol)},
                          {"vol_status", std::string(to_string(pt.vol_status))},
                          {"price_out_of_bounds", pt.price_out_of_bounds},
                          {"error", pt.error ? json(*pt.error) : json(nullptr)}});
    }
    return {{"maturity", curve.maturity}, {"spot", curve.spot}, {"skew", optional_number(curve.skew)},
            {"points", points}};
}

json solve_summary(const SolutionSurface& surface, const DerivedConstants& dc) {
    const auto& u = surface.final_profile();
    return {{"n_nodes", surface.grid.n_nodes()},
            {"h", surface.grid.h()},
            {"eps", surface.eps},
            {"tau_final", surface.taus.back()},
            {"stored_levels", surface.taus.size()},
            {"u_min", u.minCoeff()},
            {"u_max", u.maxCoeff()},
            {"crossing_of_A", optional_number(first_crossing(surface.grid, u, dc.A))},
            {"x0_predicted", dc.x0}};
}

}  // namespace arbhedge
