#include "arbhedge/config.hpp"

#include "arbhedge/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>

namespace arbhedge {

namespace {

using nlohmann::json;

/// Collects schema problems instead of stopping at the first one.
class Reader {
public:
    explicit Reader(std::vector<std::string>& issues) : issues_(issues) {}

    template <typename T>
    void get(const json& obj, const std::string& section, const std::string& key, T& out, bool required) {
        if (!obj.contains(key)) {
            if (required) issues_.push_back(section + "." + key + ": missing");
            return;
        }
        try {
            out = obj.at(key).get<T>();
        } catch (const json::exception&) {
            issues_.push_back(section + "." + key + ": wrong type (" + obj.at(key).dump() + ")");
        }
    }

    const json* section(const json& root, const std::string& name, bool required) {
        if (!root.contains(name)) {
            if (required) issues_.push_back(name + ": missing section");
            return nullptr;
        }
        if (!root.at(name).is_object()) {
            issues_.push_back(name + ": must be an object");
            return nullptr;
        }
        return &root.at(name);
    }

    void check(bool cond, const std::string& what) {
        if (!cond) issues_.push_back(what);
    }

private:
    std::vector<std::string>& issues_;
};

}  // namespace

SolverConfig ExperimentConfig::solver_config(const DerivedConstants& dc) const {
    SolverConfig cfg = default_solver_config(dc, dt);
    cfg.theta = theta;
    cfg.picard_tol = picard_tol_rel * dc.A;
    cfg.picard_max = picard_max;
    cfg.snapshot_stride = snapshot_stride;
    return cfg;
}

ExperimentConfig parse_config(const json& j) {
    std::vector<std::string> issues;
    Reader rd(issues);
    ExperimentConfig cfg;

    if (!j.is_object()) throw Error(ErrorCode::ConfigInvalid, "config root must be a JSON object");

    if (const json* m = rd.section(j, "market", true)) {
        const std::size_t before = issues.size();
        rd.get(*m, "market", "mu1", cfg.market.mu1, true);
        rd.get(*m, "market", "mu2", cfg.market.mu2, true);
        rd.get(*m, "market", "sigma1", cfg.market.sigma1, true);
        rd.get(*m, "market", "sigma2", cfg.market.sigma2, true);
        rd.get(*m, "market", "r", cfg.market.r, true);
        if (issues.size() == before) {
            rd.check(cfg.market.sigma1 > 0.0 && cfg.market.sigma2 > 0.0, "market: volatilities must be positive");
            rd.check(cfg.market.sigma1 != cfg.market.sigma2, "market: sigma1 and sigma2 must differ");
        }
    }

    if (const json* c = rd.section(j, "contract", true)) {
        auto& k = cfg.contract;
        rd.get(*c, "contract", "strike", k.strike, true);
        rd.get(*c, "contract", "maturity", k.maturity, true);
        rd.get(*c, "contract", "alpha1", k.alpha1, false);
        rd.get(*c, "contract", "alpha2", k.alpha2, false);
        const bool by_price = c->contains("s_minus") || c->contains("s_plus");
        const bool by_exponent = c->contains("k_minus") || c->contains("k_plus");
        if (by_price && by_exponent) {
            issues.push_back("contract: give either s_minus/s_plus or k_minus/k_plus, not both");
        } else if (by_price) {
            double s_minus = 0.0, s_plus = 0.0;
            rd.get(*c, "contract", "s_minus", s_minus, true);
            rd.get(*c, "contract", "s_plus", s_plus, true);
            rd.check(s_minus > 0.0 && s_plus > 0.0, "contract: corridor prices must be positive");
            if (s_minus > 0.0 && s_plus > 0.0 && k.alpha1 > 0.0) {
                k.k_minus = k.alpha1 * std::log(s_minus);
                k.k_plus = k.alpha1 * std::log(s_plus);
            }
        } else {
            rd.get(*c, "contract", "k_minus", k.k_minus, true);
            rd.get(*c, "contract", "k_plus", k.k_plus, true);
        }
        rd.check(k.strike > 0.0, "contract: strike must be positive");
        rd.check(k.maturity > 0.0, "contract: maturity must be positive");
        rd.check(k.alpha1 > 0.0 && k.alpha2 > 0.0, "contract: alpha1 and alpha2 must be positive");
        rd.check(k.k_minus < 0.0 && k.k_plus > 0.0, "contract: corridor needs K_minus < 0 < K_plus");
        if (k.alpha1 > 0.0) {
            rd.check(std::exp(k.k_plus / k.alpha1) > k.strike, "contract: corridor cap must exceed the strike");
        }
    }

    if (const json* g = rd.section(j, "grid", false)) {
        rd.get(*g, "grid", "nodes", cfg.grid_nodes, true);
        rd.check(cfg.grid_nodes >= 3, "grid.nodes: need at least 3");
    }

    if (const json* s = rd.section(j, "solver", false)) {
        rd.get(*s, "solver", "dt", cfg.dt, false);
        rd.get(*s, "solver", "theta", cfg.theta, false);
        rd.get(*s, "solver", "picard_tol_rel", cfg.picard_tol_rel, false);
        rd.get(*s, "solver", "picard_max", cfg.picard_max, false);
        rd.get(*s, "solver", "snapshot_stride", cfg.snapshot_stride, false);
        rd.check(cfg.dt > 0.0, "solver.dt: must be positive");
        rd.check(cfg.theta >= 0.0 && cfg.theta <= 1.0, "solver.theta: must lie in [0, 1]");
        rd.check(cfg.picard_tol_rel > 0.0, "solver.picard_tol_rel: must be positive");
        rd.check(cfg.picard_max >= 1, "solver.picard_max: must be at least 1");
        rd.check(cfg.snapshot_stride >= 1, "solver.snapshot_stride: must be at least 1");
    }

    if (const json* m = rd.section(j, "mc", false)) {
        rd.get(*m, "mc", "n_paths", cfg.mc.n_paths, false);
        rd.get(*m, "mc", "n_steps", cfg.mc.n_steps, false);
        rd.get(*m, "mc", "seed", cfg.mc.seed, false);
        rd.get(*m, "mc", "s1_0", cfg.mc.s1_0, false);
        rd.get(*m, "mc", "s2_0", cfg.mc.s2_0, false);
        rd.check(cfg.mc.n_paths >= 1 && cfg.mc.n_steps >= 1, "mc: n_paths and n_steps must be at least 1");
        rd.check(cfg.mc.s1_0 > 0.0 && cfg.mc.s2_0 > 0.0, "mc: initial prices must be positive");
    }

    if (const json* s = rd.section(j, "smile", false)) {
        rd.get(*s, "smile", "spot", cfg.smile.spot, false);
        rd.get(*s, "smile", "strikes", cfg.smile.strikes, false);
        rd.get(*s, "smile", "maturities", cfg.smile.maturities, false);
        rd.get(*s, "smile", "sigma_ref", cfg.smile.sigma_ref, false);
        rd.get(*s, "smile", "window", cfg.smile.window, false);
        rd.check(cfg.smile.spot > 0.0, "smile.spot: must be positive");
        for (std::size_t i = 0; i < cfg.smile.strikes.size(); ++i) {
            rd.check(cfg.smile.strikes[i] > 0.0 && (i == 0 || cfg.smile.strikes[i] > cfg.smile.strikes[i - 1]),
                     "smile.strikes: must be positive and strictly increasing");
        }
        for (const double m : cfg.smile.maturities) rd.check(m > 0.0, "smile.maturities: must be positive");
        rd.check(cfg.smile.sigma_ref >= 0.0, "smile.sigma_ref: must be non-negative");
    }

    if (const json* c = rd.section(j, "csls", false)) {
        rd.get(*c, "csls", "layer_halfwidth_eps", cfg.csls.layer_halfwidth_eps, false);
        rd.get(*c, "csls", "stat_tol_rel", cfg.csls.stat_tol_rel, false);
        rd.get(*c, "csls", "t_cap", cfg.csls.t_cap, false);
        rd.check(cfg.csls.layer_halfwidth_eps >= 0.0, "csls.layer_halfwidth_eps: must be non-negative");
        rd.check(cfg.csls.stat_tol_rel > 0.0 && cfg.csls.t_cap > 0.0, "csls: stat_tol_rel and t_cap must be positive");
    }

    if (j.contains("output_dir")) {
        std::string dir;
        rd.get(j, "config", "output_dir", dir, true);
        cfg.output_dir = dir;
    }

    if (!issues.empty()) {
        std::string msg = std::to_string(issues.size()) + " problem(s) in config:";
        for (const auto& s : issues) msg += "\n  - " + s;
        throw Error(ErrorCode::ConfigInvalid, msg);
    }
    cfg.hash = config_hash(j);
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ConfigInvalid, "cannot open config file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ConfigInvalid, std::string("malformed JSON: ") + e.what());
    }
    return parse_config(j);
}

void apply_refinement(ExperimentConfig& cfg, int factor) {
    require(factor >= 1, "refinement factor must be at least 1");
    cfg.grid_nodes = (cfg.grid_nodes - 1) * factor + 1;
    cfg.dt /= factor;
}

std::string config_hash(const json& j) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char ch : j.dump()) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace arbhedge
