#pragma once

#include "arbhedge/market_model.hpp"
#include "arbhedge/pde.hpp"
#include "arbhedge/transform.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace arbhedge {

struct MonteCarloConfig {
    int n_paths = 1000;
    int n_steps = 250;
    std::uint64_t seed = 20240601;
    double s1_0 = 20.0;
    double s2_0 = 1.0;
};

struct SmileConfig {
    double spot = 20.0;
    std::vector<double> strikes;
    std::vector<double> maturities;
    double sigma_ref = 0.0;  ///< 0 means sigma1
    double window = 0.2;
};

struct CslsConfig {
    double layer_halfwidth_eps = 10.0;
    double stat_tol_rel = 1e-6;  ///< stationarity tolerance on |du/dt|, relative to A
    double t_cap = 10.0;
};

/// One experiment, as read from a JSON file.
struct ExperimentConfig {
    MarketParams market;
    ContractSpec contract;
    Eigen::Index grid_nodes = 101;
    double dt = 2e-4;
    double theta = 0.5;
    double picard_tol_rel = 1e-10;
    int picard_max = 50;
    int snapshot_stride = 1;
    MonteCarloConfig mc;
    SmileConfig smile;
    CslsConfig csls;
    std::filesystem::path output_dir = "out";
    /// Stable digest of the parsed JSON, stamped on every output file.
    std::string hash;

    SolverConfig solver_config(const DerivedConstants& dc) const;
};

/// Parse and validate; every problem found is collected into one
/// ConfigInvalid error whose message lists them line by line.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Multiply grid intervals by `factor` and divide dt by it.
void apply_refinement(ExperimentConfig& cfg, int factor);

/// FNV-1a 64-bit digest of the compact JSON dump, as "fnv1a64:<16 hex digits>".
std::string config_hash(const nlohmann::json& j);

}  // namespace arbhedge
