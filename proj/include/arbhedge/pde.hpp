#pragma once

#include "arbhedge/transform.hpp"

#include <Eigen/Core>

#include <functional>
#include <iosfwd>
#include <vector>

namespace arbhedge {

/// Uniform grid on [a, b].
class Grid1D {
public:
    Grid1D(double a, double b, Eigen::Index n_nodes);

    double a() const { return a_; }
    double b() const { return b_; }
    double h() const { return h_; }
    Eigen::Index n_nodes() const { return nodes_.size(); }
    const Eigen::VectorXd& nodes() const { return nodes_; }
    double operator[](Eigen::Index i) const { return nodes_[i]; }

private:
    double a_;
    double b_;
    double h_;
    Eigen::VectorXd nodes_;
};

/// Reaction term f(u) together with f'(u), as used in eps^2 u_xx - u_t = f(u).
struct Reaction {
    std::function<double(double)> value;
    std::function<double(double)> derivative;

    /// f = 0: the plain heat equation.
    static Reaction none();
    static Reaction cubic(double A, double B);
    static Reaction linear(double slope);
};

struct SolverConfig {
    double dt = 2e-4;
    double theta = 0.5;        ///< 1/2 is Crank-Nicolson
    double picard_tol = 1e-10; ///< absolute, max-norm change between iterates
    int picard_max = 50;
    int snapshot_stride = 1;   ///< keep every n-th level plus the first and last

    void validate() const;
};

/// Stored time levels of a 1-D solve.
struct SolutionSurface {
    Grid1D grid;
    std::vector<double> taus;
    std::vector<Eigen::VectorXd> values;
    double eps = 0.0;

    const Eigen::VectorXd& final_profile() const { return values.back(); }

    /// Linear interpolation in y and between stored levels in tau.
    double value_at(double y, double tau) const;

    /// du/dy: centred differences at interior nodes, one-sided at the ends,
    /// interpolated linearly in y and tau.
    double slope_at(double y, double tau) const;
};

/// Crank-Nicolson (theta-scheme) march of eps^2 u_xx - u_t = f(u) with
/// constant Dirichlet data from u0 to t_end.
///
/// Each step solves
///   (w - u)/dt = theta (eps^2 D2 w - f(w)) + (1 - theta)(eps^2 D2 u - f(u))
/// by iterating on f linearised about the previous iterate; every inner
/// system is tridiagonal. Throws PicardDiverged when picard_max iterations do
/// not reach picard_tol and NonFinite on overflow.
SolutionSurface solve_semilinear(const Grid1D& grid, double eps, const Reaction& reaction,
                                 const Eigen::VectorXd& u0, double bc_left, double bc_right, double t_end,
                                 const SolverConfig& cfg);

struct StationaryResult {
    Eigen::VectorXd profile;
    double tau_reached = 0.0;
};

/// March until max|u^{n+1} - u^n| / dt < stat_tol; throws NotConverged past t_cap.
StationaryResult march_to_stationary(const Grid1D& grid, double eps, const Reaction& reaction,
                                     const Eigen::VectorXd& u0, double bc_left, double bc_right,
                                     const SolverConfig& cfg, double stat_tol, double t_cap);

/// Grid over the computational corridor [K-, K+] with n_nodes points.
Grid1D corridor_grid(const ContractSpec& contract, Eigen::Index n_nodes);

/// Payoff sampled on the grid, with the end nodes set to the Dirichlet data.
Eigen::VectorXd initial_profile(const Grid1D& grid, const DerivedConstants& dc, const ContractSpec& contract);

/// The transformed problem with f = 0 (delta2 = 0): the classical
/// Black-Scholes equation in heat-equation form, marched from tau = 0 to T.
SolutionSurface solve_classical_bs(const MarketParams& params, const ContractSpec& contract, Eigen::Index n_nodes,
                                   const SolverConfig& cfg);

/// The transformed problem with the cubic f(u) = u(u - A)(u - B), marched from tau = 0 to T.
SolutionSurface solve_arbitrage_problem(const MarketParams& params, const ContractSpec& contract,
                                        Eigen::Index n_nodes, const SolverConfig& cfg);

/// Default SolverConfig for a contract: picard_tol = 1e-10 A.
SolverConfig default_solver_config(const DerivedConstants& dc, double dt);

/// CSV with columns tau,node_index,y1,u.
void write_surface_csv(std::ostream& out, const SolutionSurface& surface);

}  // namespace arbhedge
