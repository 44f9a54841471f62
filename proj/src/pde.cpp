#include "arbhedge/pde.hpp"

#include "arbhedge/errors.hpp"
#include "arbhedge/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace arbhedge {

Grid1D::Grid1D(double a, double b, Eigen::Index n_nodes) : a_(a), b_(b) {
    require(std::isfinite(a) && std::isfinite(b) && a < b, "grid needs a < b");
    require(n_nodes >= 3, "grid needs at least 3 nodes");
    nodes_ = Eigen::VectorXd::LinSpaced(n_nodes, a, b);
    h_ = (b - a) / static_cast<double>(n_nodes - 1);
}

Reaction Reaction::none() {
    return {[](double) { return 0.0; }, [](double) { return 0.0; }};
}

Reaction Reaction::cubic(double A, double B) {
    const CubicNonlinearity<double> f{A, B};
    return {f, [f](double u) { return f.derivative(u); }};
}

Reaction Reaction::linear(double slope) {
    return {[slope](double u) { return slope * u; }, [slope](double) { return slope; }};
}

void SolverConfig::validate() const {
    require(dt > 0.0, "dt must be positive");
    require(theta >= 0.0 && theta <= 1.0, "theta must lie in [0, 1]");
    require(picard_tol > 0.0, "picard_tol must be positive");
    require(picard_max >= 1, "picard_max must be at least 1");
    require(snapshot_stride >= 1, "snapshot_stride must be at least 1");
}

namespace {

struct Bracket {
    Eigen::Index lo;
    double weight;  // of the upper neighbour
};

Bracket locate(const Grid1D& grid, double y) {
    const double slack = 1e-12 * std::max(1.0, grid.b() - grid.a());
    if (!(y >= grid.a() - slack && y <= grid.b() + slack)) {
        throw Error(ErrorCode::OutOfCorridor, "y1 = " + std::to_string(y) + " outside the grid");
    }
    const double s = std::clamp((y - grid.a()) / grid.h(), 0.0, static_cast<double>(grid.n_nodes() - 1));
    const auto lo = std::min<Eigen::Index>(static_cast<Eigen::Index>(s), grid.n_nodes() - 2);
    return {lo, s - static_cast<double>(lo)};
}

Bracket locate_level(const std::vector<double>& taus, double tau) {
    const double slack = 1e-12 * std::max(1.0, taus.back());
    if (!(tau >= taus.front() - slack && tau <= taus.back() + slack)) {
        throw Error(ErrorCode::OutOfCorridor, "tau = " + std::to_string(tau) + " outside the stored levels");
    }
    if (taus.size() == 1) return {0, 0.0};
    const auto it = std::upper_bound(taus.begin(), taus.end(), tau);
    auto hi = static_cast<Eigen::Index>(it - taus.begin());
    hi = std::clamp<Eigen::Index>(hi, 1, static_cast<Eigen::Index>(taus.size()) - 1);
    const double t0 = taus[hi - 1];
    const double t1 = taus[hi];
    return {hi - 1, std::clamp((tau - t0) / (t1 - t0), 0.0, 1.0)};
}

double nodal_slope(const Eigen::VectorXd& u, Eigen::Index i, double h) {
    const Eigen::Index last = u.size() - 1;
    if (i == 0) return (u[1] - u[0]) / h;
    if (i == last) return (u[last] - u[last - 1]) / h;
    return (u[i + 1] - u[i - 1]) / (2.0 * h);
}

/// One theta-scheme step with Newton-linearised reaction.
class ThetaStepper {
public:
    ThetaStepper(const Grid1D& grid, double eps, const Reaction& reaction, const SolverConfig& cfg, double dt)
        : reaction_(reaction), cfg_(cfg), dt_(dt), k_(eps * eps / (grid.h() * grid.h())), n_(grid.n_nodes()),
          lower_(n_), diag_(n_), upper_(n_), rhs_(n_) {}

    Eigen::VectorXd step(const Eigen::VectorXd& u) {
        const double theta = cfg_.theta;
        // Explicit part: (1 - theta)(k D2 u - f(u)), interior only.
        Eigen::VectorXd explicit_part = Eigen::VectorXd::Zero(n_);
        for (Eigen::Index i = 1; i < n_ - 1; ++i) {
            explicit_part[i] =
                (1.0 - theta) * (k_ * (u[i + 1] - 2.0 * u[i] + u[i - 1]) - reaction_.value(u[i]));
        }

        Eigen::VectorXd w = u;
        for (int it = 0; it < cfg_.picard_max; ++it) {
            lower_[0] = upper_[0] = rhs_[0] = 0.0;
            diag_[0] = 1.0;
            lower_[n_ - 1] = upper_[n_ - 1] = rhs_[n_ - 1] = 0.0;
            diag_[n_ - 1] = 1.0;
            for (Eigen::Index i = 1; i < n_ - 1; ++i) {
                const double implicit_part = theta * (k_ * (w[i + 1] - 2.0 * w[i] + w[i - 1]) - reaction_.value(w[i]));
                rhs_[i] = -((w[i] - u[i]) / dt_ - implicit_part - explicit_part[i]);
                lower_[i] = upper_[i] = -theta * k_;
                diag_[i] = 1.0 / dt_ + 2.0 * theta * k_ + theta * reaction_.derivative(w[i]);
            }
            const Eigen::VectorXd delta = solve_tridiagonal<double>(lower_, diag_, upper_, rhs_);
            w += delta;
            if (!w.allFinite()) throw Error(ErrorCode::NonFinite, "solution overflowed during time stepping");
            if (delta.lpNorm<Eigen::Infinity>() <= cfg_.picard_tol) return w;
        }
        throw Error(ErrorCode::PicardDiverged,
                    "nonlinear iteration did not reach tolerance in " + std::to_string(cfg_.picard_max) + " iterations");
    }

private:
    const Reaction& reaction_;
    const SolverConfig& cfg_;
    double dt_;
    double k_;
    Eigen::Index n_;
    Eigen::VectorXd lower_, diag_, upper_, rhs_;
};

Eigen::VectorXd checked_start(const Grid1D& grid, double eps, const Eigen::VectorXd& u0, double bc_left,
                              double bc_right, const SolverConfig& cfg) {
    cfg.validate();
    require(eps > 0.0, "eps must be positive");
    require(u0.size() == grid.n_nodes(), "initial profile size does not match the grid");
    require(u0.allFinite(), "initial profile must be finite");
    const auto close = [](double x, double y) { return std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(y)); };
    require(close(u0[0], bc_left) && close(u0[u0.size() - 1], bc_right),
            "initial profile must match the boundary values at the end nodes");
    Eigen::VectorXd u = u0;
    u[0] = bc_left;
    u[u.size() - 1] = bc_right;
    return u;
}

}  // namespace

double SolutionSurface::value_at(double y, double tau) const {
    const auto [i, wy] = locate(grid, y);
    const auto [j, wt] = locate_level(taus, tau);
    const auto at_level = [&](std::size_t level) {
        const auto& u = values[level];
        return (1.0 - wy) * u[i] + wy * u[i + 1];
    };
    const double v0 = at_level(static_cast<std::size_t>(j));
    if (wt == 0.0) return v0;
    return (1.0 - wt) * v0 + wt * at_level(static_cast<std::size_t>(j) + 1);
}

double SolutionSurface::slope_at(double y, double tau) const {
    const auto [i, wy] = locate(grid, y);
    const auto [j, wt] = locate_level(taus, tau);
    const auto at_level = [&](std::size_t level) {
        const auto& u = values[level];
        return (1.0 - wy) * nodal_slope(u, i, grid.h()) + wy * nodal_slope(u, i + 1, grid.h());
    };
    const double g0 = at_level(static_cast<std::size_t>(j));
    if (wt == 0.0) return g0;
    return (1.0 - wt) * g0 + wt * at_level(static_cast<std::size_t>(j) + 1);
}

SolutionSurface solve_semilinear(const Grid1D& grid, double eps, const Reaction& reaction,
                                 const Eigen::VectorXd& u0, double bc_left, double bc_right, double t_end,
                                 const SolverConfig& cfg) {
    Eigen::VectorXd u = checked_start(grid, eps, u0, bc_left, bc_right, cfg);
    require(t_end > 0.0, "t_end must be positive");

    // The step is shrunk slightly when dt does not divide t_end.
    const auto n_steps = std::max<long long>(1, static_cast<long long>(std::ceil(t_end / cfg.dt - 1e-9)));
    const double dt = t_end / static_cast<double>(n_steps);

    SolutionSurface surface{grid, {0.0}, {u}, eps};
    ThetaStepper stepper(grid, eps, reaction, cfg, dt);
    for (long long n = 1; n <= n_steps; ++n) {
        u = stepper.step(u);
        if (n % cfg.snapshot_stride == 0 || n == n_steps) {
            surface.taus.push_back(n == n_steps ? t_end : static_cast<double>(n) * dt);
            surface.values.push_back(u);
        }
    }
    return surface;
}

StationaryResult march_to_stationary(const Grid1D& grid, double eps, const Reaction& reaction,
                                     const Eigen::VectorXd& u0, double bc_left, double bc_right,
                                     const SolverConfig& cfg, double stat_tol, double t_cap) {
    Eigen::VectorXd u = checked_start(grid, eps, u0, bc_left, bc_right, cfg);
    require(stat_tol > 0.0 && t_cap > 0.0, "stat_tol and t_cap must be positive");

    ThetaStepper stepper(grid, eps, reaction, cfg, cfg.dt);
    double tau = 0.0;
    while (tau < t_cap) {
        Eigen::VectorXd next = stepper.step(u);
        tau += cfg.dt;
        const double rate = (next - u).lpNorm<Eigen::Infinity>() / cfg.dt;
        u = std::move(next);
        if (rate < stat_tol) return {u, tau};
    }
    throw Error(ErrorCode::NotConverged, "no stationary state within tau = " + std::to_string(t_cap));
}

Grid1D corridor_grid(const ContractSpec& contract, Eigen::Index n_nodes) {
    return Grid1D(contract.k_minus, contract.k_plus, n_nodes);
}

Eigen::VectorXd initial_profile(const Grid1D& grid, const DerivedConstants& dc, const ContractSpec& contract) {
    Eigen::VectorXd u0(grid.n_nodes());
    for (Eigen::Index i = 0; i < grid.n_nodes(); ++i) u0[i] = terminal_profile(grid[i], dc, contract);
    const auto [left, right] = boundary_values(dc);
    u0[0] = left;
    u0[grid.n_nodes() - 1] = right;
    return u0;
}

namespace {

SolutionSurface solve_corridor_problem(const MarketParams& params, const ContractSpec& contract,
                                       Eigen::Index n_nodes, const SolverConfig& cfg, bool with_cubic) {
    const DerivedConstants dc = derive_constants(params, contract);
    const Grid1D grid = corridor_grid(contract, n_nodes);
    const auto [left, right] = boundary_values(dc);
    const Reaction reaction = with_cubic ? Reaction::cubic(dc.A, dc.B) : Reaction::none();
    return solve_semilinear(grid, dc.eps, reaction, initial_profile(grid, dc, contract), left, right,
                            contract.maturity, cfg);
}

}  // namespace

SolutionSurface solve_classical_bs(const MarketParams& params, const ContractSpec& contract, Eigen::Index n_nodes,
                                   const SolverConfig& cfg) {
    return solve_corridor_problem(params, contract, n_nodes, cfg, false);
}

SolutionSurface solve_arbitrage_problem(const MarketParams& params, const ContractSpec& contract,
                                        Eigen::Index n_nodes, const SolverConfig& cfg) {
    return solve_corridor_problem(params, contract, n_nodes, cfg, true);
}

SolverConfig default_solver_config(const DerivedConstants& dc, double dt) {
    SolverConfig cfg;
    cfg.dt = dt;
    cfg.picard_tol = 1e-10 * dc.A;
    return cfg;
}

void write_surface_csv(std::ostream& out, const SolutionSurface& surface) {
    out << "tau,node_index,y1,u\n";
    out.precision(17);
    for (std::size_t level = 0; level < surface.taus.size(); ++level) {
        const auto& u = surface.values[level];
        for (Eigen::Index i = 0; i < u.size(); ++i) {
            out << surface.taus[level] << ',' << i << ',' << surface.grid[i] << ',' << u[i] << '\n';
        }
    }
}

}  // namespace arbhedge
