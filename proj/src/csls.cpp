#include "arbhedge/csls.hpp"

#include "arbhedge/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace arbhedge {

const ConditionResult* CslsReport::find(std::string_view name) const {
    const auto it = std::find_if(conditions.begin(), conditions.end(), [&](const auto& c) { return c.name == name; });
    return it == conditions.end() ? nullptr : &*it;
}

double compute_J(const std::function<double(double)>& f, double phi1, double phi2) {
    require(phi1 < phi2, "compute_J needs phi1 < phi2");
    double error = 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, phi1, phi2, 15, 1e-14, &error);
}

double transition_point(const std::function<double(double)>& f_prime, double phi1, double phi2, double a, double b) {
    require(a < b, "transition_point needs a < b");
    const double d1 = f_prime(phi1);
    const double d2 = f_prime(phi2);
    require(d1 > 0.0 && d2 > 0.0, "f' must be positive at both stable roots");
    const double w1 = std::sqrt(d1);
    const double w2 = std::sqrt(d2);
    return a + (b - a) * w2 / (w2 + w1);
}

double limit_profile(double x, double x0, const DerivedConstants& dc) {
    if (x < x0) return 0.0;
    if (x > x0) return dc.B;
    return dc.A;
}

std::optional<double> first_crossing(const Grid1D& grid, const Eigen::VectorXd& u, double level) {
    for (Eigen::Index i = 0; i + 1 < u.size(); ++i) {
        const double lo = u[i] - level;
        const double hi = u[i + 1] - level;
        if (lo == 0.0) return grid[i];
        if (lo * hi < 0.0) return grid[i] + grid.h() * lo / (lo - hi);
    }
    if (u[u.size() - 1] == level) return grid[u.size() - 1];
    return std::nullopt;
}

namespace {

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

ConditionResult check_a1(const std::function<double(double)>& f, const std::function<double(double)>& fp,
                         const CubicRoots& roots) {
    ConditionResult r{"A1", ConditionStatus::Fail, ""};
    if (!(roots.phi1 < roots.phi0 && roots.phi0 < roots.phi2)) {
        r.detail = "roots not ordered phi1 < phi0 < phi2";
        return r;
    }
    const double d1 = fp(roots.phi1), d0 = fp(roots.phi0), d2 = fp(roots.phi2);
    if (!(d1 > 0.0 && d2 > 0.0 && d0 < 0.0)) {
        r.detail = "sign pattern of f' at the roots violated: f'(phi1)=" + fmt(d1) + ", f'(phi0)=" + fmt(d0) +
                   ", f'(phi2)=" + fmt(d2);
        return r;
    }

    // Count sign changes of f on the bounding band [phi1 - s, phi2 + s].
    const double s = 0.5 * (roots.phi2 - roots.phi1);
    const double lo = roots.phi1 - s;
    const double hi = roots.phi2 + s;
    constexpr int samples = 4001;  // hits phi1, phi0 = midpoint, phi2 exactly for symmetric roots
    int zeros = 0;
    double prev = f(lo);
    for (int k = 1; k < samples; ++k) {
        const double u = lo + (hi - lo) * k / (samples - 1);
        const double cur = f(u);
        if (cur == 0.0 || prev * cur < 0.0) {
            if (prev != 0.0) ++zeros;
        }
        prev = cur;
    }
    if (zeros != 3) {
        r.detail = "f has " + std::to_string(zeros) + " zeros on the bounding band, expected 3";
        return r;
    }
    r.status = ConditionStatus::Pass;
    r.detail = "f'(phi1)=" + fmt(d1) + " > 0, f'(phi0)=" + fmt(d0) + " < 0, f'(phi2)=" + fmt(d2) +
               " > 0; exactly three zeros on the bounding band";
    return r;
}

}  // namespace

CslsReport check_conditions(const std::function<double(double)>& f, const std::function<double(double)>& fp,
                            const CubicRoots& roots, double g_a, double g_b, const Grid1D& grid,
                            const Eigen::VectorXd& u0, double x0) {
    require(u0.size() == grid.n_nodes(), "initial profile size does not match the grid");
    CslsReport report;
    report.x0_predicted = x0;
    report.conditions.push_back(check_a1(f, fp, roots));

    const double span = roots.phi2 - roots.phi1;
    const double J = compute_J(f, roots.phi1, roots.phi2);
    const double j_tol = 1e-10 * std::pow(0.5 * span, 4);
    const bool j_zero = std::abs(J) <= j_tol;

    // A2
    {
        ConditionResult r{"A2", ConditionStatus::Fail, ""};
        if (j_zero) {
            r.status = ConditionStatus::DegenerateAccepted;
            r.detail = "J = " + fmt(J) + " vanishes identically on [a, b]; dJ/dx(x0) < 0 cannot hold, "
                       "accepted as the degenerate branch";
        } else {
            r.detail = "J = " + fmt(J) + " is a nonzero constant, so J(x0) = 0 has no solution";
        }
        report.conditions.push_back(r);
    }

    // A3
    {
        ConditionResult r{"A3", ConditionStatus::Pass, ""};
        std::vector<std::string> issues;
        const auto inside = [&](double g) { return g >= roots.phi1 && g <= roots.phi2; };
        if (!inside(g_a)) issues.push_back("g_a = " + fmt(g_a) + " outside [phi1, phi2]");
        if (!inside(g_b)) issues.push_back("g_b = " + fmt(g_b) + " outside [phi1, phi2]");
        if (issues.empty()) {
            constexpr int samples = 64;
            for (int k = 1; k <= samples && g_a > roots.phi1; ++k) {
                const double y = roots.phi1 + (g_a - roots.phi1) * k / samples;
                if (!(compute_J(f, roots.phi1, y) > 0.0)) {
                    issues.push_back("integral from phi1 to " + fmt(y) + " is not positive");
                    break;
                }
            }
            for (int k = 0; k < samples && g_b < roots.phi2; ++k) {
                const double y = g_b + (roots.phi2 - g_b) * k / samples;
                if (!(-compute_J(f, y, roots.phi2) > 0.0)) {
                    issues.push_back("integral from phi2 to " + fmt(y) + " is not positive");
                    break;
                }
            }
        }
        if (issues.empty()) {
            r.detail = "g_a = " + fmt(g_a) + ", g_b = " + fmt(g_b) + " within [phi1, phi2]; integral clauses hold";
            if (g_a == roots.phi1 || g_b == roots.phi2) r.detail += " (boundary value on a stable root)";
        } else {
            r.status = ConditionStatus::Fail;
            for (const auto& s : issues) r.detail += (r.detail.empty() ? "" : "; ") + s;
        }
        report.conditions.push_back(r);
    }

    // A4
    report.conditions.push_back({"A4", ConditionStatus::Pass,
                                 j_zero ? "J = 0 on the whole segment [a, b] (one segment)"
                                        : "J is a nonzero constant; its zero set is empty"});

    // A5
    {
        ConditionResult r{"A5", ConditionStatus::Pass, ""};
        const double tol = 1e-12 * std::max(1.0, span);
        const Eigen::Index last = u0.size() - 1;
        if (std::abs(u0[0] - g_a) > tol || std::abs(u0[last] - g_b) > tol) {
            r.status = ConditionStatus::Fail;
            r.detail = "u0 does not match the boundary data";
        } else if (u0.minCoeff() < roots.phi1 - tol || u0.maxCoeff() > roots.phi2 + tol) {
            r.status = ConditionStatus::Fail;
            r.detail = "u0 leaves [phi1, phi2]: range [" + fmt(u0.minCoeff()) + ", " + fmt(u0.maxCoeff()) + "]";
        } else {
            r.detail = "u0 matches the boundary data and stays in [phi1, phi2]";
        }
        report.conditions.push_back(r);
    }

    // A6
    {
        ConditionResult r{"A6", ConditionStatus::Pass, ""};
        std::optional<double> x_minus, x_plus;
        bool left_clause = true, right_clause = true;
        for (Eigen::Index i = 0; i < u0.size(); ++i) {
            const double x = grid[i];
            if (x > grid.a() && x < x0 && u0[i] < roots.phi0 && !x_minus) x_minus = x;
            if (x > x0 && x < grid.b() && u0[i] > roots.phi0 && !x_plus) x_plus = x;
            if (!j_zero && J < 0.0 && x <= x0 && !(u0[i] < roots.phi0)) left_clause = false;
            if (!j_zero && J > 0.0 && x > x0 && !(u0[i] > roots.phi0)) right_clause = false;
        }
        std::vector<std::string> issues;
        if (!x_minus) issues.push_back("no interior node left of x0 with u0 < phi0");
        if (!x_plus) issues.push_back("no interior node right of x0 with u0 > phi0");
        if (!left_clause) issues.push_back("u0 >= phi0 somewhere on [a, x0] although J < 0");
        if (!right_clause) issues.push_back("u0 <= phi0 somewhere on (x0, b] although J > 0");
        if (issues.empty()) {
            r.detail = "x(-) = " + fmt(*x_minus) + ", x(+) = " + fmt(*x_plus) +
                       (j_zero ? "; sign clauses vacuous since J = 0" : "; sign clauses hold");
        } else {
            r.status = ConditionStatus::Fail;
            for (const auto& s : issues) r.detail += (r.detail.empty() ? "" : "; ") + s;
        }
        report.conditions.push_back(r);
    }

    report.u0_crossing = first_crossing(grid, u0, roots.phi0);
    return report;
}

LimitComparison compare_to_limit(const Grid1D& grid, const Eigen::VectorXd& profile, double x0,
                                 const DerivedConstants& dc, double layer_halfwidth_in_eps) {
    require(profile.size() == grid.n_nodes(), "profile size does not match the grid");
    require(layer_halfwidth_in_eps >= 0.0, "layer half-width must be non-negative");
    const auto crossing = first_crossing(grid, profile, dc.A);
    if (!crossing) throw Error(ErrorCode::NoCrossing, "profile never crosses u = A");

    const double width = layer_halfwidth_in_eps * dc.eps;
    LimitComparison out{0.0, 0.0, *crossing, width};
    for (Eigen::Index i = 0; i < profile.size(); ++i) {
        if (grid[i] < x0 - width) out.sup_error_left = std::max(out.sup_error_left, std::abs(profile[i]));
        if (grid[i] > x0 + width) out.sup_error_right = std::max(out.sup_error_right, std::abs(profile[i] - dc.B));
    }
    return out;
}

}  // namespace arbhedge
