#pragma once

#include "arbhedge/pde.hpp"
#include "arbhedge/transform.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace arbhedge {

/// Roots of the balanced cubic: two stable (phi1, phi2) around an unstable phi0.
struct CubicRoots {
    double phi1;
    double phi0;
    double phi2;

    static CubicRoots from(const DerivedConstants& dc) { return {0.0, dc.A, dc.B}; }
};

enum class ConditionStatus { Pass, Fail, DegenerateAccepted };

constexpr std::string_view to_string(ConditionStatus s) noexcept {
    switch (s) {
    case ConditionStatus::Pass: return "PASS";
    case ConditionStatus::Fail: return "FAIL";
    case ConditionStatus::DegenerateAccepted: return "DEGENERATE_ACCEPTED";
    }
    return "UNKNOWN";
}

struct ConditionResult {
    std::string name;  ///< "A1" ... "A6"
    ConditionStatus status = ConditionStatus::Fail;
    std::string detail;

    bool satisfied() const { return status != ConditionStatus::Fail; }
};

struct CslsReport {
    std::vector<ConditionResult> conditions;
    double x0_predicted = 0.0;
    std::optional<double> x0_observed;
    std::optional<double> sup_error_left;
    std::optional<double> sup_error_right;
    std::optional<double> layer_width_used;
    /// Where the initial profile crosses phi0; informational.
    std::optional<double> u0_crossing;

    const ConditionResult* find(std::string_view name) const;
};

/// J = integral of f over [phi1, phi2], by adaptive Gauss-Kronrod quadrature.
double compute_J(const std::function<double(double)>& f, double phi1, double phi2);

/// x0 = a + (b - a) sqrt(f'(phi2)) / (sqrt(f'(phi2)) + sqrt(f'(phi1))).
double transition_point(const std::function<double(double)>& f_prime, double phi1, double phi2, double a, double b);

/// Limiting step: phi1 = 0 left of x0, phi2 = 2A right of it, A at x0 itself.
double limit_profile(double x, double x0, const DerivedConstants& dc);

/// Numerical check of the step-formation hypotheses for an x-independent f.
///
/// A1: f' > 0 at phi1 and phi2, f' < 0 at phi0, and exactly these three zeros
///     on [phi1 - s, phi2 + s] with s = (phi2 - phi1)/2.
/// A2: J(x0) = 0 with dJ/dx < 0. J is constant here, so J = 0 is reported as
///     the degenerate branch (J vanishes identically) and anything else fails.
/// A3: phi1 <= g_a <= phi2 and phi1 <= g_b <= phi2, with
///     int_{phi1}^{y} f > 0 for y in (phi1, g_a] and int_{phi2}^{y} f > 0 for
///     y in [g_b, phi2), checked on sampled y. A boundary value sitting on a
///     stable root leaves the corresponding integral clause empty.
/// A4: the zero set of J is a finite union of points/segments; always true
///     for constant J (whole segment when J = 0, empty otherwise).
/// A5: u0 matches the boundary data and phi1 <= u0 <= phi2 at every node.
/// A6: some node left of x0 has u0 < phi0 and some node right of x0 has
///     u0 > phi0; additionally u0 < phi0 on [a, x0] wherever J < 0 and
///     u0 > phi0 on (x0, b] wherever J > 0 (vacuous when J = 0).
CslsReport check_conditions(const std::function<double(double)>& f, const std::function<double(double)>& f_prime,
                            const CubicRoots& roots, double g_a, double g_b, const Grid1D& grid,
                            const Eigen::VectorXd& u0, double x0);

struct LimitComparison {
    double sup_error_left;
    double sup_error_right;
    double x0_observed;
    double layer_width;
};

/// Sup distance of a stationary profile to the limiting step outside
/// (x0 - w eps, x0 + w eps); x0_observed is the first linearly interpolated
/// crossing of u = A. Throws NoCrossing if the profile never reaches A.
LimitComparison compare_to_limit(const Grid1D& grid, const Eigen::VectorXd& profile, double x0,
                                 const DerivedConstants& dc, double layer_halfwidth_in_eps = 10.0);

/// First linearly interpolated crossing of `level`, if any.
std::optional<double> first_crossing(const Grid1D& grid, const Eigen::VectorXd& profile, double level);

}  // namespace arbhedge
