#pragma once

#include <Eigen/Core>

#include <cassert>

namespace arbhedge {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Solve a tridiagonal system by forward elimination and back substitution.
///
/// Row i reads  lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i];
/// lower[0] and upper[n-1] are ignored. No pivoting: the matrix must be
/// diagonally dominant (or otherwise safe for Gaussian elimination without
/// row exchanges), which holds for every system the time steppers build.
template <typename Scalar>
Vector<Scalar> solve_tridiagonal(const Eigen::Ref<const Vector<Scalar>>& lower,
                                 const Eigen::Ref<const Vector<Scalar>>& diag,
                                 const Eigen::Ref<const Vector<Scalar>>& upper,
                                 const Eigen::Ref<const Vector<Scalar>>& rhs) {
    const Eigen::Index n = diag.size();
    assert(lower.size() == n && upper.size() == n && rhs.size() == n);

    Vector<Scalar> c_prime(n);
    Vector<Scalar> x(n);
    c_prime[0] = upper[0] / diag[0];
    x[0] = rhs[0] / diag[0];

    // Forward sweep
    for (Eigen::Index i = 1; i < n; ++i) {
        const Scalar factor = Scalar(1) / (diag[i] - lower[i] * c_prime[i - 1]);
        c_prime[i] = upper[i] * factor;
        x[i] = (rhs[i] - lower[i] * x[i - 1]) * factor;
    }

    // Back substitution
    for (Eigen::Index i = n - 1; i-- > 0;) {
        x[i] -= c_prime[i] * x[i + 1];
    }
    return x;
}

}  // namespace arbhedge
