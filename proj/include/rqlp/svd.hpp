#pragma once

// One-sided (Hestenes) Jacobi SVD.  Slow but accurate: the baseline every
// singular-value metric is measured against.

#include <rqlp/core.hpp>

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace rqlp {

template <typename Scalar>
struct SvdResult {
    Vector<Scalar> sigma; ///< descending, nonnegative
    Matrix<Scalar> u;     ///< m x q, empty unless vectors were requested
    Matrix<Scalar> v;     ///< n x q, empty unless vectors were requested
};

inline constexpr int kJacobiMaxSweeps = 60;

namespace detail {

/// Orthogonalises the columns of w in place; optionally accumulates the
/// right rotations into v.  A pair is rotated while
/// |w_i . w_j| > tol * ||w_i|| ||w_j||.
template <typename Scalar>
void jacobi_orthogonalize(Matrix<Scalar>& w, Matrix<Scalar>* v, Scalar tol)
{
    using std::abs;
    using std::sqrt;
    const Index n = w.cols();
    Vector<Scalar> sq(n);

    for (int sweep = 0; sweep < kJacobiMaxSweeps; ++sweep) {
        for (Index j = 0; j < n; ++j)
            sq(j) = w.col(j).squaredNorm();

        bool rotated = false;
        for (Index i = 0; i + 1 < n; ++i) {
            for (Index j = i + 1; j < n; ++j) {
                const Scalar alpha = sq(i);
                const Scalar beta = sq(j);
                if (alpha == Scalar(0) || beta == Scalar(0))
                    continue;
                const Scalar gamma = w.col(i).dot(w.col(j));
                if (!(abs(gamma) > tol * sqrt(alpha) * sqrt(beta)))
                    continue;
                rotated = true;

                const Scalar zeta = (beta - alpha) / (Scalar(2) * gamma);
                const Scalar t = (zeta >= Scalar(0) ? Scalar(1) : Scalar(-1)) /
                                 (abs(zeta) + sqrt(Scalar(1) + zeta * zeta));
                const Scalar c = Scalar(1) / sqrt(Scalar(1) + t * t);
                const Scalar s = c * t;

                for (Index r = 0; r < w.rows(); ++r) {
                    const Scalar wi = w(r, i);
                    const Scalar wj = w(r, j);
                    w(r, i) = c * wi - s * wj;
                    w(r, j) = s * wi + c * wj;
                }
                if (v) {
                    for (Index r = 0; r < v->rows(); ++r) {
                        const Scalar vi = (*v)(r, i);
                        const Scalar vj = (*v)(r, j);
                        (*v)(r, i) = c * vi - s * vj;
                        (*v)(r, j) = s * vi + c * vj;
                    }
                }
                sq(i) = alpha - t * gamma;
                sq(j) = beta + t * gamma;
            }
        }
        if (!rotated)
            return;
    }
    throw ConvergenceFailure("reference_svd: Jacobi iteration did not converge in 60 sweeps");
}

} // namespace detail

/// Singular values (and optionally thin singular vectors) by one-sided
/// Jacobi.  Wide inputs are handled through their transpose.
template <typename Scalar>
SvdResult<Scalar> reference_svd(const Matrix<Scalar>& a, bool vectors = false,
                                Scalar tol = Scalar(1e-14))
{
    detail::require_finite(a, "reference_svd");
    const bool wide = a.rows() < a.cols();
    Matrix<Scalar> w = wide ? Matrix<Scalar>(a.transpose()) : a;
    const Index n = w.cols();

    Matrix<Scalar> v;
    if (vectors)
        v = Matrix<Scalar>::Identity(n, n);
    detail::jacobi_orthogonalize(w, vectors ? &v : nullptr, tol);

    Vector<Scalar> norms(n);
    for (Index j = 0; j < n; ++j)
        norms(j) = frobenius_norm(w.col(j));

    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Index x, Index y) { return norms(x) > norms(y); });

    SvdResult<Scalar> out;
    out.sigma.resize(n);
    for (Index j = 0; j < n; ++j)
        out.sigma(j) = norms(order[static_cast<std::size_t>(j)]);

    if (vectors) {
        Matrix<Scalar> left(w.rows(), n);
        Matrix<Scalar> right(n, n);
        for (Index j = 0; j < n; ++j) {
            const Index src = order[static_cast<std::size_t>(j)];
            right.col(j) = v.col(src);
            if (norms(src) > Scalar(0))
                left.col(j) = w.col(src) / norms(src);
            else
                left.col(j).setZero();
        }
        if (wide) {
            out.u = std::move(right);
            out.v = std::move(left);
        } else {
            out.u = std::move(left);
            out.v = std::move(right);
        }
    }
    return out;
}

template <typename Scalar>
Vector<Scalar> singular_values(const Matrix<Scalar>& a)
{
    return reference_svd(a).sigma;
}

/// Largest singular value (0 for an empty matrix).
template <typename Scalar>
Scalar spectral_norm(const Matrix<Scalar>& a)
{
    if (a.size() == 0)
        return Scalar(0);
    return reference_svd(a).sigma(0);
}

} // namespace rqlp
