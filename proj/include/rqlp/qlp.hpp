#pragma once

// Pivoted QLP decomposition A = Q L P^T and its rank-k truncation.

#include <rqlp/core.hpp>
#include <rqlp/qr.hpp>

#include <algorithm>

namespace rqlp {

/// A = q * l * p^T with q (m x r) and p (n x r) orthonormal, l (r x r) lower
/// triangular, r = min(m, n).  r0 and first_perm keep the first-stage
/// pivoted QR (A * first_perm = Q0 * r0) for a-posteriori diagnostics.
template <typename Scalar>
struct QlpFactors {
    Matrix<Scalar> q;
    Matrix<Scalar> l;
    Matrix<Scalar> p;
    Matrix<Scalar> r0;
    Permutation first_perm;
    bool pivoted_second = true;

    Index rank() const noexcept { return l.rows(); }

    /// Diagonal of L (the L-values), in factor order.
    Vector<Scalar> l_values() const { return l.diagonal(); }
};

template <typename Scalar>
struct TruncatedQlp {
    Matrix<Scalar> q;
    Matrix<Scalar> l;
    Matrix<Scalar> p;
};

/// Two consecutive Householder QRs: A P0 = Q0 R0, then R0^T P1 = Q1 L^T
/// (P1 = I when pivot_second is false).  Q = Q0 P1 and P = P0 Q1 are formed
/// by index gathers, never by multiplying permutation matrices.
template <typename Scalar>
QlpFactors<Scalar> qlp_decompose(const Matrix<Scalar>& a, bool pivot_second = true)
{
    QrFactors<Scalar> first = qrcp(a);
    Matrix<Scalar> r0t = first.r.transpose(); // n x r, tall
    QrFactors<Scalar> second = pivot_second ? qrcp(r0t) : qr_unpivoted(r0t);

    QlpFactors<Scalar> out;
    out.q = second.perm.apply_columns(first.q);
    out.l = second.r.transpose();
    out.p = first.perm.scatter_rows(second.q);
    out.r0 = std::move(first.r);
    out.first_perm = std::move(first.perm);
    out.pivoted_second = pivot_second;
    return out;
}

/// Leading k columns of Q and P and leading k x k block of L.
template <typename Scalar>
TruncatedQlp<Scalar> truncate(const QlpFactors<Scalar>& f, Index k)
{
    detail::require(k >= 1 && k <= std::min(f.l.rows(), f.l.cols()), "truncate: k out of range");
    return {f.q.leftCols(k), f.l.topLeftCorner(k, k), f.p.leftCols(k)};
}

template <typename Scalar>
Matrix<Scalar> reconstruct(const TruncatedQlp<Scalar>& t)
{
    Matrix<Scalar> pt = t.p.transpose();
    return matmul(matmul(t.q, t.l), pt);
}

template <typename Scalar>
Matrix<Scalar> reconstruct(const QlpFactors<Scalar>& f)
{
    Matrix<Scalar> pt = f.p.transpose();
    return matmul(matmul(f.q, f.l), pt);
}

} // namespace rqlp
