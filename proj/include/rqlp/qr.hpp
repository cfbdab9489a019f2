#pragma once

// Householder QR, with and without column pivoting, and the pseudoinverses
// built on top of them.

#include <rqlp/core.hpp>

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>

namespace rqlp {

/// Reduced QR factors: A * perm = q * r with q (m x min(m,n)) orthonormal and
/// r (min(m,n) x n) upper triangular.  perm is the identity for unpivoted QR.
template <typename Scalar>
struct QrFactors {
    Matrix<Scalar> q;
    Matrix<Scalar> r;
    Permutation perm;

    /// Diagonal of r (the R-values).
    Vector<Scalar> r_values() const { return r.diagonal(); }
};

namespace detail {

/// Householder reflector H = I - tau v v^T with v(0) = 1 mapping x onto
/// beta e_1, beta = ||x|| >= 0.  The essential part v(1:) overwrites x(1:).
template <typename Scalar, typename Block>
void make_reflector(Block&& x, Scalar& tau, Scalar& beta)
{
    using std::sqrt;
    const Index n = x.size();
    const Scalar alpha = x(0);
    Scalar sigma(0);
    for (Index i = 1; i < n; ++i)
        sigma += x(i) * x(i);

    if (sigma == Scalar(0)) {
        // Already a multiple of e_1; flip the sign only if it is negative.
        if (alpha >= Scalar(0)) {
            tau = Scalar(0);
            beta = alpha;
        } else {
            tau = Scalar(2);
            beta = -alpha;
        }
        return;
    }

    const Scalar mu = sqrt(alpha * alpha + sigma);
    const Scalar v0 = alpha <= Scalar(0) ? alpha - mu : -sigma / (alpha + mu);
    tau = Scalar(2) * v0 * v0 / (sigma + v0 * v0);
    for (Index i = 1; i < n; ++i)
        x(i) /= v0;
    beta = mu;
}

/// Applies H = I - tau v v^T (v(0) = 1, essential part in `essential`) to the
/// rows of `target` from the left.
template <typename Scalar, typename Essential, typename Target>
void apply_reflector(const Essential& essential, Scalar tau, Target&& target, Vector<Scalar>& work)
{
    if (tau == Scalar(0) || target.cols() == 0)
        return;
    const Index tail = essential.size();
    work.resize(target.cols());
    // work = v^T * target
    work = target.row(0).transpose();
    if (tail > 0)
        work.noalias() += target.bottomRows(tail).transpose() * essential;
    target.row(0) -= tau * work.transpose();
    if (tail > 0)
        target.bottomRows(tail).noalias() -= (tau * essential) * work.transpose();
}

template <typename Scalar>
QrFactors<Scalar> householder_qr(const Matrix<Scalar>& a, bool pivot)
{
    using std::abs;
    using std::sqrt;
    require_finite(a, "qr");

    const Index m = a.rows();
    const Index n = a.cols();
    const Index r = std::min(m, n);

    Matrix<Scalar> w = a;
    Vector<Scalar> taus = Vector<Scalar>::Zero(r);
    Vector<Scalar> work;
    Permutation perm = Permutation::identity(n);

    // Current (downdated) and reference trailing column norms for pivoting.
    Vector<Scalar> norms(n);
    Vector<Scalar> ref_norms(n);
    if (pivot) {
        for (Index j = 0; j < n; ++j)
            norms(j) = frobenius_norm(w.col(j));
        ref_norms = norms;
    }
    const Scalar recompute_threshold = sqrt(std::numeric_limits<Scalar>::epsilon());

    for (Index k = 0; k < r; ++k) {
        if (pivot) {
            Index best = k;
            for (Index j = k + 1; j < n; ++j)
                if (norms(j) > norms(best))
                    best = j;
            if (best != k) {
                w.col(k).swap(w.col(best));
                perm.swap(k, best);
                std::swap(norms(k), norms(best));
                std::swap(ref_norms(k), ref_norms(best));
            }
        }

        Scalar tau(0);
        Scalar beta(0);
        make_reflector(w.col(k).tail(m - k), tau, beta);
        w(k, k) = beta;
        taus(k) = tau;

        if (k + 1 < n)
            apply_reflector(w.col(k).tail(m - k - 1), tau,
                            w.block(k, k + 1, m - k, n - k - 1), work);

        if (pivot) {
            for (Index j = k + 1; j < n; ++j) {
                if (norms(j) == Scalar(0))
                    continue;
                const Scalar ratio = abs(w(k, j)) / norms(j);
                Scalar shrink = std::max(Scalar(0), (Scalar(1) - ratio) * (Scalar(1) + ratio));
                const Scalar scaled = norms(j) / ref_norms(j);
                if (shrink * scaled * scaled <= recompute_threshold) {
                    norms(j) = k + 1 < m ? frobenius_norm(w.col(j).tail(m - k - 1)) : Scalar(0);
                    ref_norms(j) = norms(j);
                } else {
                    norms(j) *= sqrt(shrink);
                }
            }
        }
    }

    QrFactors<Scalar> out;
    out.r = Matrix<Scalar>::Zero(r, n);
    for (Index j = 0; j < n; ++j)
        for (Index i = 0; i <= std::min(j, r - 1); ++i)
            out.r(i, j) = w(i, j);

    // Backward accumulation of Q = H_0 H_1 ... H_{r-1} I(:, 0:r).
    out.q = Matrix<Scalar>::Identity(m, r);
    for (Index k = r - 1; k >= 0; --k)
        apply_reflector(w.col(k).tail(m - k - 1), taus(k), out.q.block(k, k, m - k, r - k), work);

    out.perm = std::move(perm);
    return out;
}

template <typename Scalar>
Scalar diagonal_ratio(const Matrix<Scalar>& r)
{
    using std::abs;
    const Index d = std::min(r.rows(), r.cols());
    if (d == 0)
        return Scalar(0);
    Scalar lo = abs(r(0, 0));
    Scalar hi = lo;
    for (Index i = 1; i < d; ++i) {
        lo = std::min(lo, abs(r(i, i)));
        hi = std::max(hi, abs(r(i, i)));
    }
    return hi == Scalar(0) ? Scalar(0) : lo / hi;
}

} // namespace detail

/// Thin Householder QR of a tall matrix (rows >= cols).  R has a
/// nonnegative diagonal.
template <typename Scalar>
QrFactors<Scalar> qr_unpivoted(const Matrix<Scalar>& a)
{
    detail::require(a.rows() >= a.cols(), "qr_unpivoted: expected rows >= cols");
    return detail::householder_qr(a, false);
}

/// Businger-Golub column-pivoted QR.  At each step the remaining column with
/// the largest trailing norm moves to the front (lowest index wins ties), so
/// |r_00| >= |r_11| >= ...
template <typename Scalar>
QrFactors<Scalar> qrcp(const Matrix<Scalar>& a)
{
    return detail::householder_qr(a, true);
}

/// Relative tolerance below which a triangular diagonal counts as singular.
inline constexpr double kRankTolerance = 1e-12;

/// Pseudoinverse R^{-1} Q^T of a tall matrix with full column rank.
/// Throws RankDeficient when min |r_ii| <= 1e-12 max |r_ii|.
template <typename Scalar>
Matrix<Scalar> pinv_tall(const Matrix<Scalar>& m)
{
    detail::require(m.rows() >= m.cols(), "pinv_tall: expected rows >= cols");
    QrFactors<Scalar> f = qr_unpivoted(m);
    const Scalar ratio = detail::diagonal_ratio(f.r);
    if (!(ratio > Scalar(kRankTolerance)))
        throw RankDeficient("pinv_tall: matrix is numerically rank deficient", static_cast<double>(ratio));
    Matrix<Scalar> qt = f.q.transpose();
    return f.r.template triangularView<Eigen::Upper>().solve(qt);
}

/// Moore-Penrose pseudoinverse with rank truncation, via a complete
/// orthogonal decomposition: A P = Q R with QRCP, keep the leading rows of R
/// whose diagonal exceeds rel_tol * |r_00|, then factor those rows' transpose
/// once more.  Works for any shape.  Throws RankDeficient if nothing survives.
template <typename Scalar>
Matrix<Scalar> pinv_truncated(const Matrix<Scalar>& a, Scalar rel_tol = Scalar(kRankTolerance))
{
    using std::abs;
    QrFactors<Scalar> f = qrcp(a);
    const Index d = f.r.rows();
    Index rank = 0;
    const Scalar lead = d > 0 ? abs(f.r(0, 0)) : Scalar(0);
    while (rank < d && abs(f.r(rank, rank)) > rel_tol * lead)
        ++rank;
    if (rank == 0 || lead == Scalar(0))
        throw RankDeficient("pinv_truncated: matrix has numerical rank zero", 0.0);

    Matrix<Scalar> lead_rows_t = f.r.topRows(rank).transpose(); // n x rank
    QrFactors<Scalar> g = qr_unpivoted(lead_rows_t);            // = Z T
    // A = Q1 T^T (P Z)^T  =>  A^+ = (P Z) T^{-T} Q1^T
    Matrix<Scalar> q1t = f.q.leftCols(rank).transpose();
    Matrix<Scalar> core = g.r.transpose().template triangularView<Eigen::Lower>().solve(q1t);
    Matrix<Scalar> pz = f.perm.scatter_rows(g.q);
    return matmul(pz, core);
}

} // namespace rqlp
