#pragma once

// Dense matrix vocabulary shared by every module.
//
// Matrices are plain Eigen column-major dynamic matrices.  Every reduction and
// product here runs in a fixed order so results are bitwise reproducible for a
// given build.

#include <Eigen/Core>

#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace rqlp {

using Index = Eigen::Index;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXd = Matrix<double>;
using VectorXd = Vector<double>;

/// Singular values (or any descending list of nonnegative reals).
using Spectrum = std::vector<double>;

/// Thrown when a factor that must have full column rank does not.
class RankDeficient : public std::runtime_error {
public:
    RankDeficient(const std::string& what, double ratio)
        : std::runtime_error(what + " (diagonal ratio " + std::to_string(ratio) + ")"),
          ratio_(ratio) {}

    /// min |r_ii| / max |r_ii| of the offending triangular factor.
    double ratio() const noexcept { return ratio_; }

private:
    double ratio_;
};

class ConvergenceFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool condition, const char* message)
{
    if (!condition)
        throw std::invalid_argument(message);
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& a)
{
    for (Index j = 0; j < a.cols(); ++j)
        for (Index i = 0; i < a.rows(); ++i)
            if (!std::isfinite(static_cast<double>(a(i, j))))
                return false;
    return true;
}

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& a, const char* where)
{
    if (!all_finite(a))
        throw std::invalid_argument(std::string(where) + ": matrix has non-finite entries");
}

} // namespace detail

/// Column permutation.  map[j] is the source column that lands in position j,
/// so (A * P).col(j) == A.col(map[j]).
class Permutation {
public:
    Permutation() = default;

    explicit Permutation(std::vector<Index> map) : map_(std::move(map))
    {
        detail::require(is_bijection(map_), "Permutation: map is not a bijection");
    }

    static Permutation identity(Index n)
    {
        std::vector<Index> map(static_cast<std::size_t>(n));
        std::iota(map.begin(), map.end(), Index{0});
        return Permutation(std::move(map));
    }

    Index size() const noexcept { return static_cast<Index>(map_.size()); }
    Index operator[](Index j) const { return map_[static_cast<std::size_t>(j)]; }
    const std::vector<Index>& map() const noexcept { return map_; }

    bool is_identity() const
    {
        for (std::size_t j = 0; j < map_.size(); ++j)
            if (map_[j] != static_cast<Index>(j))
                return false;
        return true;
    }

    Permutation inverse() const
    {
        std::vector<Index> inv(map_.size());
        for (std::size_t j = 0; j < map_.size(); ++j)
            inv[static_cast<std::size_t>(map_[j])] = static_cast<Index>(j);
        return Permutation(std::move(inv));
    }

    /// Swap the entries at positions a and b (a transposition on the right).
    void swap(Index a, Index b) { std::swap(map_[static_cast<std::size_t>(a)], map_[static_cast<std::size_t>(b)]); }

    /// A * P: gathers columns.
    template <typename Scalar>
    Matrix<Scalar> apply_columns(const Matrix<Scalar>& a) const
    {
        detail::require(a.cols() == size(), "Permutation::apply_columns: size mismatch");
        Matrix<Scalar> out(a.rows(), a.cols());
        for (Index j = 0; j < size(); ++j)
            out.col(j) = a.col((*this)[j]);
        return out;
    }

    /// P^T * A: row j of the result is row map[j] of A.
    template <typename Scalar>
    Matrix<Scalar> gather_rows(const Matrix<Scalar>& a) const
    {
        detail::require(a.rows() == size(), "Permutation::gather_rows: size mismatch");
        Matrix<Scalar> out(a.rows(), a.cols());
        for (Index j = 0; j < size(); ++j)
            out.row(j) = a.row((*this)[j]);
        return out;
    }

    /// P * A: row map[j] of the result is row j of A.
    template <typename Scalar>
    Matrix<Scalar> scatter_rows(const Matrix<Scalar>& a) const
    {
        detail::require(a.rows() == size(), "Permutation::scatter_rows: size mismatch");
        Matrix<Scalar> out(a.rows(), a.cols());
        for (Index j = 0; j < size(); ++j)
            out.row((*this)[j]) = a.row(j);
        return out;
    }

    /// Explicit permutation matrix.
    template <typename Scalar = double>
    Matrix<Scalar> to_matrix() const
    {
        Matrix<Scalar> p = Matrix<Scalar>::Zero(size(), size());
        for (Index j = 0; j < size(); ++j)
            p((*this)[j], j) = Scalar(1);
        return p;
    }

    friend bool operator==(const Permutation&, const Permutation&) = default;

private:
    static bool is_bijection(const std::vector<Index>& map)
    {
        std::vector<bool> seen(map.size(), false);
        for (Index v : map) {
            if (v < 0 || static_cast<std::size_t>(v) >= map.size() || seen[static_cast<std::size_t>(v)])
                return false;
            seen[static_cast<std::size_t>(v)] = true;
        }
        return true;
    }

    std::vector<Index> map_;
};

/// C += A * B.  Each C(i, j) accumulates A(i, k) * B(k, j) in ascending k.
template <typename Scalar>
void matmul_accumulate(Matrix<Scalar>& c, const Matrix<Scalar>& a, const Matrix<Scalar>& b)
{
    detail::require(a.cols() == b.rows(), "matmul: inner dimensions differ");
    detail::require(c.rows() == a.rows() && c.cols() == b.cols(), "matmul: output shape mismatch");
    for (Index j = 0; j < b.cols(); ++j)
        for (Index k = 0; k < a.cols(); ++k) {
            const Scalar bkj = b(k, j);
            if (bkj != Scalar(0))
                c.col(j) += bkj * a.col(k);
        }
}

template <typename Scalar>
Matrix<Scalar> matmul(const Matrix<Scalar>& a, const Matrix<Scalar>& b)
{
    detail::require(a.cols() == b.rows(), "matmul: inner dimensions differ");
    Matrix<Scalar> c = Matrix<Scalar>::Zero(a.rows(), b.cols());
    matmul_accumulate(c, a, b);
    return c;
}

template <typename Scalar>
Matrix<Scalar> transpose(const Matrix<Scalar>& a)
{
    return a.transpose();
}

/// Square root of the sum of squares, accumulated in column-major order.
template <typename Derived>
typename Derived::Scalar frobenius_norm(const Eigen::MatrixBase<Derived>& a)
{
    using Scalar = typename Derived::Scalar;
    Scalar sum(0);
    for (Index j = 0; j < a.cols(); ++j)
        for (Index i = 0; i < a.rows(); ++i)
            sum += a(i, j) * a(i, j);
    using std::sqrt;
    return sqrt(sum);
}

/// ||Q^T Q - I||_F.
template <typename Scalar>
Scalar orthonormality_defect(const Matrix<Scalar>& q)
{
    Matrix<Scalar> gram = matmul<Scalar>(q.transpose(), q);
    gram -= Matrix<Scalar>::Identity(q.cols(), q.cols());
    return frobenius_norm(gram);
}

} // namespace rqlp
