#pragma once

#include <rqlp/core.hpp>
#include <rqlp/rng.hpp>

#include <cmath>
#include <cstdint>
#include <cstring>

namespace testing {

using rqlp::Index;
using rqlp::MatrixXd;

inline MatrixXd random_matrix(Index rows, Index cols, std::uint64_t seed)
{
    rqlp::SeededGaussianSource src(seed);
    return rqlp::gaussian_matrix(src, rows, cols);
}

// Textbook triple loop, independent of the library's matmul.
inline MatrixXd triple_loop(const MatrixXd& a, const MatrixXd& b)
{
    MatrixXd c(a.rows(), b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < b.cols(); ++j) {
            double s = 0.0;
            for (Index k = 0; k < a.cols(); ++k)
                s += a(i, k) * b(k, j);
            c(i, j) = s;
        }
    return c;
}

inline double rel_diff(const MatrixXd& a, const MatrixXd& b)
{
    const double nb = b.norm();
    return nb == 0.0 ? (a - b).norm() : (a - b).norm() / nb;
}

inline bool bit_equal(const MatrixXd& a, const MatrixXd& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        return false;
    for (Index j = 0; j < a.cols(); ++j)
        for (Index i = 0; i < a.rows(); ++i)
            if (std::memcmp(&a(i, j), &b(i, j), sizeof(double)) != 0)
                return false;
    return true;
}

} // namespace testing
