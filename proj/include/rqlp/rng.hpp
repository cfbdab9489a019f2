#pragma once

#include <rqlp/core.hpp>

#include <cstdint>

namespace rqlp {

/// Counter-based standard normal stream.
///
/// Draw number i (0-based) is a pure function of (seed, i):
///   key   = splitmix64(seed)
///   x_c   = splitmix64(key + (c + 1) * 0x9E3779B97F4A7C15)   for c = 2i, 2i+1
///   u     = ((x >> 11) + 0.5) * 2^-53                         in (0, 1)
///   draw  = sqrt(-2 ln u_{2i}) * cos(2 pi u_{2i+1})           (Box-Muller, cosine branch)
///
/// Matrices are filled in column-major order, one draw per entry, so filling
/// an r x c matrix advances the stream by exactly r * c draws.
class SeededGaussianSource {
public:
    explicit SeededGaussianSource(std::uint64_t seed);

    std::uint64_t seed() const noexcept { return seed_; }

    /// Number of draws consumed so far.
    std::uint64_t position() const noexcept { return counter_; }

    double next();

    /// Draw at an absolute position without touching the stream.
    double draw_at(std::uint64_t index) const;

    /// Independent source for a sub-stream (e.g. one per sweep cell).
    SeededGaussianSource split(std::uint64_t stream) const;

private:
    std::uint64_t seed_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// rows x cols matrix of i.i.d. N(0, 1) draws, column-major fill.
MatrixXd gaussian_matrix(SeededGaussianSource& source, Index rows, Index cols);

} // namespace rqlp
