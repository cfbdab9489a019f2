#include <rqlp/rng.hpp>

#include <cmath>
#include <numbers>

namespace rqlp {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t splitmix64(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double to_open_unit(std::uint64_t x)
{
    return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;
}

} // namespace

SeededGaussianSource::SeededGaussianSource(std::uint64_t seed) : seed_(seed), key_(splitmix64(seed)) {}

double SeededGaussianSource::draw_at(std::uint64_t index) const
{
    const std::uint64_t c = 2 * index;
    const double u1 = to_open_unit(splitmix64(key_ + (c + 1) * kGolden));
    const double u2 = to_open_unit(splitmix64(key_ + (c + 2) * kGolden));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double SeededGaussianSource::next()
{
    return draw_at(counter_++);
}

SeededGaussianSource SeededGaussianSource::split(std::uint64_t stream) const
{
    return SeededGaussianSource(splitmix64(seed_ ^ splitmix64(stream + kGolden)));
}

MatrixXd gaussian_matrix(SeededGaussianSource& source, Index rows, Index cols)
{
    detail::require(rows >= 1 && cols >= 1, "gaussian_matrix: dimensions must be positive");
    MatrixXd out(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i)
            out(i, j) = source.next();
    return out;
}

} // namespace rqlp
