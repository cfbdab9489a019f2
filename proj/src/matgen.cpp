#include <rqlp/matgen.hpp>

#include <rqlp/qr.hpp>
#include <rqlp/rng.hpp>

#include <cmath>
#include <numbers>

namespace rqlp {

namespace {

constexpr int kQuadratureNodes = 16;

} // namespace

std::string_view to_string(SpectrumFamily family)
{
    return family == SpectrumFamily::pds ? "pds" : "eds";
}

std::string_view to_string(KernelFamily family)
{
    return family == KernelFamily::heat ? "heat" : "deriv2";
}

void SpectrumSpec::validate() const
{
    detail::require(n >= 1, "SpectrumSpec: n must be positive");
    detail::require(t >= 1 && t <= n, "SpectrumSpec: need 1 <= t <= n");
    detail::require(s > 0.0 && std::isfinite(s), "SpectrumSpec: decay rate s must be positive");
}

Spectrum spectrum_values(const SpectrumSpec& spec)
{
    spec.validate();
    Spectrum sigma(static_cast<std::size_t>(spec.n), 1.0);
    for (Index i = spec.t; i < spec.n; ++i) {
        const double step = static_cast<double>(i - spec.t + 1);
        sigma[static_cast<std::size_t>(i)] = spec.family == SpectrumFamily::pds
                                                 ? std::pow(step + 1.0, -spec.s)
                                                 : std::pow(2.0, -step * spec.s);
    }
    return sigma;
}

SpectrumMatrix gen_spectrum_matrix(const SpectrumSpec& spec)
{
    SpectrumMatrix out;
    out.sigmas = spectrum_values(spec);
    const Index n = spec.n;

    SeededGaussianSource source(spec.seed);
    const MatrixXd u = qr_unpivoted(gaussian_matrix(source, n, n)).q;
    const MatrixXd v = qr_unpivoted(gaussian_matrix(source, n, n)).q;

    MatrixXd us = u;
    for (Index j = 0; j < n; ++j)
        us.col(j) *= out.sigmas[static_cast<std::size_t>(j)];
    const MatrixXd vt = v.transpose();
    out.a = matmul(us, vt);
    return out;
}

void KernelSpec::validate() const
{
    detail::require(n >= 2, "KernelSpec: n must be at least 2");
    detail::require(kappa > 0.0 && std::isfinite(kappa), "KernelSpec: kappa must be positive");
}

double kernel_value(const KernelSpec& spec, double y, double z)
{
    if (spec.family == KernelFamily::deriv2)
        return y <= z ? y * (z - 1.0) : z * (y - 1.0);

    const double d = y - z;
    if (d <= 0.0)
        return 0.0;
    const double k = spec.kappa;
    return std::exp(-1.0 / (4.0 * k * k * d)) / (2.0 * k * std::sqrt(std::numbers::pi) * d * std::sqrt(d));
}

QuadratureRule gauss_legendre(int n)
{
    detail::require(n >= 1, "gauss_legendre: need at least one node");

    // P_n(x) and P_n'(x) by the three-term recurrence.
    auto legendre = [n](double x, double& value, double& derivative) {
        double prev = 1.0;
        double cur = x;
        for (int k = 2; k <= n; ++k) {
            const double next = ((2.0 * k - 1.0) * x * cur - (k - 1.0) * prev) / k;
            prev = cur;
            cur = next;
        }
        value = cur;
        derivative = n * (x * cur - prev) / (x * x - 1.0);
    };

    QuadratureRule rule{VectorXd(n), VectorXd(n)};
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double value = 0.0;
        double derivative = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            legendre(x, value, derivative);
            const double dx = value / derivative;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        legendre(x, value, derivative);
        rule.nodes(i) = x;
        rule.weights(i) = 2.0 / ((1.0 - x * x) * derivative * derivative);
    }
    return rule;
}

MatrixXd gen_kernel_matrix(const KernelSpec& spec)
{
    spec.validate();
    const Index n = spec.n;
    const double h = 1.0 / static_cast<double>(n);
    const QuadratureRule rule = gauss_legendre(kQuadratureNodes);

    // int_lo^hi K(y, z) dz by the 16-point rule.
    auto inner = [&](double y, double lo, double hi) {
        if (hi <= lo)
            return 0.0;
        const double mid = 0.5 * (lo + hi);
        const double half = 0.5 * (hi - lo);
        double sum = 0.0;
        for (int q = 0; q < kQuadratureNodes; ++q)
            sum += rule.weights(q) * kernel_value(spec, y, mid + half * rule.nodes(q));
        return half * sum;
    };

    MatrixXd a(n, n);
    for (Index j = 0; j < n; ++j) {
        const double z0 = static_cast<double>(j) * h;
        const double z1 = static_cast<double>(j + 1) * h;
        for (Index i = 0; i < n; ++i) {
            // heat vanishes for z >= y, i.e. on every cell strictly above the diagonal.
            if (spec.family == KernelFamily::heat && j > i) {
                a(i, j) = 0.0;
                continue;
            }
            const double y0 = static_cast<double>(i) * h;
            const double ymid = y0 + 0.5 * h;
            double sum = 0.0;
            for (int q = 0; q < kQuadratureNodes; ++q) {
                const double y = ymid + 0.5 * h * rule.nodes(q);
                const double cell = (i == j) ? inner(y, z0, y) + inner(y, y, z1) : inner(y, z0, z1);
                sum += rule.weights(q) * cell;
            }
            a(i, j) = 0.5 * h * sum / h;
        }
    }
    return a;
}

MatrixXd exact_rank_matrix(Index m, Index n, Index k, std::uint64_t seed)
{
    detail::require(k >= 1 && k <= std::min(m, n), "exact_rank_matrix: need 1 <= k <= min(m, n)");
    SeededGaussianSource source(seed);
    const MatrixXd left = gaussian_matrix(source, m, k);
    const MatrixXd right = gaussian_matrix(source, k, n);
    return matmul(left, right);
}

} // namespace rqlp
