#include <rqlp/metrics.hpp>

#include <cmath>
#include <limits>

namespace rqlp {

double relative_error_f(const MatrixXd& a, const QlpFactors<double>& factors, Index k)
{
    const double norm_a = frobenius_norm(a);
    if (norm_a == 0.0)
        return 0.0;
    const MatrixXd approx = reconstruct(truncate(factors, k));
    detail::require(approx.rows() == a.rows() && approx.cols() == a.cols(),
                    "error_metrics: factors do not match the matrix shape");
    return frobenius_norm(a - approx) / norm_a;
}

ErrorMetrics error_metrics(const MatrixXd& a, const QlpFactors<double>& factors, Index k,
                           const Spectrum& ref_sigmas)
{
    detail::require(static_cast<Index>(ref_sigmas.size()) >= k, "error_metrics: need at least k reference sigmas");

    ErrorMetrics out;
    out.ef = relative_error_f(a, factors, k);
    for (Index j = 0; j < k; ++j) {
        const double sigma = ref_sigmas[static_cast<std::size_t>(j)];
        const double l_abs = std::abs(factors.l(j, j));
        const double ae = std::abs(sigma - l_abs);
        out.sigma_ref.push_back(sigma);
        out.l_abs.push_back(l_abs);
        out.ae.push_back(ae);
        if (sigma == 0.0) {
            out.re.push_back(std::numeric_limits<double>::infinity());
            out.re_flagged = true;
        } else {
            out.re.push_back(ae / sigma);
        }
    }
    return out;
}

double optimal_relative_error(const Spectrum& sigmas, Index k)
{
    double total = 0.0;
    double tail = 0.0;
    for (std::size_t i = 0; i < sigmas.size(); ++i) {
        const double sq = sigmas[i] * sigmas[i];
        total += sq;
        if (static_cast<Index>(i) >= k)
            tail += sq;
    }
    return total == 0.0 ? 0.0 : std::sqrt(tail / total);
}

Spectrum to_spectrum(const VectorXd& sigma)
{
    return Spectrum(sigma.data(), sigma.data() + sigma.size());
}

} // namespace rqlp
