#pragma once

// Approximation-quality metrics for truncated QLP factors.

#include <rqlp/core.hpp>
#include <rqlp/qlp.hpp>

#include <vector>

namespace rqlp {

/// E_F = ||A - A_hat||_F / ||A||_F with A_hat = Q_k L_k P_k^T, plus per-j
/// absolute and relative errors of |l_jj| against sigma_j, compared
/// positionally (no re-sorting of the L-values).
struct ErrorMetrics {
    double ef = 0.0;
    std::vector<double> sigma_ref; ///< sigma_1..sigma_k
    std::vector<double> l_abs;     ///< |l_11|..|l_kk|
    std::vector<double> ae;
    std::vector<double> re;        ///< +inf where sigma_j == 0
    bool re_flagged = false;       ///< some sigma_j was zero
};

/// Relative Frobenius error of the rank-k truncation alone.
double relative_error_f(const MatrixXd& a, const QlpFactors<double>& factors, Index k);

ErrorMetrics error_metrics(const MatrixXd& a, const QlpFactors<double>& factors, Index k,
                           const Spectrum& ref_sigmas);

/// Eckart-Young optimum sqrt(sum_{i>k} sigma_i^2) / sqrt(sum_i sigma_i^2).
double optimal_relative_error(const Spectrum& sigmas, Index k);

Spectrum to_spectrum(const VectorXd& sigma);

} // namespace rqlp
