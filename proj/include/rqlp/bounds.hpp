#pragma once

// Closed-form constants and probabilistic error bounds for randomized QLP
// with subgaussian (in particular Gaussian) sketches.
//
// Everything here is a plain function of a spectrum and a handful of sizes;
// nothing touches a matrix except posteriori_diagnostics.  Probability floors
// are reported as computed and may be <= 0 (vacuous) at small sizes.

#include <rqlp/core.hpp>
#include <rqlp/qlp.hpp>

#include <string>
#include <vector>

namespace rqlp {

/// Constants of the random-matrix class A(m, n, mu, a1, a2) plus the
/// smallest-singular-value constants c1, c2 and the failure tolerance delta.
struct BoundParams {
    double mu = 1.0;
    double a1 = 0.0;
    double a2 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double delta = 0.01;

    /// mu >= 1, a1 > 0, a2 > 0, c1 > 0, 0 < delta < 1.
    void validate() const;
};

/// Intermediate and final constants of the smallest-singular-value estimate.
struct SmallestSingularValueConstants {
    double c_prime = 0.0;  ///< sqrt(27 / 2^13)
    double c_dprime = 0.0; ///< 27 / 2^11
    double c3 = 0.0;       ///< 4 sqrt(2/pi) (2 mu^9 / a1^3 + sqrt(pi))
    double b = 0.0;        ///< min(1/4, c' / (5 a1 mu^3))
    double c1 = 0.0;       ///< b / (e^2 c3) * (b / (3 e^2 c3 a1))^(1/delta_ratio)
    double c2 = 0.0;       ///< min(1, c'' / (2 mu^6), a2) - ln 3 / m
};

/// Gaussian sketches: mu = (4 / sqrt(2 pi))^(1/3), a1 = 6 mu sqrt(a2 + 4).
/// c1 and c2 are left at zero; fill them with with_c_constants.
BoundParams gaussian_params(double a2, double delta = 0.01);

/// For an m x n' random matrix with m = (1 + delta_ratio) n'.
SmallestSingularValueConstants c_constants(const BoundParams& params, Index m, double delta_ratio);

BoundParams with_c_constants(BoundParams params, Index m, double delta_ratio);

/// c1, c2 valid for both Gaussian events SPRQLP relies on: the k x l1
/// projection of Omega1 (m = l1, delta = l1/k - 1) and the l2 x l1 matrix
/// Omega2 V (m = l2, delta = l2/l1 - 1).  Takes the smaller of each pair.
/// Needs k < l1 < l2.
BoundParams params_for_sprqlp(BoundParams base, Index k, Index l1, Index l2);

/// SORQLP has only the first event: m = l, delta = l/k - 1.  Needs k < l.
BoundParams params_for_sorqlp(BoundParams base, Index k, Index l);

/// C_Delta = e sqrt(l) / (p + 1) (2/Delta)^(1/(p+1)) (sqrt(n - l + p) + sqrt(l) + sqrt(2 log(2/Delta))).
double c_delta(Index n, Index k, Index l, Index p, double delta);

/// C_Delta with p = l - k, so the first root is sqrt(n - k).
double c_delta_thm(Index n, Index k, Index l, double delta);

struct Predicate {
    std::string name;
    bool holds = false;
};

struct BoundReport {
    double bound_value = 0.0;
    double probability_floor = 0.0;
    std::vector<Predicate> assumptions;

    bool assumptions_met() const;
};

struct MatrixErrorBounds {
    BoundReport spectral;  ///< bound on ||A - Q L P^T||_2
    BoundReport frobenius; ///< bound on ||A - Q L P^T||_F
    double c_delta = 0.0;
};

/// Error bounds for SPRQLP (l1 = k + p columns, l2 rows sampled).
MatrixErrorBounds thm_matrix_error_sprqlp(const Spectrum& sigmas, Index m, Index n, Index k, Index l1,
                                          Index l2, const BoundParams& params);

/// Error bounds for SORQLP on a full-rank input (l = k + p).
MatrixErrorBounds thm_matrix_error_sorqlp(const Spectrum& sigmas, Index n, Index k, Index l,
                                          const BoundParams& params);

/// Per-j envelope lower <= sigma_j(L) <= upper.
struct SingularValueEnvelope {
    double upper = 0.0;
    double lower = 0.0;
    double upper_floor = 0.0; ///< probability floor of the upper bound
    double lower_floor = 0.0; ///< probability floor of the lower bound
    double rho = 1.0;         ///< sqrt(1 + C_Delta^2 (sigma_{k+1} / sigma_j)^2), evaluated at this j
    double c = 0.0;           ///< additive perturbation C (zero for SORQLP)
};

/// SPRQLP: sigma_j(L) <= C + sigma_j and sigma_j(L) >= sigma_j / rho - C,
/// C = 2 a1 sqrt(m) / (c1 sqrt(l2)) sqrt(a1^2 n / (c1^2 l1) + 1) sigma_{k+1}.
/// j is 1-based, 1 <= j <= k.
SingularValueEnvelope singular_value_envelope_sprqlp(const Spectrum& sigmas, Index m, Index n, Index k,
                                                     Index l1, Index l2, const BoundParams& params, Index j);

/// SORQLP: sigma_j / rho <= sigma_j(L) <= sigma_j (upper bound deterministic).
SingularValueEnvelope singular_value_envelope_sorqlp(const Spectrum& sigmas, Index n, Index k, Index l,
                                                     const BoundParams& params, Index j);

/// Computable quantities behind the interior singular-value estimates for
/// the inner QLP of B, with R0 = [R11 R12; 0 R22] and L = [L11 0; L21 L22],
/// R11 and L11 of size s x s.
struct PosterioriDiagnostics {
    Index s = 0;
    Index inner_dim = 0;      ///< l1 = rows of B
    double r12_norm = 0.0;    ///< ||R12||_2
    double r22_norm = 0.0;    ///< ||R22||_2
    double sigma_s_r11 = 0.0; ///< sigma_s(R11)
    double sigma_s_l11 = 0.0; ///< sigma_s(L11)
    double l22_norm = 0.0;    ///< ||L22||_2
    double rho1 = 0.0;        ///< ||L22||_2 / sigma_s(L11)
    std::vector<double> sigma_b; ///< singular values of B (= those of L)

    /// q^{5/2} ||R12||^2 / ((1 - rho1^2) sigma_s(L11)^2), q = min dims of B.
    /// The estimates multiply this by an unknown constant; it is reported raw.
    double remainder_prefactor = 0.0;
    static constexpr const char* remainder_label = "unscaled by unknown constant";

    bool pivoted_second = true;
    std::vector<Predicate> predicates;
};

PosterioriDiagnostics posteriori_diagnostics(const QlpFactors<double>& inner, Index s);

} // namespace rqlp
