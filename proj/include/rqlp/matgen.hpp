#pragma once

// Synthetic test matrices: known-spectrum families and Galerkin
// discretisations of first-kind integral operators.

#include <rqlp/core.hpp>

#include <cstdint>
#include <string_view>

namespace rqlp {

enum class SpectrumFamily { pds, eds };

/// A = U diag(sigma) V^T with a flat prefix of t ones followed by
///   pds: 2^-s, 3^-s, ..., (n - t + 1)^-s
///   eds: 2^-s, 2^-2s, ..., 2^-(n - t)s
struct SpectrumSpec {
    SpectrumFamily family = SpectrumFamily::pds;
    Index n = 0;
    Index t = 1;
    double s = 1.0;
    std::uint64_t seed = 0; ///< seeds the random orthogonal factors

    void validate() const;
};

struct SpectrumMatrix {
    MatrixXd a;
    Spectrum sigmas; ///< exact, descending
};

Spectrum spectrum_values(const SpectrumSpec& spec);

/// U and V are the Q factors of QR applied to seeded n x n Gaussian matrices
/// (U from the first n^2 draws, V from the next n^2).
SpectrumMatrix gen_spectrum_matrix(const SpectrumSpec& spec);

enum class KernelFamily { heat, deriv2 };

/// Operators on [0, 1] x [0, 1]:
///   deriv2  K(y, z) = y (z - 1) for y <= z,  z (y - 1) for y > z
///   heat    K(y, z) = (y - z)^{-3/2} / (2 kappa sqrt(pi)) * exp(-1 / (4 kappa^2 (y - z))) for z < y, else 0
struct KernelSpec {
    KernelFamily family = KernelFamily::deriv2;
    Index n = 0;
    double kappa = 1.0;

    void validate() const;
};

double kernel_value(const KernelSpec& spec, double y, double z);

/// n x n Galerkin matrix with L2-normalised box functions on a uniform grid:
///   a_ij = (1/h) int_{cell i} int_{cell j} K(y, z) dz dy,  h = 1/n.
/// Tensor-product 16-point Gauss-Legendre per axis; the inner integral is
/// split at z = y on diagonal cells so the kink of the kernel never falls
/// inside a rule.
MatrixXd gen_kernel_matrix(const KernelSpec& spec);

/// Random m x n matrix of exact rank k (product of two Gaussian factors).
MatrixXd exact_rank_matrix(Index m, Index n, Index k, std::uint64_t seed);

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
struct QuadratureRule {
    VectorXd nodes;
    VectorXd weights;
};
QuadratureRule gauss_legendre(int n);

std::string_view to_string(SpectrumFamily family);
std::string_view to_string(KernelFamily family);

} // namespace rqlp
