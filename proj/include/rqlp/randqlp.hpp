#pragma once

// Randomized QLP: the two-pass RQLP and the single-pass SPRQLP and SORQLP.
//
// All three sketch the column space of A with a Gaussian test matrix, reduce
// A to a small l1 x n matrix B, and finish with a deterministic QLP of B:
//
//   rqlp    B = V^T A                       (A read twice)
//   sprqlp  B = (Omega2 V)^+ (Omega2 A)     (A read once)
//   sorqlp  B = (Y1^T V)^+ (Y1^T A)         (A read once)
//
// where Y1 = A Omega1 = V R.

#include <rqlp/core.hpp>
#include <rqlp/qlp.hpp>
#include <rqlp/stream.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace rqlp {

enum class Algorithm { qlp, rqlp, sprqlp, sorqlp };

std::string_view to_string(Algorithm algorithm);

/// Throws std::invalid_argument for unknown names.
Algorithm parse_algorithm(std::string_view name);

struct SketchConfig {
    Index k = 0;            ///< target rank, >= 2
    Index p = 5;            ///< oversampling, >= 2
    Index l2 = 0;           ///< rows sampled by sprqlp, >= l1
    std::uint64_t seed = 0;

    Index l1() const noexcept { return k + p; }

    /// p = 5, l1 = k + p, l2 = 2k (raised to l1 when 2k < l1).
    static SketchConfig defaults(Index k, std::uint64_t seed);

    /// Throws std::invalid_argument if the config does not fit an m x n input.
    void validate(Index m, Index n, Algorithm algorithm) const;
};

struct RandQlpOptions {
    Index block_size = 64;            ///< rows per streamed block
    bool pivot_second = true;         ///< pivoting in the inner QLP's second QR
    AccessCounter* counter = nullptr; ///< optional instrumentation of reads of A
};

struct RandQlpResult {
    QlpFactors<double> factors; ///< q: m x l1, l: l1 x l1, p: n x l1
    SketchConfig config;
    Algorithm algorithm = Algorithm::rqlp;
    double elapsed_s = 0.0; ///< wall clock of the decomposition alone

    MatrixXd basis;     ///< V, orthonormal basis of the sketch Y1
    MatrixXd projected; ///< B, the l1 x n matrix handed to the inner QLP
    std::vector<std::string> warnings;
};

RandQlpResult rqlp(const MatrixXd& a, const SketchConfig& config, const RandQlpOptions& options = {});

RandQlpResult sprqlp(RowStream& a, const SketchConfig& config, const RandQlpOptions& options = {});
RandQlpResult sprqlp(const MatrixXd& a, const SketchConfig& config, const RandQlpOptions& options = {});

RandQlpResult sorqlp(RowStream& a, const SketchConfig& config, const RandQlpOptions& options = {});
RandQlpResult sorqlp(const MatrixXd& a, const SketchConfig& config, const RandQlpOptions& options = {});

/// Dispatch by name.  Algorithm::qlp runs the full deterministic QLP and
/// ignores the sketch parameters (basis and projected stay empty).
RandQlpResult decompose(Algorithm algorithm, const MatrixXd& a, const SketchConfig& config,
                        const RandQlpOptions& options = {});

} // namespace rqlp
