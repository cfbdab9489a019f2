#pragma once

// The operations behind the command-line tool, as library calls so tests
// can drive them without spawning processes.

#include <rqlp/bounds.hpp>
#include <rqlp/io.hpp>
#include <rqlp/randqlp.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace rqlp {

/// Matrix family and its parameters.  family is one of pds, eds, heat, deriv2.
struct GenSpec {
    std::string family = "pds";
    Index n = 500;
    Index t = 30;
    double s = 2.0;
    double kappa = 1.0;
    std::uint64_t seed = 0;

    void validate() const;

    /// Family plus parameters, e.g. "pds/t=30/s=2", used as the CSV family field.
    std::string label() const;
};

struct GeneratedMatrix {
    MatrixXd a;
    std::optional<Spectrum> sigmas; ///< exact singular values when known
    std::string label;
};

GeneratedMatrix generate(const GenSpec& spec);

/// Writes the matrix to `out` and the sidecar to `out.meta`.
void cmd_gen(const GenSpec& spec, const std::filesystem::path& out);

struct RunParams {
    Index k = 0;
    Index p = 5;
    Index l2 = 0; ///< 0: max(2k, k + p)
    std::uint64_t seed = 0;
    Index block_size = 64;
    bool pivot_second = true;
    bool sv_rows = true; ///< emit per-j sv continuation rows

    SketchConfig sketch() const;
};

/// One decomposition plus metrics.  RankDeficient becomes a record with
/// status "rank_deficient"; argument errors propagate.
ExperimentRecord run_cell(const MatrixXd& a, const Spectrum& sigmas, const std::string& family,
                          Algorithm algorithm, const RunParams& params);

struct RunOptions {
    std::filesystem::path matrix;
    std::vector<Algorithm> algorithms = {Algorithm::sprqlp};
    RunParams params;
    std::optional<std::filesystem::path> out; ///< CSV to append to
};

/// Reference singular values come from the sidecar when it has them, else
/// from reference_svd.
std::vector<ExperimentRecord> cmd_run(const RunOptions& options);

struct SweepOptions {
    std::optional<std::filesystem::path> matrix; ///< takes precedence over spec
    GenSpec spec;
    std::vector<Index> ks;
    std::vector<Algorithm> algorithms;
    std::vector<std::uint64_t> seeds;
    RunParams params; ///< k and seed are overwritten per cell
    std::optional<std::filesystem::path> out;
};

/// Every (algorithm, k, seed) cell, sorted by algorithm name, then k, then
/// seed.  Cells that fail on their parameters are kept with status "invalid".
std::vector<ExperimentRecord> cmd_sweep(const SweepOptions& options);

struct BoundsOptions {
    std::optional<std::filesystem::path> sigmas; ///< .meta with sigmas=, or a list of numbers
    GenSpec spec;
    Index k = 0;
    Index p = 5;
    Index l2 = 0; ///< 0: max(2k, k + p)
    double delta = 0.01;
    double a2 = 1.0;
    std::optional<std::filesystem::path> out; ///< bounds CSV to append to
};

struct BoundsSummary {
    std::string family;
    Index m = 0;
    Index n = 0;
    Index k = 0;
    Index p = 0;
    Index l1 = 0;
    Index l2 = 0;
    BoundParams base;
    std::optional<BoundParams> sprqlp_params; ///< empty when l2 <= l1
    std::optional<MatrixErrorBounds> sprqlp;
    BoundParams sorqlp_params;
    MatrixErrorBounds sorqlp;
    std::vector<SingularValueEnvelope> sprqlp_envelope; ///< j = 1..k where sigma_j > 0
    std::vector<SingularValueEnvelope> sorqlp_envelope;
};

inline constexpr const char* kBoundsCsvHeader =
    "schema,family,m,n,k,p,l1,l2,delta,a2,c_delta,sprqlp_spectral,sprqlp_spectral_floor,sprqlp_frobenius,"
    "sprqlp_frobenius_floor,sorqlp_spectral,sorqlp_spectral_floor,sorqlp_frobenius,sorqlp_frobenius_floor";

BoundsSummary evaluate_bounds(const Spectrum& sigmas, Index m, const std::string& family, const BoundsOptions& options);

std::string bounds_csv_row(const BoundsSummary& summary);

/// Prints key=value lines and a final csv= line to `report`.
BoundsSummary cmd_bounds(const BoundsOptions& options, std::ostream& report);

} // namespace rqlp
