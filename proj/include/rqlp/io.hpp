#pragma once

// On-disk formats.
//
//   .rqlpmat  8-byte magic "RQLPMAT1", u64 format version, u64 rows, u64 cols,
//             then rows * cols IEEE-754 doubles in column-major order.  All
//             integers and doubles little-endian.
//   .meta     key=value lines next to the binary (path + ".meta").
//   .csv      experiment records, see kCsvHeader.

#include <rqlp/core.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rqlp {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr char kMatrixMagic[8] = {'R', 'Q', 'L', 'P', 'M', 'A', 'T', '1'};
inline constexpr std::uint64_t kMatrixFormatVersion = 1;
inline constexpr std::size_t kMatrixHeaderBytes = 32;

void write_matrix(const std::filesystem::path& path, const MatrixXd& a);
MatrixXd read_matrix(const std::filesystem::path& path);

using Meta = std::map<std::string, std::string>;

std::filesystem::path meta_path(const std::filesystem::path& matrix_path);

void write_meta(const std::filesystem::path& path, const Meta& meta);
Meta read_meta(const std::filesystem::path& path);

/// Comma-separated, %.17g, so values round-trip exactly.
std::string format_doubles(const std::vector<double>& values);
std::vector<double> parse_doubles(const std::string& text);

/// Shortest %.17g rendering.
std::string format_double(double value);

inline constexpr const char* kCsvSchema = "v1";
inline constexpr const char* kCsvHeader = "schema,algorithm,family,n,k,p,l1,l2,seed,status,ef,elapsed_s";

struct SvRow {
    Index j = 0; ///< 1-based
    double sigma_ref = 0.0;
    double l_abs = 0.0;
    double ae = 0.0;
    double re = 0.0;

    friend bool operator==(const SvRow&, const SvRow&) = default;
};

struct ExperimentRecord {
    std::string schema = kCsvSchema;
    std::string algorithm;
    std::string family;
    Index n = 0;
    Index k = 0;
    Index p = 0;
    Index l1 = 0;
    Index l2 = 0;
    std::uint64_t seed = 0;
    std::string status = "ok";
    double ef = 0.0;
    double elapsed_s = 0.0;
    std::vector<SvRow> sv; ///< optional continuation rows
};

/// The record line followed by its sv rows, each newline-terminated.
std::string format_record(const ExperimentRecord& record);

/// Appends records, writing the header first if the file is new or empty.
void append_records(const std::filesystem::path& path, const std::vector<ExperimentRecord>& records);

/// Parses a whole CSV document (header required).  Throws IoError on
/// malformed input.
std::vector<ExperimentRecord> parse_csv(const std::string& text);
std::vector<ExperimentRecord> read_csv(const std::filesystem::path& path);

std::string read_text(const std::filesystem::path& path);

} // namespace rqlp
