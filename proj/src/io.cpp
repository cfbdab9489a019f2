#include <rqlp/io.hpp>

#include <array>
#include <bit>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

namespace rqlp {

namespace {

void put_u64(std::string& out, std::uint64_t v)
{
    for (int b = 0; b < 8; ++b)
        out.push_back(static_cast<char>((v >> (8 * b)) & 0xFF));
}

std::uint64_t get_u64(const unsigned char* p)
{
    std::uint64_t v = 0;
    for (int b = 7; b >= 0; --b)
        v = (v << 8) | p[b];
    return v;
}

std::vector<std::string> split(const std::string& line, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

double to_double(const std::string& s)
{
    if (s.empty())
        throw IoError("expected a number, got an empty field");
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || errno == ERANGE)
        throw IoError("malformed number '" + s + "'");
    return v;
}

long long to_integer(const std::string& s)
{
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(s.c_str(), &end, 10);
    if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE)
        throw IoError("malformed integer '" + s + "'");
    return v;
}

std::uint64_t to_unsigned(const std::string& s)
{
    errno = 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (s.empty() || s[0] == '-' || end != s.c_str() + s.size() || errno == ERANGE)
        throw IoError("malformed unsigned integer '" + s + "'");
    return v;
}

void write_all(const std::filesystem::path& path, const std::string& bytes, std::ios::openmode mode)
{
    std::ofstream f(path, std::ios::binary | mode);
    if (!f)
        throw IoError("cannot open " + path.string() + " for writing");
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f)
        throw IoError("write failed: " + path.string());
}

} // namespace

std::string read_text(const std::filesystem::path& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_matrix(const std::filesystem::path& path, const MatrixXd& a)
{
    std::string out;
    out.reserve(kMatrixHeaderBytes + 8 * static_cast<std::size_t>(a.size()));
    out.append(kMatrixMagic, sizeof kMatrixMagic);
    put_u64(out, kMatrixFormatVersion);
    put_u64(out, static_cast<std::uint64_t>(a.rows()));
    put_u64(out, static_cast<std::uint64_t>(a.cols()));
    for (Index j = 0; j < a.cols(); ++j)
        for (Index i = 0; i < a.rows(); ++i)
            put_u64(out, std::bit_cast<std::uint64_t>(a(i, j)));
    write_all(path, out, std::ios::trunc);
}

MatrixXd read_matrix(const std::filesystem::path& path)
{
    const std::string bytes = read_text(path);
    if (bytes.size() < kMatrixHeaderBytes || std::memcmp(bytes.data(), kMatrixMagic, sizeof kMatrixMagic) != 0)
        throw IoError(path.string() + ": not an rqlpmat file");
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
    const std::uint64_t version = get_u64(p + 8);
    if (version != kMatrixFormatVersion)
        throw IoError(path.string() + ": unsupported format version " + std::to_string(version));
    const std::uint64_t rows = get_u64(p + 16);
    const std::uint64_t cols = get_u64(p + 24);
    if (rows == 0 || cols == 0 || rows > (1ull << 31) || cols > (1ull << 31) ||
        bytes.size() != kMatrixHeaderBytes + 8 * rows * cols)
        throw IoError(path.string() + ": size does not match header");

    MatrixXd a(static_cast<Index>(rows), static_cast<Index>(cols));
    const unsigned char* q = p + kMatrixHeaderBytes;
    for (Index j = 0; j < a.cols(); ++j)
        for (Index i = 0; i < a.rows(); ++i, q += 8)
            a(i, j) = std::bit_cast<double>(get_u64(q));
    if (!detail::all_finite(a))
        throw IoError(path.string() + ": non-finite entries");
    return a;
}

std::filesystem::path meta_path(const std::filesystem::path& matrix_path)
{
    return std::filesystem::path(matrix_path.string() + ".meta");
}

void write_meta(const std::filesystem::path& path, const Meta& meta)
{
    std::string out;
    for (const auto& [key, value] : meta) {
        if (key.empty() || key.find_first_of("=\n") != std::string::npos || value.find('\n') != std::string::npos)
            throw IoError("meta: invalid key or value for '" + key + "'");
        out += key + "=" + value + "\n";
    }
    write_all(path, out, std::ios::trunc);
}

Meta read_meta(const std::filesystem::path& path)
{
    Meta meta;
    std::istringstream in(read_text(path));
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos || eq == 0)
            throw IoError(path.string() + ": malformed line '" + line + "'");
        meta[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return meta;
}

std::string format_double(double value)
{
    std::array<char, 32> buf{};
    std::snprintf(buf.data(), buf.size(), "%.17g", value);
    return buf.data();
}

std::string format_doubles(const std::vector<double>& values)
{
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i)
            out.push_back(',');
        out += format_double(values[i]);
    }
    return out;
}

std::vector<double> parse_doubles(const std::string& text)
{
    std::vector<double> out;
    if (text.empty())
        return out;
    for (const std::string& field : split(text, ','))
        out.push_back(to_double(field));
    return out;
}

std::string format_record(const ExperimentRecord& r)
{
    std::array<char, 32> elapsed{};
    std::snprintf(elapsed.data(), elapsed.size(), "%.6f", r.elapsed_s);
    std::string line = r.schema + "," + r.algorithm + "," + r.family + "," + std::to_string(r.n) + "," +
                       std::to_string(r.k) + "," + std::to_string(r.p) + "," + std::to_string(r.l1) + "," +
                       std::to_string(r.l2) + "," + std::to_string(r.seed) + "," + r.status + "," +
                       format_double(r.ef) + "," + elapsed.data() + "\n";
    for (const SvRow& s : r.sv)
        line += "sv," + std::to_string(s.j) + "," + format_double(s.sigma_ref) + "," + format_double(s.l_abs) + "," +
                format_double(s.ae) + "," + format_double(s.re) + "\n";
    return line;
}

void append_records(const std::filesystem::path& path, const std::vector<ExperimentRecord>& records)
{
    std::error_code ec;
    const bool fresh = !std::filesystem::exists(path, ec) || std::filesystem::file_size(path, ec) == 0;
    std::string out;
    if (fresh)
        out += std::string(kCsvHeader) + "\n";
    for (const ExperimentRecord& r : records)
        out += format_record(r);
    write_all(path, out, std::ios::app);
}

std::vector<ExperimentRecord> parse_csv(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader)
        throw IoError("csv: missing or unexpected header");

    std::vector<ExperimentRecord> out;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const std::vector<std::string> f = split(line, ',');
        if (f[0] == "sv") {
            if (out.empty() || f.size() != 6)
                throw IoError("csv: malformed sv row '" + line + "'");
            out.back().sv.push_back({static_cast<Index>(to_integer(f[1])), to_double(f[2]), to_double(f[3]),
                                     to_double(f[4]), to_double(f[5])});
            continue;
        }
        if (f.size() != 12 || f[0] != kCsvSchema)
            throw IoError("csv: malformed record '" + line + "'");
        ExperimentRecord r;
        r.schema = f[0];
        r.algorithm = f[1];
        r.family = f[2];
        r.n = static_cast<Index>(to_integer(f[3]));
        r.k = static_cast<Index>(to_integer(f[4]));
        r.p = static_cast<Index>(to_integer(f[5]));
        r.l1 = static_cast<Index>(to_integer(f[6]));
        r.l2 = static_cast<Index>(to_integer(f[7]));
        r.seed = to_unsigned(f[8]);
        r.status = f[9];
        r.ef = to_double(f[10]);
        r.elapsed_s = to_double(f[11]);
        if (r.algorithm.empty() || r.family.empty() || r.status.empty())
            throw IoError("csv: empty field in '" + line + "'");
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<ExperimentRecord> read_csv(const std::filesystem::path& path)
{
    return parse_csv(read_text(path));
}

} // namespace rqlp
