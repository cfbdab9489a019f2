#include <rqlp/randqlp.hpp>

#include <rqlp/qr.hpp>
#include <rqlp/rng.hpp>

#include <algorithm>
#include <chrono>
#include <sstream>
#include <stdexcept>

namespace rqlp {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

/// Inner QLP of B, then Q = V * Q_hat.
void finish(RandQlpResult& out, const RandQlpOptions& options)
{
    QlpFactors<double> inner = qlp_decompose(out.projected, options.pivot_second);
    inner.q = matmul(out.basis, inner.q);
    out.factors = std::move(inner);
}

MatrixXd columns(const MatrixXd& a, Index first, Index count)
{
    return a.middleCols(first, count);
}

} // namespace

std::string_view to_string(Algorithm algorithm)
{
    switch (algorithm) {
    case Algorithm::qlp: return "qlp";
    case Algorithm::rqlp: return "rqlp";
    case Algorithm::sprqlp: return "sprqlp";
    case Algorithm::sorqlp: return "sorqlp";
    }
    return "unknown";
}

Algorithm parse_algorithm(std::string_view name)
{
    for (Algorithm a : {Algorithm::qlp, Algorithm::rqlp, Algorithm::sprqlp, Algorithm::sorqlp})
        if (to_string(a) == name)
            return a;
    throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

SketchConfig SketchConfig::defaults(Index k, std::uint64_t seed)
{
    SketchConfig c;
    c.k = k;
    c.p = 5;
    c.l2 = std::max(2 * k, c.l1());
    c.seed = seed;
    return c;
}

void SketchConfig::validate(Index m, Index n, Algorithm algorithm) const
{
    if (algorithm == Algorithm::qlp)
        return;
    std::ostringstream err;
    if (k < 2)
        err << "target rank k must be >= 2 (got " << k << "); ";
    if (p < 2)
        err << "oversampling p must be >= 2 (got " << p << "); ";
    if (l1() > std::min(m, n))
        err << "l1 = k + p = " << l1() << " exceeds min(m, n) = " << std::min(m, n) << "; ";
    if (algorithm == Algorithm::sprqlp && l2 < l1())
        err << "l2 = " << l2 << " must be >= l1 = " << l1() << "; ";
    const std::string msg = err.str();
    if (!msg.empty())
        throw std::invalid_argument("SketchConfig: " + msg.substr(0, msg.size() - 2));
}

RandQlpResult rqlp(const MatrixXd& a, const SketchConfig& config, const RandQlpOptions& options)
{
    detail::require_finite(a, "rqlp");
    config.validate(a.rows(), a.cols(), Algorithm::rqlp);
    const Index m = a.rows();
    const Index n = a.cols();
    const Index l = config.l1();

    RandQlpResult out;
    out.config = config;
    out.algorithm = Algorithm::rqlp;
    const auto start = Clock::now();

    SeededGaussianSource source(config.seed);
    const MatrixXd omega = gaussian_matrix(source, n, l);

    // Pass 1: Y = A Omega.
    MatrixXd y(m, l);
    {
        DenseRowStream pass(a, options.block_size, options.counter);
        while (auto block = pass.next())
            y.middleRows(block->first_row, block->rows.rows()) = matmul(block->rows, omega);
    }
    out.basis = qr_unpivoted(y).q;

    // Pass 2: B = V^T A, accumulated block by block.
    out.projected = MatrixXd::Zero(l, n);
    {
        DenseRowStream pass(a, options.block_size, options.counter);
        while (auto block = pass.next()) {
            const MatrixXd vt = out.basis.middleRows(block->first_row, block->rows.rows()).transpose();
            matmul_accumulate(out.projected, vt, block->rows);
        }
    }

    finish(out, options);
    out.elapsed_s = seconds_since(start);
    return out;
}

RandQlpResult sprqlp(RowStream& a, const SketchConfig& config, const RandQlpOptions& options)
{
    const Index m = a.rows();
    const Index n = a.cols();
    config.validate(m, n, Algorithm::sprqlp);
    const Index l1 = config.l1();
    const Index l2 = config.l2;

    RandQlpResult out;
    out.config = config;
    out.algorithm = Algorithm::sprqlp;
    const auto start = Clock::now();

    SeededGaussianSource source(config.seed);
    const MatrixXd omega1 = gaussian_matrix(source, n, l1);
    const MatrixXd omega2 = gaussian_matrix(source, l2, m);

    // The only pass over A: Y1 = A Omega1 row block by row block, and
    // Y2 = Omega2 A accumulated over the same blocks.
    MatrixXd y1(m, l1);
    MatrixXd y2 = MatrixXd::Zero(l2, n);
    while (auto block = a.next()) {
        detail::require_finite(block->rows, "sprqlp");
        const Index first = block->first_row;
        const Index count = block->rows.rows();
        y1.middleRows(first, count) = matmul(block->rows, omega1);
        matmul_accumulate(y2, columns(omega2, first, count), block->rows);
    }

    out.basis = qr_unpivoted(y1).q;
    const MatrixXd sketched_basis = matmul(omega2, out.basis); // l2 x l1
    out.projected = matmul(pinv_tall(sketched_basis), y2);

    finish(out, options);
    out.elapsed_s = seconds_since(start);
    return out;
}

RandQlpResult sprqlp(const MatrixXd& a, const SketchConfig& config, const RandQlpOptions& options)
{
    DenseRowStream stream(a, options.block_size, options.counter);
    return sprqlp(stream, config, options);
}

RandQlpResult sorqlp(RowStream& a, const SketchConfig& config, const RandQlpOptions& options)
{
    const Index m = a.rows();
    const Index n = a.cols();
    config.validate(m, n, Algorithm::sorqlp);
    const Index l = config.l1();

    RandQlpResult out;
    out.config = config;
    out.algorithm = Algorithm::sorqlp;
    const auto start = Clock::now();

    SeededGaussianSource source(config.seed);
    const MatrixXd omega = gaussian_matrix(source, n, l);

    // Y2 = Y1^T A = sum over row blocks of (A_b Omega)^T A_b, so both sketches
    // come out of a single pass.
    MatrixXd y1(m, l);
    MatrixXd y2 = MatrixXd::Zero(l, n);
    while (auto block = a.next()) {
        detail::require_finite(block->rows, "sorqlp");
        const MatrixXd s = matmul(block->rows, omega);
        y1.middleRows(block->first_row, s.rows()) = s;
        const MatrixXd st = s.transpose();
        matmul_accumulate(y2, st, block->rows);
    }

    QrFactors<double> range = qr_unpivoted(y1);
    out.basis = std::move(range.q);
    const MatrixXd y1t = y1.transpose();
    const MatrixXd core = matmul(y1t, out.basis); // = R^T

    MatrixXd core_pinv;
    const double ratio = detail::diagonal_ratio(range.r);
    if (ratio > kRankTolerance) {
        core_pinv = pinv_tall(core);
    } else {
        std::ostringstream msg;
        msg << "sorqlp: sketch Y1 = A*Omega is numerically rank deficient (min/max |r_ii| = " << ratio
            << "); the input is probably not full rank, continuing with a rank-truncated pseudoinverse";
        out.warnings.push_back(msg.str());
        core_pinv = pinv_truncated(core, kRankTolerance);
    }
    out.projected = matmul(core_pinv, y2);

    finish(out, options);
    out.elapsed_s = seconds_since(start);
    return out;
}

RandQlpResult sorqlp(const MatrixXd& a, const SketchConfig& config, const RandQlpOptions& options)
{
    DenseRowStream stream(a, options.block_size, options.counter);
    return sorqlp(stream, config, options);
}

RandQlpResult decompose(Algorithm algorithm, const MatrixXd& a, const SketchConfig& config,
                        const RandQlpOptions& options)
{
    switch (algorithm) {
    case Algorithm::rqlp: return rqlp(a, config, options);
    case Algorithm::sprqlp: return sprqlp(a, config, options);
    case Algorithm::sorqlp: return sorqlp(a, config, options);
    case Algorithm::qlp: break;
    }
    RandQlpResult out;
    out.config = config;
    out.algorithm = Algorithm::qlp;
    const auto start = Clock::now();
    out.factors = qlp_decompose(a, options.pivot_second);
    out.elapsed_s = seconds_since(start);
    return out;
}

} // namespace rqlp
