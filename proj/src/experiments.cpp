#include <rqlp/experiments.hpp>
#include <rqlp/matgen.hpp>
#include <rqlp/metrics.hpp>
#include <rqlp/svd.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <tuple>

namespace rqlp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string short_double(double v)
{
    std::array<char, 32> buf{};
    std::snprintf(buf.data(), buf.size(), "%g", v);
    return buf.data();
}

bool is_spectrum_family(const std::string& f) { return f == "pds" || f == "eds"; }

SpectrumSpec spectrum_spec(const GenSpec& g)
{
    return {g.family == "pds" ? SpectrumFamily::pds : SpectrumFamily::eds, g.n, g.t, g.s, g.seed};
}

KernelSpec kernel_spec(const GenSpec& g)
{
    return {g.family == "heat" ? KernelFamily::heat : KernelFamily::deriv2, g.n, g.kappa};
}

Spectrum reference_sigmas(const MatrixXd& a)
{
    return to_spectrum(singular_values(a));
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

} // namespace

void GenSpec::validate() const
{
    if (is_spectrum_family(family))
        spectrum_spec(*this).validate();
    else if (family == "heat" || family == "deriv2")
        kernel_spec(*this).validate();
    else
        throw std::invalid_argument("unknown matrix family '" + family + "' (expected pds, eds, heat or deriv2)");
}

std::string GenSpec::label() const
{
    if (is_spectrum_family(family))
        return family + "/t=" + std::to_string(t) + "/s=" + short_double(s);
    if (family == "heat")
        return family + "/kappa=" + short_double(kappa);
    return family;
}

GeneratedMatrix generate(const GenSpec& spec)
{
    spec.validate();
    GeneratedMatrix out;
    out.label = spec.label();
    if (is_spectrum_family(spec.family)) {
        SpectrumMatrix sm = gen_spectrum_matrix(spectrum_spec(spec));
        out.a = std::move(sm.a);
        out.sigmas = std::move(sm.sigmas);
    } else {
        out.a = gen_kernel_matrix(kernel_spec(spec));
    }
    return out;
}

void cmd_gen(const GenSpec& spec, const std::filesystem::path& out)
{
    const GeneratedMatrix g = generate(spec);
    write_matrix(out, g.a);

    Meta meta;
    meta["schema"] = kCsvSchema;
    meta["family"] = spec.family;
    meta["label"] = g.label;
    meta["n"] = std::to_string(spec.n);
    meta["rows"] = std::to_string(g.a.rows());
    meta["cols"] = std::to_string(g.a.cols());
    meta["seed"] = std::to_string(spec.seed);
    if (is_spectrum_family(spec.family)) {
        meta["t"] = std::to_string(spec.t);
        meta["s"] = format_double(spec.s);
    }
    if (spec.family == "heat")
        meta["kappa"] = format_double(spec.kappa);
    if (g.sigmas)
        meta["sigmas"] = format_doubles(*g.sigmas);
    write_meta(meta_path(out), meta);
}

SketchConfig RunParams::sketch() const
{
    SketchConfig c = SketchConfig::defaults(k, seed);
    c.p = p;
    c.l2 = l2 > 0 ? l2 : std::max(2 * k, c.l1());
    return c;
}

ExperimentRecord run_cell(const MatrixXd& a, const Spectrum& sigmas, const std::string& family,
                          Algorithm algorithm, const RunParams& params)
{
    const SketchConfig config = params.sketch();
    detail::require(params.k >= 1 && params.k <= std::min(a.rows(), a.cols()),
                    "run: k must lie in [1, min(m, n)]");
    detail::require(params.block_size >= 1, "run: block size must be positive");
    config.validate(a.rows(), a.cols(), algorithm);

    ExperimentRecord r;
    r.algorithm = std::string(to_string(algorithm));
    r.family = family;
    r.n = a.cols();
    r.k = params.k;
    r.seed = params.seed;
    if (algorithm != Algorithm::qlp) {
        r.p = config.p;
        r.l1 = config.l1();
        r.l2 = algorithm == Algorithm::sprqlp ? config.l2 : 0;
    }

    RandQlpOptions options;
    options.block_size = params.block_size;
    options.pivot_second = params.pivot_second;

    RandQlpResult result;
    try {
        result = decompose(algorithm, a, config, options);
    } catch (const RankDeficient&) {
        r.status = "rank_deficient";
        r.ef = kNaN;
        return r;
    }
    r.elapsed_s = result.elapsed_s;

    const ErrorMetrics m = error_metrics(a, result.factors, params.k, sigmas);
    r.ef = m.ef;
    if (params.sv_rows)
        for (std::size_t j = 0; j < m.ae.size(); ++j)
            r.sv.push_back({static_cast<Index>(j + 1), m.sigma_ref[j], m.l_abs[j], m.ae[j], m.re[j]});
    return r;
}

std::vector<ExperimentRecord> cmd_run(const RunOptions& options)
{
    detail::require(!options.algorithms.empty(), "run: no algorithm given");
    const MatrixXd a = read_matrix(options.matrix);

    Spectrum sigmas;
    std::string family = "file";
    const auto mp = meta_path(options.matrix);
    if (std::filesystem::exists(mp)) {
        const Meta meta = read_meta(mp);
        if (auto it = meta.find("sigmas"); it != meta.end())
            sigmas = parse_doubles(it->second);
        if (auto it = meta.find("label"); it != meta.end())
            family = it->second;
    }
    if (static_cast<Index>(sigmas.size()) != std::min(a.rows(), a.cols()))
        sigmas = reference_sigmas(a);

    std::vector<ExperimentRecord> records;
    for (Algorithm algorithm : options.algorithms)
        records.push_back(run_cell(a, sigmas, family, algorithm, options.params));
    if (options.out)
        append_records(*options.out, records);
    return records;
}

std::vector<ExperimentRecord> cmd_sweep(const SweepOptions& options)
{
    detail::require(!options.ks.empty() && !options.algorithms.empty() && !options.seeds.empty(),
                    "sweep: k, algorithm and seed lists must be nonempty");

    MatrixXd a;
    Spectrum sigmas;
    std::string family;
    if (options.matrix) {
        a = read_matrix(*options.matrix);
        family = "file";
        const auto mp = meta_path(*options.matrix);
        if (std::filesystem::exists(mp)) {
            const Meta meta = read_meta(mp);
            if (auto it = meta.find("sigmas"); it != meta.end())
                sigmas = parse_doubles(it->second);
            if (auto it = meta.find("label"); it != meta.end())
                family = it->second;
        }
    } else {
        GeneratedMatrix g = generate(options.spec);
        a = std::move(g.a);
        family = g.label;
        if (g.sigmas)
            sigmas = std::move(*g.sigmas);
    }
    if (static_cast<Index>(sigmas.size()) != std::min(a.rows(), a.cols()))
        sigmas = reference_sigmas(a);

    std::vector<ExperimentRecord> records;
    for (Algorithm algorithm : options.algorithms)
        for (Index k : options.ks)
            for (std::uint64_t seed : options.seeds) {
                RunParams params = options.params;
                params.k = k;
                params.seed = seed;
                try {
                    records.push_back(run_cell(a, sigmas, family, algorithm, params));
                } catch (const std::invalid_argument&) {
                    ExperimentRecord r;
                    r.algorithm = std::string(to_string(algorithm));
                    r.family = family;
                    r.n = a.cols();
                    r.k = k;
                    r.seed = seed;
                    r.status = "invalid";
                    r.ef = kNaN;
                    records.push_back(std::move(r));
                }
            }

    std::stable_sort(records.begin(), records.end(), [](const ExperimentRecord& x, const ExperimentRecord& y) {
        return std::tie(x.algorithm, x.k, x.seed) < std::tie(y.algorithm, y.k, y.seed);
    });
    if (options.out)
        append_records(*options.out, records);
    return records;
}

BoundsSummary evaluate_bounds(const Spectrum& sigmas, Index m, const std::string& family, const BoundsOptions& options)
{
    const Index n = static_cast<Index>(sigmas.size());
    detail::require(options.k >= 2, "bounds: k must be >= 2");
    detail::require(options.p >= 1, "bounds: p must be >= 1");

    BoundsSummary s;
    s.family = family;
    s.m = m;
    s.n = n;
    s.k = options.k;
    s.p = options.p;
    s.l1 = options.k + options.p;
    s.l2 = options.l2 > 0 ? options.l2 : std::max(2 * options.k, s.l1);
    detail::require(s.l1 <= n, "bounds: l1 = k + p exceeds the spectrum length");
    s.base = gaussian_params(options.a2, options.delta);

    s.sorqlp_params = params_for_sorqlp(s.base, s.k, s.l1);
    s.sorqlp = thm_matrix_error_sorqlp(sigmas, n, s.k, s.l1, s.sorqlp_params);
    if (s.l2 > s.l1) {
        s.sprqlp_params = params_for_sprqlp(s.base, s.k, s.l1, s.l2);
        s.sprqlp = thm_matrix_error_sprqlp(sigmas, m, n, s.k, s.l1, s.l2, *s.sprqlp_params);
    }
    for (Index j = 1; j <= s.k && sigmas[static_cast<std::size_t>(j - 1)] > 0.0; ++j) {
        s.sorqlp_envelope.push_back(singular_value_envelope_sorqlp(sigmas, n, s.k, s.l1, s.sorqlp_params, j));
        if (s.sprqlp_params)
            s.sprqlp_envelope.push_back(
                singular_value_envelope_sprqlp(sigmas, m, n, s.k, s.l1, s.l2, *s.sprqlp_params, j));
    }
    return s;
}

std::string bounds_csv_row(const BoundsSummary& s)
{
    const auto f = [](double v) { return format_double(v); };
    std::string row = std::string(kCsvSchema) + "," + s.family + "," + std::to_string(s.m) + "," + std::to_string(s.n) +
                      "," + std::to_string(s.k) + "," + std::to_string(s.p) + "," + std::to_string(s.l1) + "," +
                      std::to_string(s.l2) + "," + f(s.base.delta) + "," + f(s.base.a2) + "," + f(s.sorqlp.c_delta);
    if (s.sprqlp)
        row += "," + f(s.sprqlp->spectral.bound_value) + "," + f(s.sprqlp->spectral.probability_floor) + "," +
               f(s.sprqlp->frobenius.bound_value) + "," + f(s.sprqlp->frobenius.probability_floor);
    else
        row += ",nan,nan,nan,nan";
    row += "," + f(s.sorqlp.spectral.bound_value) + "," + f(s.sorqlp.spectral.probability_floor) + "," +
           f(s.sorqlp.frobenius.bound_value) + "," + f(s.sorqlp.frobenius.probability_floor);
    return row;
}

BoundsSummary cmd_bounds(const BoundsOptions& options, std::ostream& report)
{
    Spectrum sigmas;
    Index m = 0;
    std::string family;
    if (options.sigmas) {
        family = "file";
        const std::string text = read_text(*options.sigmas);
        if (text.find("sigmas=") != std::string::npos) {
            const Meta meta = read_meta(*options.sigmas);
            sigmas = parse_doubles(meta.at("sigmas"));
            if (auto it = meta.find("rows"); it != meta.end())
                m = std::stoll(it->second);
            if (auto it = meta.find("label"); it != meta.end())
                family = it->second;
        } else {
            std::string cleaned = text;
            std::replace_if(cleaned.begin(), cleaned.end(), [](char c) { return c == ',' || c == '\n' || c == '\r' || c == '\t'; }, ' ');
            std::istringstream in(cleaned);
            std::string tok;
            while (in >> tok) {
                char* end = nullptr;
                const double v = std::strtod(tok.c_str(), &end);
                if (end != tok.c_str() + tok.size())
                    throw IoError(options.sigmas->string() + ": malformed number '" + tok + "'");
                sigmas.push_back(v);
            }
        }
        std::sort(sigmas.begin(), sigmas.end(), std::greater<>());
    } else if (is_spectrum_family(options.spec.family)) {
        sigmas = spectrum_values(spectrum_spec(options.spec));
        family = options.spec.label();
    } else {
        const GeneratedMatrix g = generate(options.spec);
        sigmas = reference_sigmas(g.a);
        family = g.label;
    }
    detail::require(!sigmas.empty(), "bounds: empty spectrum");
    if (m == 0)
        m = static_cast<Index>(sigmas.size());

    const BoundsSummary s = evaluate_bounds(sigmas, m, family, options);
    const auto f = [](double v) { return format_double(v); };
    report << "family=" << s.family << "\n"
           << "m=" << s.m << "\nn=" << s.n << "\nk=" << s.k << "\np=" << s.p << "\nl1=" << s.l1 << "\nl2=" << s.l2
           << "\n"
           << "delta=" << f(s.base.delta) << "\na2=" << f(s.base.a2) << "\n"
           << "mu=" << f(s.base.mu) << "\na1=" << f(s.base.a1) << "\n"
           << "sigma_k+1=" << f(s.k < s.n ? sigmas[static_cast<std::size_t>(s.k)] : 0.0) << "\n"
           << "optimal_relative_error_f=" << f(optimal_relative_error(sigmas, s.k)) << "\n"
           << "c_delta=" << f(s.sorqlp.c_delta) << "\n";

    const auto print_bounds = [&](const std::string& name, const BoundParams& p, const MatrixErrorBounds& b) {
        report << name << ".c1=" << f(p.c1) << "\n"
               << name << ".c2=" << f(p.c2) << "\n"
               << name << ".spectral.bound=" << f(b.spectral.bound_value) << "\n"
               << name << ".spectral.probability_floor=" << f(b.spectral.probability_floor) << "\n"
               << name << ".frobenius.bound=" << f(b.frobenius.bound_value) << "\n"
               << name << ".frobenius.probability_floor=" << f(b.frobenius.probability_floor) << "\n";
        for (const Predicate& pr : b.spectral.assumptions)
            report << name << ".assumption[" << pr.name << "]=" << bool_text(pr.holds) << "\n";
    };
    if (s.sprqlp) {
        report << "sprqlp.available=true\n";
        print_bounds("sprqlp", *s.sprqlp_params, *s.sprqlp);
    } else {
        report << "sprqlp.available=false\nsprqlp.reason=l2 must exceed l1\n";
    }
    print_bounds("sorqlp", s.sorqlp_params, s.sorqlp);

    for (std::size_t i = 0; i < s.sorqlp_envelope.size(); ++i) {
        const SingularValueEnvelope& e = s.sorqlp_envelope[i];
        report << "sorqlp.envelope." << i + 1 << "=" << f(e.lower) << "," << f(e.upper) << ",rho=" << f(e.rho) << "\n";
    }
    for (std::size_t i = 0; i < s.sprqlp_envelope.size(); ++i) {
        const SingularValueEnvelope& e = s.sprqlp_envelope[i];
        report << "sprqlp.envelope." << i + 1 << "=" << f(e.lower) << "," << f(e.upper) << ",rho=" << f(e.rho)
               << ",C=" << f(e.c) << "\n";
    }

    const std::string row = bounds_csv_row(s);
    report << "csv=" << row << "\n";
    if (options.out) {
        std::error_code ec;
        const bool fresh = !std::filesystem::exists(*options.out, ec) || std::filesystem::file_size(*options.out, ec) == 0;
        std::ofstream out(*options.out, std::ios::app);
        if (!out)
            throw IoError("cannot open " + options.out->string() + " for writing");
        if (fresh)
            out << kBoundsCsvHeader << "\n";
        out << row << "\n";
    }
    return s;
}

} // namespace rqlp
