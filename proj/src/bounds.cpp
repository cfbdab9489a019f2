#include <rqlp/bounds.hpp>
#include <rqlp/svd.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace rqlp {

namespace {

// sigma_i with 1-based i; entries past the end of the list count as zero.
double sigma_at(const Spectrum& s, Index i)
{
    return i >= 1 && static_cast<std::size_t>(i) <= s.size() ? s[static_cast<std::size_t>(i - 1)] : 0.0;
}

double tail_sq(const Spectrum& s, Index k)
{
    double sum = 0.0;
    for (std::size_t i = static_cast<std::size_t>(k); i < s.size(); ++i)
        sum += s[i] * s[i];
    return sum;
}

void require_spectrum(const Spectrum& s)
{
    for (double v : s)
        detail::require(std::isfinite(v) && v >= 0.0, "bounds: singular values must be finite and nonnegative");
}

// sqrt(a1^2 n / (c1^2 l) + 1)
double range_factor(const BoundParams& p, Index n, Index l)
{
    return std::sqrt(p.a1 * p.a1 * static_cast<double>(n) / (p.c1 * p.c1 * static_cast<double>(l)) + 1.0);
}

// The Frobenius bound's square root, before any outer factor.
double frobenius_core(const Spectrum& s, Index k, double cd)
{
    const double s1 = sigma_at(s, 1);
    const double sk1 = sigma_at(s, k + 1);
    const double num = static_cast<double>(k) * s1 * s1 * sk1 * sk1 * cd * cd;
    const double den = sk1 * sk1 * cd * cd + s1 * s1;
    const double head = den > 0.0 ? num / den : 0.0;
    return std::sqrt(head + tail_sq(s, k));
}

// l > (1 + 1/ln k) k.  For k = 1 ln k = 0 and the threshold is infinite.
bool oversampled(Index l, Index k)
{
    if (k <= 1)
        return false;
    return static_cast<double>(l) > (1.0 + 1.0 / std::log(static_cast<double>(k))) * static_cast<double>(k);
}

} // namespace

void BoundParams::validate() const
{
    detail::require(std::isfinite(mu) && mu >= 1.0, "BoundParams: mu must be >= 1");
    detail::require(std::isfinite(a1) && a1 > 0.0, "BoundParams: a1 must be positive");
    detail::require(std::isfinite(a2) && a2 > 0.0, "BoundParams: a2 must be positive");
    detail::require(std::isfinite(c1) && c1 > 0.0, "BoundParams: c1 must be positive");
    detail::require(std::isfinite(c2), "BoundParams: c2 must be finite");
    detail::require(delta > 0.0 && delta < 1.0, "BoundParams: delta must lie in (0, 1)");
}

bool BoundReport::assumptions_met() const
{
    return std::all_of(assumptions.begin(), assumptions.end(), [](const Predicate& p) { return p.holds; });
}

BoundParams gaussian_params(double a2, double delta)
{
    detail::require(std::isfinite(a2) && a2 > 0.0, "gaussian_params: a2 must be positive");
    detail::require(delta > 0.0 && delta < 1.0, "gaussian_params: delta must lie in (0, 1)");
    BoundParams p;
    p.mu = std::cbrt(4.0 / std::sqrt(2.0 * std::numbers::pi));
    p.a1 = 6.0 * p.mu * std::sqrt(a2 + 4.0);
    p.a2 = a2;
    p.delta = delta;
    return p;
}

SmallestSingularValueConstants c_constants(const BoundParams& params, Index m, double delta_ratio)
{
    detail::require(delta_ratio > 0.0 && std::isfinite(delta_ratio), "c_constants: delta_ratio must be positive");
    detail::require(m >= 2, "c_constants: m must be >= 2");
    detail::require(params.mu >= 1.0 && params.a1 > 0.0 && params.a2 > 0.0, "c_constants: invalid mu, a1 or a2");

    constexpr double e2 = std::numbers::e * std::numbers::e;
    const double mu = params.mu;
    const double mu3 = mu * mu * mu;
    const double a1 = params.a1;

    SmallestSingularValueConstants c;
    c.c_prime = std::sqrt(27.0 / 8192.0);
    c.c_dprime = 27.0 / 2048.0;
    c.c3 = 4.0 * std::sqrt(2.0 / std::numbers::pi) * (2.0 * mu3 * mu3 * mu3 / (a1 * a1 * a1) + std::sqrt(std::numbers::pi));
    c.b = std::min(0.25, c.c_prime / (5.0 * a1 * mu3));
    c.c1 = c.b / (e2 * c.c3) * std::pow(c.b / (3.0 * e2 * c.c3 * a1), 1.0 / delta_ratio);
    c.c2 = std::min({1.0, c.c_dprime / (2.0 * mu3 * mu3), params.a2}) - std::log(3.0) / static_cast<double>(m);
    return c;
}

BoundParams with_c_constants(BoundParams params, Index m, double delta_ratio)
{
    const SmallestSingularValueConstants c = c_constants(params, m, delta_ratio);
    params.c1 = c.c1;
    params.c2 = c.c2;
    return params;
}

BoundParams params_for_sprqlp(BoundParams base, Index k, Index l1, Index l2)
{
    detail::require(k >= 1 && l1 > k && l2 > l1, "params_for_sprqlp: need k < l1 < l2");
    const auto a = c_constants(base, l1, static_cast<double>(l1) / static_cast<double>(k) - 1.0);
    const auto b = c_constants(base, l2, static_cast<double>(l2) / static_cast<double>(l1) - 1.0);
    base.c1 = std::min(a.c1, b.c1);
    base.c2 = std::min(a.c2, b.c2);
    return base;
}

BoundParams params_for_sorqlp(BoundParams base, Index k, Index l)
{
    detail::require(k >= 1 && l > k, "params_for_sorqlp: need k < l");
    return with_c_constants(base, l, static_cast<double>(l) / static_cast<double>(k) - 1.0);
}

double c_delta(Index n, Index k, Index l, Index p, double delta)
{
    detail::require(delta > 0.0 && delta < 1.0, "c_delta: delta must lie in (0, 1)");
    detail::require(k >= 1 && l >= k && l <= n, "c_delta: need 1 <= k <= l <= n");
    detail::require(p >= 0 && p <= l - k, "c_delta: need 0 <= p <= l - k");
    const double pp1 = static_cast<double>(p + 1);
    const double dl = static_cast<double>(l);
    return std::numbers::e * std::sqrt(dl) / pp1 * std::pow(2.0 / delta, 1.0 / pp1) *
           (std::sqrt(static_cast<double>(n - l + p)) + std::sqrt(dl) + std::sqrt(2.0 * std::log(2.0 / delta)));
}

double c_delta_thm(Index n, Index k, Index l, double delta)
{
    return c_delta(n, k, l, l - k, delta);
}

MatrixErrorBounds thm_matrix_error_sprqlp(const Spectrum& sigmas, Index m, Index n, Index k, Index l1,
                                          Index l2, const BoundParams& params)
{
    params.validate();
    require_spectrum(sigmas);
    detail::require(m >= 1 && n >= 1 && k >= 1 && l1 >= k && l2 >= 1 && l1 <= n,
                    "thm_matrix_error_sprqlp: need 1 <= k <= l1 <= n and l2 >= 1");

    const double outer = 1.0 + params.a1 * std::sqrt(static_cast<double>(m)) /
                                   (params.c1 * std::sqrt(static_cast<double>(l2)));
    const double cd = c_delta_thm(n, k, l1, params.delta);
    const double ea2m = std::exp(-params.a2 * static_cast<double>(m));
    const double ea2n = std::exp(-params.a2 * static_cast<double>(n));
    const double ec2l1 = std::exp(-params.c2 * static_cast<double>(l1));
    const double ec2l2 = std::exp(-params.c2 * static_cast<double>(l2));

    std::vector<Predicate> hyp = {
        {"l1 > (1 + 1/ln k) k", oversampled(l1, k)},
        {"l2 > (1 + 1/ln l1) l1", oversampled(l2, l1)},
    };

    MatrixErrorBounds out;
    out.c_delta = cd;
    out.spectral.bound_value = 2.0 * outer * range_factor(params, n, l1) * sigma_at(sigmas, k + 1);
    out.spectral.probability_floor = 1.0 - ea2m - ea2n - ec2l1 - ec2l2;
    out.spectral.assumptions = hyp;
    out.frobenius.bound_value = outer * frobenius_core(sigmas, k, cd);
    out.frobenius.probability_floor = 1.0 - ea2m - ec2l2 - params.delta;
    out.frobenius.assumptions = hyp;
    return out;
}

MatrixErrorBounds thm_matrix_error_sorqlp(const Spectrum& sigmas, Index n, Index k, Index l,
                                          const BoundParams& params)
{
    params.validate();
    require_spectrum(sigmas);
    detail::require(n >= 1 && k >= 1 && l >= k && l <= n, "thm_matrix_error_sorqlp: need 1 <= k <= l <= n");

    const double cd = c_delta_thm(n, k, l, params.delta);
    const bool full_rank = !sigmas.empty() && sigmas.back() > 0.0;
    std::vector<Predicate> hyp = {
        {"l > (1 + 1/ln k) k", oversampled(l, k)},
        {"A full rank", full_rank},
    };

    MatrixErrorBounds out;
    out.c_delta = cd;
    out.spectral.bound_value = 2.0 * range_factor(params, n, l) * sigma_at(sigmas, k + 1);
    out.spectral.probability_floor =
        1.0 - std::exp(-params.a2 * static_cast<double>(n)) - std::exp(-params.c2 * static_cast<double>(l));
    out.spectral.assumptions = hyp;
    out.frobenius.bound_value = frobenius_core(sigmas, k, cd);
    out.frobenius.probability_floor = 1.0 - params.delta;
    out.frobenius.assumptions = hyp;
    return out;
}

namespace {

double rho_at(const Spectrum& s, Index k, Index j, double cd)
{
    const double sj = sigma_at(s, j);
    detail::require(sj > 0.0, "singular_value_envelope: sigma_j must be positive");
    const double ratio = sigma_at(s, k + 1) / sj;
    return std::sqrt(1.0 + cd * cd * ratio * ratio);
}

} // namespace

SingularValueEnvelope singular_value_envelope_sprqlp(const Spectrum& sigmas, Index m, Index n, Index k,
                                                     Index l1, Index l2, const BoundParams& params, Index j)
{
    params.validate();
    require_spectrum(sigmas);
    detail::require(j >= 1 && j <= k, "singular_value_envelope: need 1 <= j <= k");
    detail::require(m >= 1 && l1 >= k && l1 <= n && l2 >= 1, "singular_value_envelope: need k <= l1 <= n");

    const double cd = c_delta_thm(n, k, l1, params.delta);
    SingularValueEnvelope e;
    e.rho = rho_at(sigmas, k, j, cd);
    e.c = 2.0 * params.a1 * std::sqrt(static_cast<double>(m)) / (params.c1 * std::sqrt(static_cast<double>(l2))) *
          range_factor(params, n, l1) * sigma_at(sigmas, k + 1);
    const double sj = sigma_at(sigmas, j);
    e.upper = e.c + sj;
    e.lower = sj / e.rho - e.c;
    e.upper_floor = 1.0 - std::exp(-params.a2 * static_cast<double>(m)) - std::exp(-params.a2 * static_cast<double>(n)) -
                    std::exp(-params.c2 * static_cast<double>(l1)) - std::exp(-params.c2 * static_cast<double>(l2));
    e.lower_floor = e.upper_floor - params.delta;
    return e;
}

SingularValueEnvelope singular_value_envelope_sorqlp(const Spectrum& sigmas, Index n, Index k, Index l,
                                                     const BoundParams& params, Index j)
{
    detail::require(params.delta > 0.0 && params.delta < 1.0, "singular_value_envelope: delta must lie in (0, 1)");
    require_spectrum(sigmas);
    detail::require(j >= 1 && j <= k, "singular_value_envelope: need 1 <= j <= k");

    const double cd = c_delta_thm(n, k, l, params.delta);
    SingularValueEnvelope e;
    e.rho = rho_at(sigmas, k, j, cd);
    const double sj = sigma_at(sigmas, j);
    e.upper = sj;
    e.lower = sj / e.rho;
    e.upper_floor = 1.0;
    e.lower_floor = 1.0 - params.delta;
    return e;
}

PosterioriDiagnostics posteriori_diagnostics(const QlpFactors<double>& inner, Index s)
{
    const MatrixXd& r0 = inner.r0;
    const MatrixXd& l = inner.l;
    const Index l1 = r0.rows();
    detail::require(l1 >= 2 && l.rows() == l1 && l.cols() == l1, "posteriori_diagnostics: malformed factors");
    detail::require(s >= 1 && s < l1, "posteriori_diagnostics: need 1 <= s < inner dimension");
    const Index n = r0.cols();

    PosterioriDiagnostics d;
    d.s = s;
    d.inner_dim = l1;
    d.pivoted_second = inner.pivoted_second;

    const MatrixXd r11 = r0.topLeftCorner(s, s);
    const MatrixXd r12 = r0.block(0, s, s, n - s);
    const MatrixXd r22 = r0.block(s, s, l1 - s, n - s);
    const MatrixXd l11 = l.topLeftCorner(s, s);
    const MatrixXd l22 = l.bottomRightCorner(l1 - s, l1 - s);

    d.r12_norm = spectral_norm(r12);
    d.r22_norm = spectral_norm(r22);
    d.sigma_s_r11 = singular_values(r11)(s - 1);
    d.sigma_s_l11 = singular_values(l11)(s - 1);
    d.l22_norm = spectral_norm(l22);
    d.rho1 = d.sigma_s_l11 > 0.0 ? d.l22_norm / d.sigma_s_l11 : std::numeric_limits<double>::infinity();

    const VectorXd sb = singular_values(l);
    d.sigma_b.assign(sb.data(), sb.data() + sb.size());

    const double q = static_cast<double>(std::min(l1, n));
    const double gap = 1.0 - d.rho1 * d.rho1;
    d.remainder_prefactor = gap > 0.0 && d.sigma_s_l11 > 0.0
                                ? std::pow(q, 2.5) * d.r12_norm * d.r12_norm / (gap * d.sigma_s_l11 * d.sigma_s_l11)
                                : std::numeric_limits<double>::infinity();

    const double ds = static_cast<double>(s);
    const double dl = static_cast<double>(l1);
    const double sigma_s = d.sigma_b[static_cast<std::size_t>(s - 1)];
    const double sigma_s1 = d.sigma_b[static_cast<std::size_t>(s)];
    d.predicates = {
        {"||R22|| <= sqrt((s+1)(l1-s)) sigma_{s+1}(B)", d.r22_norm <= std::sqrt((ds + 1.0) * (dl - ds)) * sigma_s1},
        {"sigma_s(R11) >= sigma_s(B) / sqrt(s(l1-s+1))", d.sigma_s_r11 >= sigma_s / std::sqrt(ds * (dl - ds + 1.0))},
        {"||R22|| / sigma_s(R11) < 1", d.sigma_s_r11 > 0.0 && d.r22_norm / d.sigma_s_r11 < 1.0},
        {"rho1 < 1", d.rho1 < 1.0},
    };
    return d;
}

} // namespace rqlp
