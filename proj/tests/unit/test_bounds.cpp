#include "support.hpp"

#include <rqlp/bounds.hpp>
#include <rqlp/matgen.hpp>
#include <rqlp/qlp.hpp>
#include <rqlp/svd.hpp>

#include <Eigen/SVD>
#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <doctest.h>

#include <cmath>

using namespace rqlp;
using Big = boost::multiprecision::cpp_bin_float_50;

namespace {

// 50-digit re-derivation of the closed forms, written against the formulas
// rather than against src/bounds.cpp.
namespace oracle {

Big pi() { return boost::math::constants::pi<Big>(); }
Big e() { return boost::math::constants::e<Big>(); }

Big mu() { return boost::multiprecision::cbrt(Big(4) / sqrt(2 * pi())); }
Big a1(Big a2) { return 6 * mu() * sqrt(a2 + 4); }

struct C {
    Big c3, b, c1, c2;
};

C constants(Big a2, long m, Big delta_ratio)
{
    const Big u = mu(), a = a1(a2);
    const Big cp = sqrt(Big(27) / 8192), cpp = Big(27) / 2048;
    C c;
    c.c3 = 4 * sqrt(2 / pi()) * (2 * pow(u, 9) / pow(a, 3) + sqrt(pi()));
    c.b = std::min(Big(0.25), cp / (5 * a * pow(u, 3)));
    c.c1 = c.b / (e() * e() * c.c3) * pow(c.b / (3 * e() * e() * c.c3 * a), 1 / delta_ratio);
    c.c2 = std::min({Big(1), cpp / (2 * pow(u, 6)), a2}) - log(Big(3)) / m;
    return c;
}

Big c_delta(long n, long k, long l, long p, Big delta)
{
    return e() * sqrt(Big(l)) / (p + 1) * pow(2 / delta, Big(1) / (p + 1)) *
           (sqrt(Big(n - l + p)) + sqrt(Big(l)) + sqrt(2 * log(2 / delta)));
}

Big frob_core(const Spectrum& s, long k, Big cd)
{
    const Big s1 = s[0], sk1 = s[std::size_t(k)];
    Big tail = 0;
    for (std::size_t i = std::size_t(k); i < s.size(); ++i)
        tail += Big(s[i]) * Big(s[i]);
    return sqrt(k * s1 * s1 * sk1 * sk1 * cd * cd / (sk1 * sk1 * cd * cd + s1 * s1) + tail);
}

} // namespace oracle

double rel(double x, const Big& ref)
{
    return static_cast<double>(abs(Big(x) - ref) / abs(ref));
}

Spectrum pds(Index n, Index t, double s)
{
    return spectrum_values({SpectrumFamily::pds, n, t, s, 0});
}

} // namespace

TEST_CASE("gaussian_params")
{
    const BoundParams p = gaussian_params(1.0);
    CHECK(rel(p.mu, oracle::mu()) <= 1e-15);
    CHECK(p.mu == doctest::Approx(1.16858).epsilon(1e-5));
    for (double a2 : {0.1, 0.7, 2.0, 13.0})
        CHECK(gaussian_params(a2).a1 / gaussian_params(a2).mu == doctest::Approx(6 * std::sqrt(a2 + 4)).epsilon(1e-15));
    CHECK_THROWS_AS(gaussian_params(0.0), std::invalid_argument);
    CHECK_THROWS_AS(gaussian_params(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(gaussian_params(1.0, 1.0), std::invalid_argument);
}

TEST_CASE("c_constants: fixed sub-constants")
{
    const auto c = c_constants(gaussian_params(1.0), 100, 1.0);
    CHECK(c.c_prime == std::sqrt(27.0 / 8192.0));
    CHECK(c.c_dprime == 27.0 / 2048.0);
}

TEST_CASE("c_constants at a2 = 1, delta = 1, m = 100 against 50-digit evaluation")
{
    const auto c = c_constants(gaussian_params(1.0), 100, 1.0);
    const oracle::C o = oracle::constants(Big(1), 100, Big(1));
    CHECK(rel(c.c3, o.c3) <= 1e-14);
    CHECK(rel(c.b, o.b) <= 1e-14);
    CHECK(rel(c.c1, o.c1) <= 1e-13);
    CHECK(rel(c.c2, o.c2) <= 1e-13);
}

TEST_CASE("c_constants: c2 + ln 3 / m <= a2")
{
    for (double a2 : {0.001, 0.01, 0.5, 3.0})
        for (Index m : {2, 10, 1000}) {
            const auto c = c_constants(gaussian_params(a2), m, 0.5);
            CHECK(c.c2 + std::log(3.0) / double(m) <= a2 * (1 + 1e-15));
        }
}

TEST_CASE("c_constants preconditions")
{
    const BoundParams p = gaussian_params(1.0);
    CHECK_THROWS_AS(c_constants(p, 100, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(c_constants(p, 100, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(c_constants(p, 1, 1.0), std::invalid_argument);
}

TEST_CASE("c_delta")
{
    // p = l - k reduces sqrt(n - l + p) to sqrt(n - k).
    CHECK(c_delta(100, 5, 10, 5, 0.01) == c_delta_thm(100, 5, 10, 0.01));
    CHECK(c_delta(100, 5, 10, 5, 0.02) < c_delta(100, 5, 10, 5, 0.01));
    CHECK(c_delta(200, 5, 10, 5, 0.01) > c_delta(100, 5, 10, 5, 0.01));
    CHECK(rel(c_delta(2000, 40, 45, 5, 0.01), oracle::c_delta(2000, 40, 45, 5, Big("0.01"))) <= 1e-14);
    CHECK_THROWS_AS(c_delta(100, 5, 10, 6, 0.01), std::invalid_argument);
    CHECK_THROWS_AS(c_delta(100, 5, 10, 5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(c_delta(8, 5, 10, 5, 0.1), std::invalid_argument);
}

TEST_CASE("SPRQLP matrix-error bounds on pds(200, 30, 2), k = 40, l1 = 45, l2 = 80")
{
    const Spectrum s = pds(200, 30, 2.0);
    const BoundParams p = params_for_sprqlp(gaussian_params(1.0, 0.01), 40, 45, 80);
    const MatrixErrorBounds b = thm_matrix_error_sprqlp(s, 200, 200, 40, 45, 80, p);

    const oracle::C c1 = oracle::constants(Big(1), 45, Big(45) / 40 - 1);
    const oracle::C c2 = oracle::constants(Big(1), 80, Big(80) / 45 - 1);
    const Big oc1 = std::min(c1.c1, c2.c1);
    CHECK(rel(p.c1, oc1) <= 1e-13);
    CHECK(rel(p.c2, std::min(c1.c2, c2.c2)) <= 1e-13);

    const Big a = oracle::a1(Big(1));
    const Big outer = 1 + a * sqrt(Big(200)) / (Big(p.c1) * sqrt(Big(80)));
    const Big rf = sqrt(a * a * 200 / (Big(p.c1) * Big(p.c1) * 45) + 1);
    const Big cd = oracle::c_delta(200, 40, 45, 5, Big(0.01));
    CHECK(rel(b.spectral.bound_value, 2 * outer * rf * Big(s[40])) <= 1e-13);
    CHECK(rel(b.frobenius.bound_value, outer * oracle::frob_core(s, 40, cd)) <= 1e-13);
    CHECK(rel(b.c_delta, cd) <= 1e-14);

    const double ea2 = std::exp(-200.0);
    CHECK(b.spectral.probability_floor ==
          doctest::Approx(1 - 2 * ea2 - std::exp(-p.c2 * 45) - std::exp(-p.c2 * 80)));
    CHECK(b.frobenius.probability_floor == doctest::Approx(1 - ea2 - std::exp(-p.c2 * 80) - 0.01));
    CHECK(b.spectral.probability_floor <= 1.0);
    REQUIRE(b.spectral.assumptions.size() == 2);
}

TEST_CASE("SORQLP matrix-error bounds on eds(200, 30, 0.25), k = 40, l = 45")
{
    const Spectrum s = spectrum_values({SpectrumFamily::eds, 200, 30, 0.25, 0});
    const BoundParams p = params_for_sorqlp(gaussian_params(1.0, 0.01), 40, 45);
    const MatrixErrorBounds b = thm_matrix_error_sorqlp(s, 200, 40, 45, p);
    const oracle::C c = oracle::constants(Big(1), 45, Big(45) / 40 - 1);
    CHECK(rel(p.c1, c.c1) <= 1e-13);
    const Big a = oracle::a1(Big(1));
    const Big rf = sqrt(a * a * 200 / (c.c1 * c.c1 * 45) + 1);
    const Big cd = oracle::c_delta(200, 40, 45, 5, Big(0.01));
    CHECK(rel(b.spectral.bound_value, 2 * rf * Big(s[40])) <= 1e-12);
    CHECK(rel(b.frobenius.bound_value, oracle::frob_core(s, 40, cd)) <= 1e-13);
    CHECK(b.frobenius.probability_floor == doctest::Approx(0.99));
    CHECK(b.spectral.assumptions.back().holds); // full rank
}

TEST_CASE("exact-rank spectrum gives zero matrix-error bounds")
{
    Spectrum s(100, 0.0);
    for (int i = 0; i < 10; ++i)
        s[std::size_t(i)] = 10.0 - i;
    const BoundParams ps = params_for_sprqlp(gaussian_params(1.0), 10, 15, 30);
    const MatrixErrorBounds b = thm_matrix_error_sprqlp(s, 100, 100, 10, 15, 30, ps);
    CHECK(b.spectral.bound_value == 0.0);
    CHECK(b.frobenius.bound_value == 0.0);
    const MatrixErrorBounds c = thm_matrix_error_sorqlp(s, 100, 10, 15, params_for_sorqlp(gaussian_params(1.0), 10, 15));
    CHECK(c.spectral.bound_value == 0.0);
    CHECK(c.frobenius.bound_value == 0.0);
    CHECK_FALSE(c.spectral.assumptions.back().holds);
}

TEST_CASE("matrix-error bounds are homogeneous of degree one")
{
    const Spectrum s = pds(150, 10, 1.5);
    Spectrum scaled = s;
    for (double& v : scaled)
        v *= 37.5;
    const BoundParams p = params_for_sprqlp(gaussian_params(0.5), 20, 25, 50);
    const MatrixErrorBounds x = thm_matrix_error_sprqlp(s, 150, 150, 20, 25, 50, p);
    const MatrixErrorBounds y = thm_matrix_error_sprqlp(scaled, 150, 150, 20, 25, 50, p);
    CHECK(y.spectral.bound_value == doctest::Approx(37.5 * x.spectral.bound_value).epsilon(1e-12));
    CHECK(y.frobenius.bound_value == doctest::Approx(37.5 * x.frobenius.bound_value).epsilon(1e-12));
    CHECK(y.spectral.probability_floor == x.spectral.probability_floor);
}

TEST_CASE("hypotheses are reported, not thrown")
{
    const Spectrum s = pds(100, 5, 1.0);
    const BoundParams p = params_for_sprqlp(gaussian_params(1.0), 40, 42, 43);
    const MatrixErrorBounds b = thm_matrix_error_sprqlp(s, 100, 100, 40, 42, 43, p);
    CHECK_FALSE(b.spectral.assumptions[0].holds);
    CHECK_FALSE(b.spectral.assumptions[1].holds);
    BoundReport r;
    r.assumptions = b.spectral.assumptions;
    CHECK_FALSE(r.assumptions_met());

    const BoundParams q = params_for_sprqlp(gaussian_params(1.0), 10, 20, 60);
    CHECK(thm_matrix_error_sprqlp(s, 100, 100, 10, 20, 60, q).spectral.assumptions_met());
}

TEST_CASE("probability floors grow with the sketch sizes")
{
    const Spectrum s = pds(400, 5, 1.0);
    BoundParams p = gaussian_params(1.0);
    p.c1 = 1e-3;
    p.c2 = 0.05;
    double prev = -1e300;
    for (Index l2 : {30, 40, 80, 160}) {
        const double f = thm_matrix_error_sprqlp(s, 400, 400, 10, 20, l2, p).spectral.probability_floor;
        CHECK(f >= prev);
        prev = f;
    }
}

TEST_CASE("singular-value envelopes")
{
    const Spectrum s = pds(200, 30, 2.0);
    const BoundParams p = params_for_sprqlp(gaussian_params(1.0), 40, 45, 80);
    const Big cd = oracle::c_delta(200, 40, 45, 5, Big(0.01));
    const Big a = oracle::a1(Big(1));
    const Big big_c = 2 * a * sqrt(Big(200)) / (Big(p.c1) * sqrt(Big(80))) *
                      sqrt(a * a * 200 / (Big(p.c1) * Big(p.c1) * 45) + 1) * Big(s[40]);
    for (Index j = 1; j <= 40; ++j) {
        const SingularValueEnvelope e = singular_value_envelope_sprqlp(s, 200, 200, 40, 45, 80, p, j);
        const Big rho = sqrt(1 + cd * cd * pow(Big(s[40]) / Big(s[std::size_t(j - 1)]), 2));
        CHECK(e.rho >= 1.0);
        CHECK(rel(e.rho, rho) <= 1e-13);
        CHECK(rel(e.c, big_c) <= 1e-13);
        CHECK(rel(e.upper, big_c + Big(s[std::size_t(j - 1)])) <= 1e-13);
        CHECK(e.lower_floor <= e.upper_floor);

        const SingularValueEnvelope o = singular_value_envelope_sorqlp(s, 200, 40, 45, p, j);
        CHECK(o.upper == s[std::size_t(j - 1)]);
        CHECK(rel(o.lower, Big(s[std::size_t(j - 1)]) / rho) <= 1e-13);
        CHECK(o.lower_floor == doctest::Approx(0.99));
    }
}

TEST_CASE("envelope collapses on an exact-rank spectrum")
{
    Spectrum s(60, 0.0);
    for (int i = 0; i < 8; ++i)
        s[std::size_t(i)] = 1.0 / (i + 1);
    const BoundParams p = params_for_sprqlp(gaussian_params(1.0), 8, 12, 24);
    for (Index j = 1; j <= 8; ++j) {
        const SingularValueEnvelope e = singular_value_envelope_sprqlp(s, 60, 60, 8, 12, 24, p, j);
        CHECK(e.rho == 1.0);
        CHECK(e.c == 0.0);
        CHECK(e.lower == s[std::size_t(j - 1)]);
        CHECK(e.upper == s[std::size_t(j - 1)]);
    }
    s[2] = 0.0;
    CHECK_THROWS_AS(singular_value_envelope_sprqlp(s, 60, 60, 8, 12, 24, p, 3), std::invalid_argument);
    CHECK_THROWS_AS(singular_value_envelope_sprqlp(s, 60, 60, 8, 12, 24, p, 9), std::invalid_argument);
}

TEST_CASE("envelopes scale: bounds homogeneous, rho dimensionless")
{
    const Spectrum s = pds(120, 10, 1.0);
    Spectrum t = s;
    for (double& v : t)
        v *= 0.003;
    const BoundParams p = params_for_sprqlp(gaussian_params(1.0), 15, 20, 40);
    for (Index j : {1, 7, 15}) {
        const auto x = singular_value_envelope_sprqlp(s, 120, 120, 15, 20, 40, p, j);
        const auto y = singular_value_envelope_sprqlp(t, 120, 120, 15, 20, 40, p, j);
        CHECK(y.rho == doctest::Approx(x.rho).epsilon(1e-14));
        CHECK(y.upper == doctest::Approx(0.003 * x.upper).epsilon(1e-12));
        CHECK(y.lower == doctest::Approx(0.003 * x.lower).epsilon(1e-12));
    }
}

TEST_CASE("posteriori diagnostics on a diagonal B")
{
    MatrixXd b = MatrixXd::Zero(5, 8);
    b.diagonal() << 5, 4, 3, 2, 1;
    const QlpFactors<double> f = qlp_decompose(b);
    for (Index s = 1; s < 5; ++s) {
        const PosterioriDiagnostics d = posteriori_diagnostics(f, s);
        CHECK(d.r12_norm == 0.0);
        CHECK(d.rho1 == doctest::Approx(double(5 - s) / double(6 - s)).epsilon(1e-14));
        CHECK(d.remainder_prefactor == 0.0);
        for (const Predicate& pr : d.predicates)
            CHECK_MESSAGE(pr.holds, pr.name);
    }
    CHECK_THROWS_AS(posteriori_diagnostics(f, 0), std::invalid_argument);
    CHECK_THROWS_AS(posteriori_diagnostics(f, 5), std::invalid_argument);
}

TEST_CASE("posteriori diagnostics at s = 1 reduce to r11 and l11")
{
    const MatrixXd b = testing::random_matrix(6, 15, 3);
    const QlpFactors<double> f = qlp_decompose(b);
    const PosterioriDiagnostics d = posteriori_diagnostics(f, 1);
    CHECK(d.sigma_s_r11 == std::abs(f.r0(0, 0)));
    CHECK(d.sigma_s_l11 == std::abs(f.l(0, 0)));
    CHECK(d.rho1 == doctest::Approx(spectral_norm<double>(f.l.bottomRightCorner(5, 5)) / std::abs(f.l(0, 0))));
}

TEST_CASE("posteriori diagnostics match explicitly formed blocks")
{
    const MatrixXd b = testing::random_matrix(20, 20, 4);
    const QlpFactors<double> f = qlp_decompose(b, false);
    for (Index s : {1, 5, 12, 19}) {
        const PosterioriDiagnostics d = posteriori_diagnostics(f, s);
        Eigen::JacobiSVD<MatrixXd> r12(f.r0.block(0, s, s, 20 - s)), r22(f.r0.block(s, s, 20 - s, 20 - s)),
            r11(f.r0.topLeftCorner(s, s)), l11(f.l.topLeftCorner(s, s)), l22(f.l.bottomRightCorner(20 - s, 20 - s));
        CHECK(d.r12_norm == doctest::Approx(r12.singularValues()(0)).epsilon(1e-12));
        CHECK(d.r22_norm == doctest::Approx(r22.singularValues()(0)).epsilon(1e-12));
        CHECK(d.sigma_s_r11 == doctest::Approx(r11.singularValues()(s - 1)).epsilon(1e-11));
        CHECK(d.sigma_s_l11 == doctest::Approx(l11.singularValues()(s - 1)).epsilon(1e-11));
        CHECK(d.rho1 == doctest::Approx(l22.singularValues()(0) / l11.singularValues()(s - 1)).epsilon(1e-11));
        CHECK_FALSE(d.pivoted_second);
        const double q = 20.0;
        if (d.rho1 < 1.0)
            CHECK(d.remainder_prefactor ==
                  doctest::Approx(std::pow(q, 2.5) * d.r12_norm * d.r12_norm /
                                  ((1 - d.rho1 * d.rho1) * d.sigma_s_l11 * d.sigma_s_l11)));
        else
            CHECK(std::isinf(d.remainder_prefactor));
    }
}

TEST_CASE("BoundParams validation")
{
    BoundParams p = gaussian_params(1.0);
    CHECK_THROWS_AS(p.validate(), std::invalid_argument); // c1 not yet filled
    p = with_c_constants(p, 50, 1.0);
    CHECK_NOTHROW(p.validate());
    p.mu = 0.5;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
