#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "bcdcp/copula.hpp"
#include "bcdcp/errors.hpp"
#include "bcdcp/numerics.hpp"

using namespace bcdcp;

namespace {

const Law kExp01 = ExponentialLaw{0.1};

CopulaSpec fgm(double th) { return {CopulaFamily::Fgm, th, 0.0}; }
CopulaSpec gauss(double th) { return {CopulaFamily::Gaussian, th, 0.0}; }
CopulaSpec tcop(double th, double dof = 5.0) { return {CopulaFamily::StudentT, th, dof}; }
CopulaSpec gumbel(double th) { return {CopulaFamily::Gumbel, th, 0.0}; }

double ks_uniform(std::vector<double>& u) {
    std::sort(u.begin(), u.end());
    double n = static_cast<double>(u.size());
    double d = 0.0;
    for (size_t i = 0; i < u.size(); ++i) {
        d = std::max(d, std::abs((i + 1) / n - u[i]));
        d = std::max(d, std::abs(u[i] - i / n));
    }
    return d;
}

double norm_ppf_bisect(double u) {
    double lo = -40.0, hi = 40.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double c = 0.5 * std::erfc(-mid * M_SQRT1_2);
        (c < u ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Independent oracle for the Gaussian-copula cross moment with exponential
// marginals: rotate the bivariate normal into principal axes (no diagonal
// ridge) and integrate the smooth integrand over (0,1)^2.
double gaussian_cross_oracle(double th, double rate1, double rate2) {
    auto rule = num::graded_unit_rule(16, 16, 10);
    double sp = std::sqrt(1.0 + th), sq = std::sqrt(1.0 - th);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    std::vector<double> p(rule.x.size()), q(rule.x.size());
    for (size_t i = 0; i < rule.x.size(); ++i) {
        double z = norm_ppf_bisect(rule.x[i]);
        p[i] = sp * z;
        q[i] = sq * z;
    }
    auto exp_q = [](double rate, double x) {
        double u = 0.5 * std::erfc(-x * M_SQRT1_2);
        u = std::clamp(u, 1e-300, 1.0 - 1e-16);
        return -std::log1p(-u) / rate;
    };
    num::CompensatedSum total;
    for (size_t i = 0; i < rule.x.size(); ++i) {
        num::CompensatedSum row;
        for (size_t j = 0; j < rule.x.size(); ++j) {
            double x = (p[i] + q[j]) * inv_sqrt2;
            double y = (p[i] - q[j]) * inv_sqrt2;
            row.add(rule.w[j] * exp_q(rate1, x) * exp_q(rate2, y));
        }
        total.add(rule.w[i] * row.value());
    }
    return total.value();
}

}  // namespace

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(check_valid(fgm(1.5)), DomainError);
    CHECK_THROWS_AS(check_valid(gauss(-1.2)), DomainError);
    CHECK_THROWS_AS(check_valid(gumbel(0.5)), DomainError);
    CHECK_THROWS_AS(check_valid(tcop(0.5, -1.0)), DomainError);
    CHECK_NOTHROW(check_valid(gauss(1.0)));
    CHECK_NOTHROW(check_valid(gumbel(1.0)));
}

TEST_CASE("fgm cross moment closed form") {
    CHECK(cross_moment(fgm(0.0), kExp01, kExp01).value == doctest::Approx(100.0).epsilon(1e-14));
    CHECK(cross_moment(fgm(1.0), kExp01, kExp01).value == doctest::Approx(125.0).epsilon(1e-14));
    CHECK(cross_moment(fgm(1.0), kExp01, kExp01).method == CrossMomentMethod::ClosedForm);

    // affine in theta with slope (1/(alpha beta))/4
    double m_m1 = cross_moment(fgm(-1.0), kExp01, kExp01).value;
    double m_0 = cross_moment(fgm(0.0), kExp01, kExp01).value;
    double m_p1 = cross_moment(fgm(1.0), kExp01, kExp01).value;
    CHECK(m_p1 - m_0 == doctest::Approx(25.0).epsilon(1e-13));
    CHECK(m_0 - m_m1 == doctest::Approx(25.0).epsilon(1e-13));
}

TEST_CASE("gaussian cross moment against the rotated-axes oracle") {
    for (double th : {-0.99, -0.5, 0.5, 0.99}) {
        double oracle = gaussian_cross_oracle(th, 0.1, 0.1);
        CrossMomentResult r = cross_moment(gauss(th), kExp01, kExp01);
        CHECK(r.method == CrossMomentMethod::Quadrature);
        CHECK(r.value == doctest::Approx(oracle).epsilon(2e-4));
    }
    // independence and the degenerate limits
    CHECK(cross_moment(gauss(0.0), kExp01, kExp01).value == doctest::Approx(100.0));
    CHECK(cross_moment(gauss(1.0), kExp01, kExp01).value == doctest::Approx(200.0).epsilon(1e-6));
    CHECK(cross_moment(gauss(-1.0), kExp01, kExp01).value ==
          doctest::Approx(100.0 * (2.0 - M_PI * M_PI / 6.0)).epsilon(1e-6));
}

TEST_CASE("student t keeps dependence at theta zero") {
    double v = cross_moment(tcop(0.0), kExp01, kExp01).value;
    CHECK(v > 103.0);  // tail dependence raises it above the product of means
    CHECK(v < 105.0);
}

TEST_CASE("gumbel cross moment limits") {
    CHECK(cross_moment(gumbel(1.0), kExp01, kExp01).value == doctest::Approx(100.0));
    double near_indep = cross_moment(gumbel(1.001), kExp01, kExp01).value;
    CHECK(near_indep == doctest::Approx(100.2).epsilon(2e-3));
    double near_comon = cross_moment(gumbel(100.0), kExp01, kExp01).value;
    CHECK(near_comon == doctest::Approx(200.0).epsilon(2e-3));
    CHECK(near_comon < 200.0);
}

TEST_CASE("conditional quantile is consistent with the density") {
    // C_{2|1}(v|u) = int_0^v c(u, s) ds must equal the w recovered by
    // inverting the conditional quantile.
    for (const CopulaSpec& spec : {fgm(0.7), gauss(0.6), tcop(-0.4), gumbel(2.5)}) {
        for (double u : {0.2, 0.55, 0.9}) {
            for (double v : {0.3, 0.7}) {
                double integral = num::integrate_or_throw(
                    [&](double s) { return copula_density(spec, u, s); }, 1e-12, v, 1e-11,
                    "conditional cdf");
                double w = num::brent(
                    [&](double w_) { return conditional_quantile(spec, u, w_) - v; }, 1e-12,
                    1.0 - 1e-12, 1e-13);
                CHECK(integral == doctest::Approx(w).epsilon(1e-7));
            }
        }
    }
}

TEST_CASE("copula samplers: uniform marginals") {
    Rng rng(2027);
    for (const CopulaSpec& spec : {fgm(0.8), gauss(0.7), tcop(0.5), gumbel(3.0)}) {
        std::vector<double> u1(100000), u2(100000);
        for (size_t i = 0; i < u1.size(); ++i) {
            auto [a, b] = sample_uniform_pair(spec, rng);
            u1[i] = a;
            u2[i] = b;
        }
        CHECK(ks_uniform(u1) < 1.6276 / std::sqrt(100000.0));
        CHECK(ks_uniform(u2) < 1.6276 / std::sqrt(100000.0));
    }
}

TEST_CASE("fgm independence at theta zero: empirical correlation") {
    Rng rng(8);
    const int n = 100000;
    double su = 0, sv = 0, suv = 0, su2 = 0, sv2 = 0;
    for (int i = 0; i < n; ++i) {
        auto [u, v] = sample_uniform_pair(fgm(0.0), rng);
        su += u;
        sv += v;
        suv += u * v;
        su2 += u * u;
        sv2 += v * v;
    }
    double mu = su / n, mv = sv / n;
    double corr = (suv / n - mu * mv) /
                  std::sqrt((su2 / n - mu * mu) * (sv2 / n - mv * mv));
    CHECK(std::abs(corr) < 3.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("sampled shocks reproduce the cross moment") {
    SUBCASE("fgm theta 1 against 125") {
        CrossMomentResult mc = cross_moment_mc(fgm(1.0), kExp01, kExp01, 1'000'000, 42);
        CHECK(std::abs(mc.value - 125.0) < 3.0 * mc.error_estimate);
    }
    SUBCASE("gumbel near independence against 100.2") {
        double expected = cross_moment(gumbel(1.001), kExp01, kExp01).value;
        CrossMomentResult mc = cross_moment_mc(gumbel(1.001), kExp01, kExp01, 1'000'000, 43);
        CHECK(std::abs(mc.value - expected) < 3.0 * mc.error_estimate);
    }
    SUBCASE("student t against the quadrature path") {
        double expected = cross_moment(tcop(0.5), kExp01, kExp01).value;
        CrossMomentResult mc = cross_moment_mc(tcop(0.5), kExp01, kExp01, 400'000, 44);
        CHECK(std::abs(mc.value - expected) < 4.0 * mc.error_estimate);
    }
    SUBCASE("gaussian against the quadrature path") {
        double expected = cross_moment(gauss(-0.5), kExp01, kExp01).value;
        CrossMomentResult mc = cross_moment_mc(gauss(-0.5), kExp01, kExp01, 400'000, 45);
        CHECK(std::abs(mc.value - expected) < 4.0 * mc.error_estimate);
    }
}

TEST_CASE("degenerate gaussian limits sample comonotonically") {
    Rng rng(71);
    auto [u, v] = sample_uniform_pair(gauss(1.0), rng);
    CHECK(u == v);
    auto [a, b] = sample_uniform_pair(gauss(-1.0), rng);
    CHECK(a == doctest::Approx(1.0 - b).epsilon(1e-15));
    CHECK_THROWS_AS(copula_density(gauss(1.0), 0.5, 0.5), DomainError);
}
