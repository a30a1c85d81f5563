#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bcdcp/errors.hpp"
#include "bcdcp/numerics.hpp"

using namespace bcdcp;

TEST_CASE("adaptive quadrature on closed forms") {
    auto r = num::integrate([](double x) { return x * x; }, 0.0, 3.0, 1e-12);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(9.0).epsilon(1e-12));

    r = num::integrate([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-12);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));

    // integrable endpoint singularity
    r = num::integrate([](double x) { return 1.0 / std::sqrt(x); }, 1e-30, 1.0, 1e-10);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("half-line quadrature") {
    auto r = num::integrate_half_line([](double x) { return std::exp(-x); }, 1e-12);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
    r = num::integrate_half_line([](double x) { return std::exp(-x * x); }, 1e-12);
    CHECK(r.value == doctest::Approx(std::sqrt(M_PI) / 2.0).epsilon(1e-12));
    r = num::integrate_half_line([](double x) { return x * x * std::exp(-0.5 * x); }, 1e-11);
    CHECK(r.value == doctest::Approx(16.0).epsilon(1e-11));
}

TEST_CASE("gauss-legendre rule integrates high-degree polynomials") {
    const auto& rule = num::gauss_legendre(16);
    double s = 0.0;
    for (int i = 0; i < 16; ++i) s += rule.w[i] * std::pow(rule.x[i], 30);
    CHECK(s == doctest::Approx(2.0 / 31.0).epsilon(1e-13));
    double sw = 0.0;
    for (double w : rule.w) sw += w;
    CHECK(sw == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("graded rule handles log endpoint singularities") {
    auto rule = num::graded_unit_rule(12, 14, 8);
    double s = 0.0;
    for (size_t i = 0; i < rule.x.size(); ++i) s += rule.w[i] * (-std::log1p(-rule.x[i]));
    CHECK(s == doctest::Approx(1.0).epsilon(1e-6));
    s = 0.0;
    for (size_t i = 0; i < rule.x.size(); ++i)
        s += rule.w[i] * std::log(rule.x[i]) * std::log1p(-rule.x[i]);
    CHECK(s == doctest::Approx(2.0 - M_PI * M_PI / 6.0).epsilon(1e-9));
}

TEST_CASE("brent finds bracketed roots") {
    double r = num::brent([](double x) { return x * x - 2.0; }, 0.0, 2.0, 1e-14);
    CHECK(r == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
    r = num::brent([](double x) { return std::cos(x) - x; }, 0.0, 1.0, 1e-14);
    CHECK(std::cos(r) == doctest::Approx(r).epsilon(1e-12));
    CHECK_THROWS_AS(num::brent([](double x) { return x + 3.0; }, 0.0, 1.0), DomainError);
}

TEST_CASE("chebyshev proxy reproduces analytic functions") {
    num::Chebyshev c([](double x) { return std::exp(-x) / (1.0 + x); }, 0.0, 2.0, 40);
    for (double x = 0.0; x <= 2.0; x += 0.17) {
        CHECK(c(x) == doctest::Approx(std::exp(-x) / (1.0 + x)).epsilon(1e-13));
    }
}

TEST_CASE("compensated sum is order robust") {
    num::CompensatedSum s;
    s.add(1e16);
    for (int i = 0; i < 10000; ++i) s.add(1e-3);
    s.add(-1e16);
    CHECK(s.value() == doctest::Approx(10.0).epsilon(1e-12));
}
