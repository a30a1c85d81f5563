#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "bcdcp/errors.hpp"
#include "bcdcp/laws.hpp"
#include "bcdcp/numerics.hpp"
#include "bcdcp/rng.hpp"

using namespace bcdcp;

namespace {

const Law kLoggamma = LoggammaLaw{1.0, 2.75, 3.0};
const Law kFrechet = FrechetLaw{2.0, 3.0};
const Law kParetoJ = ParetoLaw{3.0, 4.0, 6.0};
const Law kParetoK = ParetoLaw{4.0, 4.0, 6.0};
const Law kExp01 = ExponentialLaw{0.1};

// Independent oracle for the loggamma transform: integrate over the gamma
// representation W ~ Gamma(shape, rate), Y = scale(e^W - 1).
double loggamma_lt_oracle(double scale, double rate, double shape, double eps) {
    double norm = std::pow(rate, shape) / std::tgamma(shape);
    auto f = [&](double w) {
        return std::exp(-eps * scale * std::expm1(w)) * norm * std::pow(w, shape - 1.0) *
               std::exp(-rate * w);
    };
    return num::integrate_or_throw(f, 0.0, 80.0, 1e-13, "loggamma lt oracle");
}

double ks_statistic(std::vector<double>& samples, const Law& law) {
    std::sort(samples.begin(), samples.end());
    double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (size_t i = 0; i < samples.size(); ++i) {
        double f = cdf(law, samples[i]);
        d = std::max(d, std::abs((i + 1) / n - f));
        d = std::max(d, std::abs(f - i / n));
    }
    return d;
}

}  // namespace

TEST_CASE("exponential laplace transform closed form") {
    CHECK(laplace_transform(kExp01, 0.0) == 1.0);
    CHECK(laplace_transform(kExp01, 0.1) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("loggamma laplace transform against the gamma-representation oracle") {
    double expected = loggamma_lt_oracle(1.0, 2.75, 3.0, 1.0);
    double got = laplace_transform(kLoggamma, 1.0, 1e-12);
    CHECK(got == doctest::Approx(expected).epsilon(1e-10));
    // a second argument, off the pinned one
    expected = loggamma_lt_oracle(1.0, 2.75, 3.0, 0.35);
    got = laplace_transform(kLoggamma, 0.35, 1e-12);
    CHECK(got == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("means match the published values") {
    CHECK(mean(kLoggamma) == doctest::Approx(2.8805).epsilon(5e-5));       // (11/7)^3 - 1
    CHECK(mean(kLoggamma) == doctest::Approx(std::pow(11.0 / 7.0, 3) - 1.0).epsilon(1e-15));
    CHECK(mean(kFrechet) == doctest::Approx(2.7082).epsilon(5e-5));        // 2 Gamma(2/3)
    CHECK(mean(kParetoJ) == doctest::Approx(12.0).epsilon(1e-15));
    CHECK(mean(kParetoK) == doctest::Approx(8.0).epsilon(1e-15));
    CHECK(second_moment(kParetoJ) == doctest::Approx(336.0).epsilon(1e-15));
}

TEST_CASE("moments against quadrature of the density") {
    for (const Law& law : {kLoggamma, kFrechet, kParetoJ, kParetoK}) {
        double m1 = num::integrate_half_line_or_throw(
            [&](double x) { return x * pdf(law, x); }, 1e-11, "m1");
        double m2 = num::integrate_half_line_or_throw(
            [&](double x) { return x * x * pdf(law, x); }, 1e-6, "m2");
        CHECK(mean(law) == doctest::Approx(m1).epsilon(1e-7));
        CHECK(second_moment(law) == doctest::Approx(m2).epsilon(1e-6));
    }
}

TEST_CASE("nonexistent moments raise domain errors") {
    CHECK_THROWS_AS(mean(Law(FrechetLaw{1.0, 0.9})), DomainError);
    CHECK_THROWS_AS(second_moment(Law(FrechetLaw{1.0, 1.5})), DomainError);
    CHECK_THROWS_AS(mean(Law(ParetoLaw{1.0, 4.0, 6.0})), DomainError);
    CHECK_THROWS_AS(second_moment(Law(LoggammaLaw{1.0, 1.8, 3.0})), DomainError);
}

TEST_CASE("quantile and cdf are inverse") {
    CHECK(quantile(kExp01, 1.0 - std::exp(-1.0)) == doctest::Approx(10.0).epsilon(1e-12));
    for (const Law& law : {kLoggamma, kFrechet, kParetoJ, kExp01}) {
        for (double u : {0.05, 0.3, 0.62, 0.97}) {
            CHECK(cdf(law, quantile(law, u)) == doctest::Approx(u).epsilon(1e-9));
        }
    }
}

TEST_CASE("pdf is the cdf derivative") {
    for (const Law& law : {kLoggamma, kFrechet, kParetoJ}) {
        for (double x : {0.5, 1.7, 4.0, 11.0}) {
            double h = 1e-6 * std::max(1.0, x);
            double fd = (cdf(law, x + h) - cdf(law, x - h)) / (2.0 * h);
            CHECK(pdf(law, x) == doctest::Approx(fd).epsilon(1e-6));
        }
    }
}

TEST_CASE("laplace transform invariants: value 1 at zero, decreasing, convex") {
    for (const Law& law : {kLoggamma, kFrechet, kParetoJ, kExp01, Law(ZeroLaw{})}) {
        CHECK(laplace_transform(law, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
        std::vector<double> grid;
        for (double e = 0.0; e <= 2.0001; e += 0.25) grid.push_back(laplace_transform(law, e));
        bool zero_law = std::holds_alternative<ZeroLaw>(law);
        for (size_t i = 0; i + 1 < grid.size(); ++i) {
            if (zero_law)
                CHECK(grid[i + 1] == doctest::Approx(grid[i]));
            else
                CHECK(grid[i + 1] < grid[i]);
        }
        for (size_t i = 0; i + 2 < grid.size(); ++i)
            CHECK(grid[i] + grid[i + 2] - 2.0 * grid[i + 1] >= -1e-12);
    }
}

TEST_CASE("laplace transform slope at zero reproduces the mean") {
    // One-sided second-order stencil: the transform only exists for eps >= 0
    // (the heavy-tailed laws have no moment generating function).
    const double h = 1e-5;
    for (const Law& law : {kLoggamma, kFrechet, kParetoJ, kExp01}) {
        double f0 = 1.0;
        double f1 = laplace_transform(law, h, 1e-13);
        double f2 = laplace_transform(law, 2.0 * h, 1e-13);
        double slope = -(-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * h);
        CHECK(slope == doctest::Approx(mean(law)).epsilon(1e-5));
    }
}

TEST_CASE("samplers agree with the laws") {
    Rng rng(99);

    SUBCASE("kolmogorov-smirnov for the quantile-based samplers") {
        for (const Law& law : {kExp01, kFrechet, kParetoJ}) {
            std::vector<double> xs(100000);
            for (double& x : xs) x = sample(law, rng);
            double d = ks_statistic(xs, law);
            CHECK(d < 1.6276 / std::sqrt(100000.0));  // 1% critical value
        }
    }

    SUBCASE("loggamma moments within three standard errors") {
        const std::int64_t n = 1'000'000;
        double s = 0, s2 = 0;
        for (std::int64_t i = 0; i < n; ++i) {
            double x = sample(kLoggamma, rng);
            s += x;
            s2 += x * x;
        }
        double m = s / n;
        double se = std::sqrt((s2 / n - m * m) / n);
        CHECK(std::abs(m - mean(kLoggamma)) < 3.0 * se);
    }

    SUBCASE("pareto mean within three standard errors") {
        const std::int64_t n = 1'000'000;
        double s = 0, s2 = 0;
        for (std::int64_t i = 0; i < n; ++i) {
            double x = sample(kParetoJ, rng);
            s += x;
            s2 += x * x;
        }
        double m = s / n;
        double se = std::sqrt((s2 / n - m * m) / n);
        CHECK(std::abs(m - 12.0) < 3.0 * se);
    }
}

TEST_CASE("compiled samplers reproduce the law distributions") {
    Rng rng(1234);
    for (const Law& law : {kLoggamma, kFrechet, kParetoJ, kExp01}) {
        CompiledSampler cs(law);
        double s = 0, s2 = 0;
        const std::int64_t n = 400000;
        for (std::int64_t i = 0; i < n; ++i) {
            double x = cs(rng);
            s += x;
            s2 += x * x;
        }
        double m = s / n;
        double se = std::sqrt((s2 / n - m * m) / n);
        CHECK(std::abs(m - mean(law)) < 4.0 * se);
    }
    CompiledSampler zero{Law(ZeroLaw{})};
    CHECK(zero(rng) == 0.0);
}

TEST_CASE("gamma building block") {
    Rng rng(5);
    double s = 0, s2 = 0;
    const std::int64_t n = 400000;
    for (std::int64_t i = 0; i < n; ++i) {
        double x = sample_gamma(2.5, rng);
        s += x;
        s2 += x * x;
    }
    double m = s / n;
    double v = s2 / n - m * m;
    CHECK(m == doctest::Approx(2.5).epsilon(0.01));
    CHECK(v == doctest::Approx(2.5).epsilon(0.03));
    // shape < 1 boost branch
    s = 0;
    for (std::int64_t i = 0; i < n; ++i) s += sample_gamma(0.6, rng);
    CHECK(s / n == doctest::Approx(0.6).epsilon(0.02));
}

TEST_CASE("invalid parameters are rejected") {
    CHECK_THROWS_AS(check_valid(Law(ExponentialLaw{-1.0})), DomainError);
    CHECK_THROWS_AS(check_valid(Law(LoggammaLaw{1.0, 0.0, 3.0})), DomainError);
    CHECK_THROWS_AS(check_valid(Law(FrechetLaw{0.0, 3.0})), DomainError);
    CHECK_THROWS_AS(check_valid(Law(ParetoLaw{3.0, -4.0, 6.0})), DomainError);
    CHECK_NOTHROW(check_valid(Law(ZeroLaw{})));
}
