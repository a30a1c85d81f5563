#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>

#include "bcdcp/errors.hpp"
#include "bcdcp/moments.hpp"

using namespace bcdcp;
using moments::JointInputs;
using moments::LineInputs;
using moments::Pairing;

namespace {

// Generator-driven moment ODE oracle. The infinitesimal generator of the
// process turns every moment in the report into one linear ODE; integrating
// the system with a fine fixed-step RK4 is an implementation-independent check
// of all the closed forms at once.
//
// State: m1 m2 s1 s2 c12 l1 l2 g11 g22 g12 g21 e12 q1 q2
// (means, second moments, joint intensity, losses, intensity-loss products,
// loss product, loss second moments)
struct MomentOde {
    JointInputs J;

    std::array<double, 14> rhs(const std::array<double, 14>& y) const {
        const LineInputs& A = J.l1;
        const LineInputs& B = J.l2;
        double k1 = A.kappa(), k2 = B.kappa();
        auto [m1, m2, s1, s2, c12, l1, l2, g11, g22, g12, g21, e12, q1, q2] = y;
        std::array<double, 14> d{};
        d[0] = A.a * A.delta + A.rho * A.mu1_ext - k1 * m1;
        d[1] = B.a * B.delta + B.rho * B.mu1_ext - k2 * m2;
        d[2] = 2 * A.a * A.delta * m1 - 2 * A.delta * s1 + 2 * A.mu1_self * s1 +
               A.mu2_self * m1 + A.rho * (2 * A.mu1_ext * m1 + A.mu2_ext);
        d[3] = 2 * B.a * B.delta * m2 - 2 * B.delta * s2 + 2 * B.mu1_self * s2 +
               B.mu2_self * m2 + B.rho * (2 * B.mu1_ext * m2 + B.mu2_ext);
        d[4] = A.a * A.delta * m2 + B.a * B.delta * m1 - (k1 + k2) * c12 +
               J.rho * (B.mu1_ext * m1 + A.mu1_ext * m2) + J.rho * J.mu12;
        d[5] = A.mu1_sev * m1;
        d[6] = B.mu1_sev * m2;
        d[7] = A.a * A.delta * l1 - k1 * g11 + A.mu1_sev * s1 + A.mu1_self * A.mu1_sev * m1 +
               A.rho * A.mu1_ext * l1;
        d[8] = B.a * B.delta * l2 - k2 * g22 + B.mu1_sev * s2 + B.mu1_self * B.mu1_sev * m2 +
               B.rho * B.mu1_ext * l2;
        d[9] = A.a * A.delta * l2 - k1 * g12 + B.mu1_sev * c12 + A.rho * A.mu1_ext * l2;
        d[10] = B.a * B.delta * l1 - k2 * g21 + A.mu1_sev * c12 + B.rho * B.mu1_ext * l1;
        d[11] = A.mu1_sev * g12 + B.mu1_sev * g21;
        d[12] = 2 * A.mu1_sev * g11 + A.mu2_sev * m1;
        d[13] = 2 * B.mu1_sev * g22 + B.mu2_sev * m2;
        return d;
    }

    std::array<double, 14> integrate(std::array<double, 14> y, double t, int steps) const {
        double h = t / steps;
        for (int i = 0; i < steps; ++i) {
            auto k1v = rhs(y);
            std::array<double, 14> tmp{};
            for (int j = 0; j < 14; ++j) tmp[j] = y[j] + 0.5 * h * k1v[j];
            auto k2v = rhs(tmp);
            for (int j = 0; j < 14; ++j) tmp[j] = y[j] + 0.5 * h * k2v[j];
            auto k3v = rhs(tmp);
            for (int j = 0; j < 14; ++j) tmp[j] = y[j] + h * k3v[j];
            auto k4v = rhs(tmp);
            for (int j = 0; j < 14; ++j)
                y[j] += h / 6.0 * (k1v[j] + 2 * k2v[j] + 2 * k3v[j] + k4v[j]);
        }
        return y;
    }
};

BcdcpModel example_52(double theta = 0.0) {
    BcdcpModel m;
    m.line1.a = 0.0;
    m.line1.delta = 3.0;
    m.line1.lambda0 = 250.97560975609747;
    m.line1.self_jump = Law(LoggammaLaw{1.0, 2.75, 3.0});
    m.line1.severity = Law(ParetoLaw{3.0, 4.0, 6.0});
    m.line2 = LineParams{};
    m.line2->a = 0.0;
    m.line2->delta = 3.0;
    m.line2->lambda0 = 102.82278671565851;
    m.line2->self_jump = Law(FrechetLaw{2.0, 3.0});
    m.line2->severity = Law(ParetoLaw{4.0, 4.0, 6.0});
    m.shocks.rho = 3.0;
    m.shocks.marg1 = Law(ExponentialLaw{0.1});
    m.shocks.marg2 = Law(ExponentialLaw{0.1});
    m.shocks.copula = CopulaSpec{CopulaFamily::Fgm, theta, 0.0};
    return m;
}

// A deliberately lopsided configuration with a > 0 and exponential laws to
// exercise the general branches of every formula.
BcdcpModel lopsided_model() {
    BcdcpModel m;
    m.line1.a = 0.4;
    m.line1.delta = 2.0;
    m.line1.lambda0 = 1.3;
    m.line1.self_jump = Law(ExponentialLaw{1.25});  // mean 0.8
    m.line1.severity = Law(ExponentialLaw{0.5});
    m.line2 = LineParams{};
    m.line2->a = 0.15;
    m.line2->delta = 3.5;
    m.line2->lambda0 = 2.6;
    m.line2->self_jump = Law(LoggammaLaw{0.5, 4.0, 2.0});
    m.line2->severity = Law(ParetoLaw{4.0, 2.0, 3.0});
    m.shocks.rho = 1.7;
    m.shocks.marg1 = Law(ExponentialLaw{0.9});
    m.shocks.marg2 = Law(ExponentialLaw{0.6});
    m.shocks.copula = CopulaSpec{CopulaFamily::Fgm, 0.6, 0.0};
    return m;
}

JointInputs joint_inputs(const BcdcpModel& m) {
    JointInputs J;
    J.l1 = moments::line_inputs(m, 1);
    J.l2 = moments::line_inputs(m, 2);
    J.rho = m.shocks.rho;
    if (m.shocks.rho > 0 && m.shocks.marg2)
        J.mu12 = cross_moment(m.shocks.copula.value_or(CopulaSpec{}), m.shocks.marg1,
                              *m.shocks.marg2)
                     .value;
    return J;
}

}  // namespace

TEST_CASE("conditional moments match the generator ODE oracle") {
    for (const BcdcpModel& m : {example_52(0.0), example_52(1.0), lopsided_model()}) {
        JointInputs J = joint_inputs(m);
        MomentOde ode{J};
        double l01 = m.line1.lambda0, l02 = m.line2->lambda0;
        for (double t : {0.3, 1.0, 2.5}) {
            std::array<double, 14> y0{};
            y0[0] = l01;
            y0[1] = l02;
            y0[2] = l01 * l01;
            y0[3] = l02 * l02;
            y0[4] = l01 * l02;
            auto y = ode.integrate(y0, t, 4000);
            CHECK(moments::mean_intensity(J.l1, t, l01) == doctest::Approx(y[0]).epsilon(1e-9));
            CHECK(moments::mean_intensity(J.l2, t, l02) == doctest::Approx(y[1]).epsilon(1e-9));
            CHECK(moments::second_moment_intensity(J.l1, t, l01) ==
                  doctest::Approx(y[2]).epsilon(1e-9));
            CHECK(moments::second_moment_intensity(J.l2, t, l02) ==
                  doctest::Approx(y[3]).epsilon(1e-9));
            CHECK(moments::joint_mean_intensity(J, t, l01, l02) ==
                  doctest::Approx(y[4]).epsilon(1e-9));
            CHECK(moments::mean_loss(J.l1, t, l01) == doctest::Approx(y[5]).epsilon(1e-9));
            CHECK(moments::mean_loss(J.l2, t, l02) == doctest::Approx(y[6]).epsilon(1e-9));
        }
    }
}

TEST_CASE("stationary-start moments match the generator ODE oracle") {
    for (const BcdcpModel& m : {example_52(0.0), example_52(-1.0), lopsided_model()}) {
        JointInputs J = joint_inputs(m);
        MomentOde ode{J};
        double m1s = moments::mean_intensity_stationary(J.l1);
        double m2s = moments::mean_intensity_stationary(J.l2);
        for (double t : {0.4, 1.0, 3.0}) {
            std::array<double, 14> y0{};
            y0[0] = m1s;
            y0[1] = m2s;
            y0[2] = moments::second_moment_intensity_stationary(J.l1);
            y0[3] = moments::second_moment_intensity_stationary(J.l2);
            y0[4] = moments::joint_mean_intensity_stationary(J);
            auto y = ode.integrate(y0, t, 4000);
            // the stationary starting values must be fixed points of the
            // intensity marginals
            CHECK(y[0] == doctest::Approx(m1s).epsilon(1e-10));
            CHECK(y[2] == doctest::Approx(y0[2]).epsilon(1e-10));
            CHECK(y[4] == doctest::Approx(y0[4]).epsilon(1e-10));

            CHECK(moments::mean_loss_stationary(J.l1, t) == doctest::Approx(y[5]).epsilon(1e-9));
            CHECK(moments::mean_loss_stationary(J.l2, t) == doctest::Approx(y[6]).epsilon(1e-9));
            CHECK(moments::cross_intensity_loss(J, Pairing::Lam1L1, t) ==
                  doctest::Approx(y[7]).epsilon(1e-9));
            CHECK(moments::cross_intensity_loss(J, Pairing::Lam2L2, t) ==
                  doctest::Approx(y[8]).epsilon(1e-9));
            CHECK(moments::cross_intensity_loss(J, Pairing::Lam1L2, t) ==
                  doctest::Approx(y[9]).epsilon(1e-9));
            CHECK(moments::cross_intensity_loss(J, Pairing::Lam2L1, t) ==
                  doctest::Approx(y[10]).epsilon(1e-9));
            CHECK(moments::joint_mean_losses(J, t) == doctest::Approx(y[11]).epsilon(1e-9));
            CHECK(moments::second_moment_loss(J.l1, t) == doctest::Approx(y[12]).epsilon(1e-9));
            CHECK(moments::second_moment_loss(J.l2, t) == doctest::Approx(y[13]).epsilon(1e-9));
        }
    }
}

TEST_CASE("published values reproduce") {
    BcdcpModel m = example_52(0.0);
    JointInputs J = joint_inputs(m);
    const double t = 1.0;
    CHECK(moments::mean_intensity_stationary(J.l1) == doctest::Approx(250.975).epsilon(5e-6));
    CHECK(moments::mean_loss_stationary(J.l1, t) == doctest::Approx(3011.71).epsilon(2e-6));
    CHECK(moments::var_loss(J.l1, t) == doctest::Approx(6713295.5).epsilon(1e-3));
    CHECK(moments::mean_loss_stationary(J.l2, t) == doctest::Approx(822.582).epsilon(1e-6));
    CHECK(moments::var_loss(J.l2, t) == doctest::Approx(197473.0).epsilon(1e-3));
    CHECK(moments::cov_losses(J, t) == doctest::Approx(65497.54).epsilon(1e-3));
    CHECK(moments::corr_losses(J, t) == doctest::Approx(0.05689).epsilon(1e-3));

    JointInputs J1 = joint_inputs(example_52(1.0));
    CHECK(moments::cov_losses(J1, t) == doctest::Approx(81871.93).epsilon(1e-3));
    CHECK(moments::corr_losses(J1, t) == doctest::Approx(0.07111).epsilon(1e-3));

    // shot-noise benchmark: zero the self-excited jump laws
    BcdcpModel shot = example_52(1.0);
    shot.line1.self_jump = Law(ZeroLaw{});
    shot.line2->self_jump = Law(ZeroLaw{});
    JointInputs Js = joint_inputs(shot);
    CHECK(moments::mean_loss_stationary(Js.l1, t) == doctest::Approx(120.0).epsilon(1e-12));
    CHECK(moments::var_loss(Js.l1, t) == doctest::Approx(9919.32).epsilon(1e-4));
    CHECK(moments::corr_losses(Js, t) == doctest::Approx(0.43199).epsilon(1e-3));
}

TEST_CASE("boundary branch: delta equal to the self-jump mean") {
    // Exponential(0.5) marks have mean exactly 2.0, so delta = 2 sits exactly
    // on the boundary and the linear-growth forms engage.
    LineInputs L;
    L.a = 0.3;
    L.delta = 2.0;
    L.mu1_self = 2.0;
    L.mu2_self = 8.0;
    L.mu1_sev = 2.0;
    L.mu2_sev = 8.0;
    L.mu1_ext = 1.0;
    L.mu2_ext = 2.0;
    L.rho = 1.2;
    CHECK(L.kappa() == 0.0);
    double l0 = 1.7;
    CHECK(moments::mean_intensity(L, 0.0, l0) == doctest::Approx(l0));
    double g1 = moments::mean_intensity(L, 1.0, l0) - l0;
    double g2 = moments::mean_intensity(L, 2.0, l0) - l0;
    CHECK(g2 == doctest::Approx(2.0 * g1).epsilon(1e-12));  // linear growth

    SUBCASE("limit continuity toward the boundary") {
        for (double eps : {1e-6, -1e-6}) {
            LineInputs Le = L;
            Le.delta = 2.0 + eps;
            for (double t : {0.5, 1.0, 2.0}) {
                CHECK(moments::mean_intensity(Le, t, l0) ==
                      doctest::Approx(moments::mean_intensity(L, t, l0)).epsilon(1e-4));
                CHECK(moments::second_moment_intensity(Le, t, l0) ==
                      doctest::Approx(moments::second_moment_intensity(L, t, l0)).epsilon(1e-4));
                CHECK(moments::mean_loss(Le, t, l0) ==
                      doctest::Approx(moments::mean_loss(L, t, l0)).epsilon(1e-4));
            }
        }
    }

    SUBCASE("joint boundary form when both lines sit on it") {
        JointInputs J;
        J.l1 = L;
        J.l2 = L;
        J.l2.a = 0.1;
        J.l2.mu1_ext = 0.8;
        J.rho = 1.2;
        J.mu12 = 0.9;
        double v = moments::joint_mean_intensity(J, 0.0, 1.7, 2.2);
        CHECK(v == doctest::Approx(1.7 * 2.2));
        // against the ODE oracle
        MomentOde ode{J};
        std::array<double, 14> y0{};
        y0[0] = 1.7;
        y0[1] = 2.2;
        y0[2] = 1.7 * 1.7;
        y0[3] = 2.2 * 2.2;
        y0[4] = 1.7 * 2.2;
        auto y = ode.integrate(y0, 1.5, 4000);
        CHECK(moments::joint_mean_intensity(J, 1.5, 1.7, 2.2) ==
              doctest::Approx(y[4]).epsilon(1e-9));
        // single line on the boundary: the stable form is the continuous
        // limit; check it against the oracle too
        JointInputs Jmixed = J;
        Jmixed.l2.delta = 2.5;
        MomentOde ode_mixed{Jmixed};
        y0[4] = 1.7 * 2.2;
        auto ym = ode_mixed.integrate(y0, 1.5, 4000);
        CHECK(moments::joint_mean_intensity(Jmixed, 1.5, 1.7, 2.2) ==
              doctest::Approx(ym[4]).epsilon(1e-9));
    }
}

TEST_CASE("stationary operations refuse nonstationary inputs") {
    LineInputs L;
    L.delta = 1.0;
    L.mu1_self = 1.5;  // kappa < 0
    L.mu1_sev = 1.0;
    CHECK_THROWS_AS(moments::mean_intensity_stationary(L), DomainError);
    CHECK_THROWS_AS(moments::mean_loss_stationary(L, 1.0), DomainError);
    CHECK_THROWS_AS(moments::var_loss(L, 1.0), DomainError);
    JointInputs J;
    J.l1 = L;
    CHECK_THROWS_AS(moments::cross_intensity_loss(J, Pairing::Lam1L1, 1.0), DomainError);
}

TEST_CASE("independent lines decouple when rho is zero") {
    BcdcpModel m = lopsided_model();
    m.shocks.rho = 0.0;
    JointInputs J = joint_inputs(m);
    double t = 1.4;
    double q = moments::joint_mean_intensity_stationary(J);
    CHECK(q == doctest::Approx(moments::mean_intensity_stationary(J.l1) *
                               moments::mean_intensity_stationary(J.l2))
                   .epsilon(1e-12));
    CHECK(moments::cov_losses(J, t) == doctest::Approx(0.0).scale(1.0));
    CHECK(moments::cross_intensity_loss(J, Pairing::Lam1L2, t) ==
          doctest::Approx(moments::mean_intensity_stationary(J.l1) *
                          moments::mean_loss_stationary(J.l2, t))
              .epsilon(1e-12));
}

TEST_CASE("report invariants") {
    BcdcpModel m = example_52(0.5);
    moments::MomentReport r = moments::report(m, 1.0, moments::ReportMode::Stationary);
    CHECK(r.var_l1 >= 0.0);
    CHECK(r.var_l2 >= 0.0);
    CHECK(std::abs(r.corr) <= 1.0);
    CHECK(r.cov == doctest::Approx(r.mean_l1l2 - r.mean_l1 * r.mean_l2).epsilon(1e-10));
    CHECK(r.mu12_method == "closed-form");
    CHECK(r.second_lambda1 - r.mean_lambda1 * r.mean_lambda1 >= 0.0);

    moments::MomentReport rc = moments::report(m, 0.0, moments::ReportMode::Conditional);
    CHECK(rc.mean_lambda1 == doctest::Approx(m.line1.lambda0));
    CHECK(rc.mean_lambda12 == doctest::Approx(m.line1.lambda0 * m.line2->lambda0));
    CHECK(rc.mean_l1 == doctest::Approx(0.0));
}
