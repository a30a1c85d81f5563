#include "bcdcp/moments.hpp"

#include <algorithm>
#include <cmath>

#include "bcdcp/errors.hpp"

namespace bcdcp::moments {

namespace {

// (1 - e^{-x t})/x, continuous at x = 0.
double em1(double x, double t) {
    if (x == 0.0) return t;
    return -std::expm1(-x * t) / x;
}

// (t - em1(x, t))/x = (xt - 1 + e^{-xt})/x^2, continuous at x = 0.
double tme(double x, double t) {
    double u = x * t;
    if (std::abs(u) > 1e-4) return (t - em1(x, t)) / x;
    // (u - 1 + e^{-u})/u^2 expanded around 0
    double series = 0.5 - u / 6.0 + u * u / 24.0 - u * u * u / 120.0 + u * u * u * u / 720.0;
    return t * t * series;
}

void require_stationary(const LineInputs& L, const char* what) {
    if (!(L.kappa() > 0.0))
        throw DomainError(std::string(what) +
                          ": requires delta > mean of self-jump law (stationary regime)");
}

}  // namespace

LineInputs line_inputs(const BcdcpModel& model, int d) {
    const LineParams& line = model.line(d);
    LineInputs L;
    L.a = line.a;
    L.delta = line.delta;
    L.lambda0 = line.lambda0;
    L.rho = model.shocks.rho;
    if (line.self_jump) {
        L.mu1_self = mean(*line.self_jump);
        L.mu2_self = second_moment(*line.self_jump);
    }
    if (line.severity) {
        L.mu1_sev = mean(*line.severity);
        L.mu2_sev = second_moment(*line.severity);
    }
    const Law& marg = (d == 1) ? model.shocks.marg1
                               : model.shocks.marg2 ? *model.shocks.marg2 : Law(ZeroLaw{});
    if (L.rho > 0) {
        L.mu1_ext = mean(marg);
        L.mu2_ext = second_moment(marg);
    }
    return L;
}

double mean_intensity(const LineInputs& L, double t, double lambda0) {
    // lambda0 e^{-kt} + S (1-e^{-kt})/k, written so the k -> 0 boundary is the
    // same expression (linear growth) and small k does not cancel.
    double k = L.kappa(), S = L.inflow();
    return lambda0 * std::exp(-k * t) + S * em1(k, t);
}

double mean_intensity_stationary(const LineInputs& L) {
    require_stationary(L, "stationary mean intensity");
    return L.inflow() / L.kappa();
}

double joint_mean_intensity(const JointInputs& J, double t, double l01, double l02) {
    // Cancellation-stable regrouping: the shock-inflow product collapses to
    // em1(k1,t) em1(k2,t), so one expression covers the general case and the
    // delta = mu1 boundaries (including a single line on the boundary).
    double k1 = J.l1.kappa(), k2 = J.l2.kappa();
    double S1 = J.l1.inflow(), S2 = J.l2.inflow();
    double e1 = std::exp(-k1 * t), e2 = std::exp(-k2 * t);
    double A = em1(k1, t), B = em1(k2, t);
    return l01 * l02 * e1 * e2 + S2 * l01 * e1 * B + S1 * l02 * e2 * A + S1 * S2 * A * B +
           J.mu12 * J.rho * em1(k1 + k2, t);
}

double joint_mean_intensity_stationary(const JointInputs& J) {
    require_stationary(J.l1, "stationary joint mean intensity (line 1)");
    require_stationary(J.l2, "stationary joint mean intensity (line 2)");
    double k1 = J.l1.kappa(), k2 = J.l2.kappa();
    double S1 = J.l1.inflow(), S2 = J.l2.inflow();
    return (S2 * (S1 / k1) + S1 * (S2 / k2) + J.mu12 * J.rho) / (k1 + k2);
}

double second_moment_intensity(const LineInputs& L, double t, double lambda0) {
    // Stable regrouping of the second-moment solution:
    //   lam0^2 e^{-2kt} + c2 lam0 e^{-kt} em1(k,t) + c2 S em1(k,t)^2/2
    //   + mu2_ext rho em1(2k,t),  c2 = 2S + mu2_self.
    // Reduces to the linear-growth boundary expression at k = 0.
    double k = L.kappa(), S = L.inflow();
    double c2 = 2.0 * S + L.mu2_self;
    double e1 = std::exp(-k * t);
    double A = em1(k, t);
    return lambda0 * lambda0 * e1 * e1 + c2 * lambda0 * e1 * A + 0.5 * c2 * S * A * A +
           L.mu2_ext * L.rho * em1(2.0 * k, t);
}

double second_moment_intensity_stationary(const LineInputs& L) {
    require_stationary(L, "stationary second moment of intensity");
    double k = L.kappa(), S = L.inflow();
    return (2.0 * S + L.mu2_self) * S / (2.0 * k * k) + L.mu2_ext * L.rho / (2.0 * k);
}

double mean_loss(const LineInputs& L, double t, double lambda0) {
    double k = L.kappa(), S = L.inflow();
    return L.mu1_sev * (lambda0 * em1(k, t) + S * tme(k, t));
}

double mean_loss_stationary(const LineInputs& L, double t) {
    require_stationary(L, "stationary mean loss");
    return L.mu1_sev * (L.inflow() / L.kappa()) * t;
}

double cross_intensity_loss(const JointInputs& J, Pairing p, double t) {
    require_stationary(J.l1, "cross intensity-loss moment (line 1)");
    if (p != Pairing::Lam1L1) require_stationary(J.l2, "cross intensity-loss moment (line 2)");
    double k1 = J.l1.kappa(), S1 = J.l1.inflow();
    double k2 = J.l2.kappa(), S2 = J.l2.inflow();
    switch (p) {
        case Pairing::Lam1L1: {
            double s1 = second_moment_intensity_stationary(J.l1);
            return S1 * J.l1.mu1_sev * (S1 / (k1 * k1)) * (t - em1(k1, t)) +
                   J.l1.mu1_sev * em1(k1, t) * s1 +
                   J.l1.mu1_self * J.l1.mu1_sev * em1(k1, t) * (S1 / k1);
        }
        case Pairing::Lam2L2: {
            double s2 = second_moment_intensity_stationary(J.l2);
            return S2 * J.l2.mu1_sev * (S2 / (k2 * k2)) * (t - em1(k2, t)) +
                   J.l2.mu1_sev * em1(k2, t) * s2 +
                   J.l2.mu1_self * J.l2.mu1_sev * em1(k2, t) * (S2 / k2);
        }
        case Pairing::Lam1L2: {
            double q = joint_mean_intensity_stationary(J);
            return J.l2.mu1_sev * S1 * (S2 / (k2 * k1)) * t +
                   J.l2.mu1_sev * em1(k1, t) * (q - S1 * S2 / (k1 * k2));
        }
        case Pairing::Lam2L1: {
            double q = joint_mean_intensity_stationary(J);
            return J.l1.mu1_sev * S2 * (S1 / (k2 * k1)) * t +
                   J.l1.mu1_sev * em1(k2, t) * (q - S1 * S2 / (k1 * k2));
        }
    }
    return 0.0;
}

double joint_mean_losses(const JointInputs& J, double t) {
    require_stationary(J.l1, "joint mean losses (line 1)");
    require_stationary(J.l2, "joint mean losses (line 2)");
    double k1 = J.l1.kappa(), S1 = J.l1.inflow();
    double k2 = J.l2.kappa(), S2 = J.l2.inflow();
    double m1 = S1 / k1, m2 = S2 / k2;
    double q = joint_mean_intensity_stationary(J);
    return J.l1.mu1_sev * J.l2.mu1_sev *
           (m1 * m2 * t * t +
            (q - m1 * m2) * ((t - em1(k1, t)) / k1 + (t - em1(k2, t)) / k2));
}

double cov_losses(const JointInputs& J, double t) {
    return joint_mean_losses(J, t) -
           mean_loss_stationary(J.l1, t) * mean_loss_stationary(J.l2, t);
}

double corr_losses(const JointInputs& J, double t) {
    double v1 = var_loss(J.l1, t), v2 = var_loss(J.l2, t);
    if (!(v1 > 0.0) || !(v2 > 0.0))
        throw DomainError("loss correlation: requires positive loss variances");
    double r = cov_losses(J, t) / std::sqrt(v1 * v2);
    if (std::abs(r) > 1.0 + 1e-9) throw DomainError("loss correlation outside [-1,1]");
    return std::clamp(r, -1.0, 1.0);
}

double second_moment_loss(const LineInputs& L, double t) {
    require_stationary(L, "second moment of loss");
    double k = L.kappa(), S = L.inflow();
    double m = S / k;
    double tt = t - em1(k, t);
    double s_stat = (2.0 * S + L.mu2_self) * S / (2.0 * k * k) + L.mu2_ext * L.rho / (2.0 * k);
    double bracket = 0.5 * S * L.mu1_sev * (S / (k * k)) * t * t -
                     S * L.mu1_sev * (S / (k * k * k)) * tt +
                     L.mu1_sev * (s_stat / k) * tt +
                     L.mu1_self * L.mu1_sev * (S / (k * k)) * tt;
    return 2.0 * L.mu1_sev * bracket + L.mu2_sev * m * t;
}

double var_loss(const LineInputs& L, double t) {
    require_stationary(L, "loss variance");
    double k = L.kappa(), S = L.inflow();
    double m = S / k;
    double tt = t - em1(k, t);
    double s_stat = (2.0 * S + L.mu2_self) * S / (2.0 * k * k) + L.mu2_ext * L.rho / (2.0 * k);
    double bracket = L.mu1_sev * (s_stat / k) * tt +
                     L.mu1_self * L.mu1_sev * (S / (k * k)) * tt -
                     S * L.mu1_sev * (S / (k * k * k)) * tt;
    double v = 2.0 * L.mu1_sev * bracket + L.mu2_sev * m * t;
    if (v < 0.0 && v > -1e-9) v = 0.0;
    return v;
}

MomentReport report(const BcdcpModel& model, double t, ReportMode mode,
                    const CrossMomentOptions& xopt, bool mc_cross, std::int64_t mc_samples,
                    std::uint64_t mc_seed) {
    MomentReport r;
    r.t = t;
    r.mode = mode;
    LineInputs L1 = line_inputs(model, 1);
    r.has_joint = model.bivariate();

    JointInputs J;
    if (r.has_joint) {
        J.l1 = L1;
        J.l2 = line_inputs(model, 2);
        J.rho = model.shocks.rho;
        if (J.rho > 0) {
            const CopulaSpec cop = model.shocks.copula.value_or(CopulaSpec{});
            CrossMomentResult xm =
                mc_cross ? cross_moment_mc(cop, model.shocks.marg1, *model.shocks.marg2,
                                           mc_samples, mc_seed)
                         : cross_moment(cop, model.shocks.marg1, *model.shocks.marg2, xopt);
            J.mu12 = xm.value;
            r.mu12_method = xm.method == CrossMomentMethod::ClosedForm ? "closed-form"
                            : xm.method == CrossMomentMethod::Quadrature ? "quadrature"
                                                                         : "mc";
        } else {
            r.mu12_method = "closed-form";  // no shocks, mu12 unused
        }
    }

    if (mode == ReportMode::Conditional) {
        r.mean_lambda1 = mean_intensity(L1, t, L1.lambda0);
        r.second_lambda1 = second_moment_intensity(L1, t, L1.lambda0);
        r.mean_l1 = mean_loss(L1, t, L1.lambda0);
        if (r.has_joint) {
            r.mean_lambda2 = mean_intensity(J.l2, t, J.l2.lambda0);
            r.second_lambda2 = second_moment_intensity(J.l2, t, J.l2.lambda0);
            r.mean_l2 = mean_loss(J.l2, t, J.l2.lambda0);
            r.mean_lambda12 = joint_mean_intensity(J, t, L1.lambda0, J.l2.lambda0);
        }
        return r;
    }

    r.has_station = true;
    r.mean_lambda1 = mean_intensity_stationary(L1);
    r.second_lambda1 = second_moment_intensity_stationary(L1);
    r.mean_l1 = mean_loss_stationary(L1, t);
    r.second_l1 = second_moment_loss(L1, t);
    r.var_l1 = var_loss(L1, t);
    if (r.has_joint) {
        r.mean_lambda2 = mean_intensity_stationary(J.l2);
        r.second_lambda2 = second_moment_intensity_stationary(J.l2);
        r.mean_l2 = mean_loss_stationary(J.l2, t);
        r.second_l2 = second_moment_loss(J.l2, t);
        r.var_l2 = var_loss(J.l2, t);
        r.mean_lambda12 = joint_mean_intensity_stationary(J);
        r.lam1_l1 = cross_intensity_loss(J, Pairing::Lam1L1, t);
        r.lam2_l2 = cross_intensity_loss(J, Pairing::Lam2L2, t);
        r.lam1_l2 = cross_intensity_loss(J, Pairing::Lam1L2, t);
        r.lam2_l1 = cross_intensity_loss(J, Pairing::Lam2L1, t);
        r.mean_l1l2 = joint_mean_losses(J, t);
        r.cov = cov_losses(J, t);
        r.corr = corr_losses(J, t);
    }
    return r;
}

}  // namespace bcdcp::moments
