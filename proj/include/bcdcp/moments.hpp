#pragma once

#include <optional>
#include <string>

#include "bcdcp/model.hpp"

namespace bcdcp::moments {

// Per-line moment inputs. All law moments flow through the distributions
// layer once, here, so a copula/law change has a single seam.
struct LineInputs {
    double a = 0.0;
    double delta = 0.0;
    double lambda0 = 0.0;
    double mu1_self = 0.0, mu2_self = 0.0;  // G (line 1) / H (line 2)
    double mu1_sev = 0.0, mu2_sev = 0.0;    // J / K
    double mu1_ext = 0.0, mu2_ext = 0.0;    // external mark marginal
    double rho = 0.0;
    double kappa() const { return delta - mu1_self; }
    double inflow() const { return a * delta + rho * mu1_ext; }  // a*delta + rho*mu1_F
};

LineInputs line_inputs(const BcdcpModel& model, int d);

struct JointInputs {
    LineInputs l1, l2;
    double mu12 = 0.0;  // E[X1 X2] of the joint external mark
    double rho = 0.0;
};

// Conditional expectation of the intensity at t given lambda0; the
// kappa == 0 boundary uses the linear-growth form.
double mean_intensity(const LineInputs& L, double t, double lambda0);
double mean_intensity_stationary(const LineInputs& L);

double joint_mean_intensity(const JointInputs& J, double t, double lambda01, double lambda02);
double joint_mean_intensity_stationary(const JointInputs& J);

double second_moment_intensity(const LineInputs& L, double t, double lambda0);
double second_moment_intensity_stationary(const LineInputs& L);

// Conditional expectation of the aggregate loss over [0, t], L0 = 0.
double mean_loss(const LineInputs& L, double t, double lambda0);
double mean_loss_stationary(const LineInputs& L, double t);

enum class Pairing { Lam1L1, Lam2L2, Lam1L2, Lam2L1 };
// Stationary-regime only; DomainError otherwise.
double cross_intensity_loss(const JointInputs& J, Pairing p, double t);

double joint_mean_losses(const JointInputs& J, double t);
double cov_losses(const JointInputs& J, double t);
double corr_losses(const JointInputs& J, double t);

double second_moment_loss(const LineInputs& L, double t);
double var_loss(const LineInputs& L, double t);

enum class ReportMode { Stationary, Conditional };

struct MomentReport {
    double t = 0.0;
    ReportMode mode = ReportMode::Stationary;
    double mean_lambda1 = 0, mean_lambda2 = 0;
    double second_lambda1 = 0, second_lambda2 = 0;
    double mean_lambda12 = 0;
    double mean_l1 = 0, mean_l2 = 0;
    double lam1_l1 = 0, lam2_l2 = 0, lam1_l2 = 0, lam2_l1 = 0;  // stationary only
    double mean_l1l2 = 0;
    double second_l1 = 0, second_l2 = 0;
    double var_l1 = 0, var_l2 = 0;
    double cov = 0, corr = 0;
    std::string mu12_method;
    bool has_joint = false;    // bivariate quantities present
    bool has_station = false;  // stationary-only quantities present
};

// Assembles every quantity the configuration supports. Conditional mode uses
// the model's lambda0 values; stationary mode requires stationarity.
MomentReport report(const BcdcpModel& model, double t, ReportMode mode,
                    const CrossMomentOptions& xopt = {}, bool mc_cross = false,
                    std::int64_t mc_samples = 2'000'000, std::uint64_t mc_seed = 20210901);

}  // namespace bcdcp::moments
