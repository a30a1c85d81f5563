#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "bcdcp/laws.hpp"
#include "bcdcp/rng.hpp"

namespace bcdcp {

enum class CopulaFamily { Fgm, Gaussian, StudentT, Gumbel };

struct CopulaSpec {
    CopulaFamily family = CopulaFamily::Fgm;
    double theta = 0.0;
    double dof = 5.0;  // StudentT only
};

void check_valid(const CopulaSpec& c);
std::string family_name(CopulaFamily f);
CopulaFamily family_from_name(const std::string& name);

// Copula density c(u, v). DomainError for the degenerate Gaussian/StudentT
// limits |theta| = 1 (no density exists there).
double copula_density(const CopulaSpec& c, double u, double v);

// Conditional quantile v = C^{-1}_{2|1}(w | u): the inverse Rosenblatt
// transform. Closed form for FGM/Gaussian/StudentT; safeguarded Newton in
// log space for Gumbel.
double conditional_quantile(const CopulaSpec& c, double u, double w);

// Draw (U1, U2) ~ C. FGM by conditional inversion, Gaussian/StudentT via the
// correlated-normal (t) construction, Gumbel via the positive-stable mixture.
std::pair<double, double> sample_uniform_pair(const CopulaSpec& c, Rng& rng);

// Draw the joint external shock (X1, X2): copula pair then marginal quantiles.
std::pair<double, double> sample_joint_shock(const CopulaSpec& c, const Law& marg1,
                                             const Law& marg2, Rng& rng);

enum class CrossMomentMethod { ClosedForm, Quadrature, MonteCarlo };

struct CrossMomentResult {
    double value = 0.0;
    double error_estimate = 0.0;
    CrossMomentMethod method = CrossMomentMethod::Quadrature;
};

struct CrossMomentOptions {
    // Requested tensor-rule size per axis; the rule escalates through graded
    // refinement levels until two consecutive levels agree to rel_tol.
    int nodes_per_axis = 408;
    double rel_tol = 1e-5;
};

// E[X1 X2] under the copula-coupled marginals. FGM with exponential marginals
// is closed form (product of means times (1 + theta/4) scaling); everything
// else is deterministic tensor Gauss-Legendre quadrature over (0,1)^2 in
// Rosenblatt coordinates with endpoint-graded panels. NumericError if the
// refinement levels do not converge.
CrossMomentResult cross_moment(const CopulaSpec& c, const Law& marg1, const Law& marg2,
                               const CrossMomentOptions& opt = {});

// Fixed-seed Monte Carlo estimator of the same quantity (secondary
// validation path). error_estimate is the standard error.
CrossMomentResult cross_moment_mc(const CopulaSpec& c, const Law& marg1, const Law& marg2,
                                  std::int64_t samples, std::uint64_t seed);

}  // namespace bcdcp
