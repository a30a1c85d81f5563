#pragma once

#include <memory>
#include <vector>

#include "bcdcp/model.hpp"
#include "bcdcp/numerics.hpp"

namespace bcdcp::transforms {

// Arguments of the joint transform: counts raised to theta/eta, losses and
// intensities under Laplace arguments nu/zeta and upsilon/gamma.
struct TransformQuery {
    double theta = 1.0;
    double eta = 1.0;
    double nu = 0.0;
    double zeta = 0.0;
    double upsilon = 0.0;
    double gamma = 0.0;
    double T = 1.0;
    double lambda01 = 0.0;
    double lambda02 = 0.0;
};

// One line's B(t) on [0, T], solved in reversed time Psi(tau) = B(T - tau).
struct BSolution {
    int line = 1;
    double boundary = 0.0;    // B(T)
    double multiplier = 0.0;  // theta * jhat(nu) (line 1) or eta * khat(zeta) (line 2)
    double T = 0.0;
    std::vector<double> psi;  // Psi on the uniform tau-grid 0..T, psi.size() = steps+1
    double b0 = 0.0;          // B(0) = Psi(T)
    double achieved_error = 0.0;

    double b_at(double t) const;  // linear interpolation on the stored grid
};

struct Options {
    double ode_tol = 1e-10;   // Richardson target on the transform exponent
    int initial_steps = 256;  // RK4 steps before refinement
    int max_doublings = 8;
    int fhat_nodes_per_axis = 72;  // tensor rule size for non-FGM copulas
    double lt_tol = 1e-13;         // law Laplace-transform accuracy
};

struct TransformValue {
    double value = 0.0;
    double error_estimate = 0.0;
    double b10 = 0.0, b20 = 0.0;  // B1(0), B2(0)
    double c = 0.0;               // accumulated C(T)
};

// Caches the law Laplace-transform proxies and the joint-shock transform rule
// for one model; all evaluation entry points hang off it. Immutable after
// construction, safe to share across threads.
class Evaluator {
public:
    explicit Evaluator(const BcdcpModel& model, Options opt = {});
    ~Evaluator();

    Evaluator(const Evaluator&) = delete;
    Evaluator& operator=(const Evaluator&) = delete;

    // Laplace transform of the line's self-jump law (Chebyshev proxy).
    double self_lt(int line, double psi) const;
    // Joint shock transform E[e^{-eps X1 - kap X2}].
    double fhat(double eps, double kap) const;

    // Backward ODE for one line; steps = 0 picks the option default with
    // Richardson refinement against ode_tol.
    BSolution solve_b(int line, double boundary, double multiplier, double T,
                      int steps = 0) const;

    // The positive root of 1 - delta u - multiplier * Lhat(u) = 0 (0 when
    // multiplier = 1); brackets [0, 1/delta], tolerance 1e-12.
    double singular_point(int line, double multiplier) const;

    // Psi(tau) recovered by inverting the monotone integral representation
    // (bracketed root finding); the cross-check of the ODE path.
    double psi_by_inversion(int line, double boundary, double multiplier, double tau,
                            double tol = 1e-12) const;

    // C(T) from two B solutions on matching grids by composite Simpson.
    double c_term(const BSolution& b1, const BSolution& b2, double tol = 1e-9) const;

    // Conditional joint transform given lambda0: the full query.
    TransformValue evaluate(const TransformQuery& q) const;

    // Joint Laplace transform of the asymptotic (stationary) intensity pair.
    TransformValue evaluate_asymptotic_intensity(double upsilon, double gamma) const;

    // Laplace transform of the loss pair over [0, T] with the intensities
    // started from the stationary law.
    TransformValue evaluate_stationary_loss(double nu, double zeta, double T) const;

    const BcdcpModel& model() const { return model_; }
    const Options& options() const { return opt_; }

    struct Impl;  // internal caches; opaque outside the implementation file

private:
    BcdcpModel model_;
    Options opt_;
    std::unique_ptr<Impl> impl_;
};

}  // namespace bcdcp::transforms
