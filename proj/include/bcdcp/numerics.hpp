#pragma once

#include <cmath>
#include <functional>
#include <vector>

namespace bcdcp::num {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;   // absolute error estimate
    bool converged = false;
};

// Adaptive Gauss-Kronrod 15(7) on [a, b]. Bisects until the summed error
// estimate is below abs_tol or max_depth levels are exhausted.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol = 1e-10, int max_depth = 60);

// Integral over (0, inf) via the substitution x = s/(1-s).
QuadResult integrate_half_line(const std::function<double(double)>& f,
                               double abs_tol = 1e-10, int max_depth = 60);

// Throwing wrappers: NumericError on non-convergence.
double integrate_or_throw(const std::function<double(double)>& f, double a, double b,
                          double abs_tol = 1e-10, const char* what = "quadrature");
double integrate_half_line_or_throw(const std::function<double(double)>& f,
                                    double abs_tol = 1e-10, const char* what = "quadrature");

// Gauss-Legendre nodes and weights on [-1, 1] (Newton on the Legendre
// polynomial; cached per n).
struct GlRule {
    std::vector<double> x;
    std::vector<double> w;
};
const GlRule& gauss_legendre(int n);

// A composite rule on [0,1]: panels geometrically graded toward both
// endpoints (widths 2^-geo_levels ... 1/4) with mid_panels uniform panels on
// [1/4, 3/4], each carrying an n-point Gauss-Legendre rule. Handles the
// log-type endpoint singularities of quantile integrands.
struct PanelRule {
    std::vector<double> x;
    std::vector<double> w;
};
PanelRule graded_unit_rule(int nodes_per_panel, int geo_levels, int mid_panels);

// Bracketed root finding (Brent). Requires f(a) and f(b) of opposite sign
// (zero endpoint values are accepted as roots).
double brent(const std::function<double(double)>& f, double a, double b,
             double tol = 1e-12, int max_iter = 200);

// Chebyshev interpolant of f on [a, b] with n nodes, evaluated by Clenshaw
// recurrence. Geometric accuracy for analytic f.
class Chebyshev {
public:
    Chebyshev() = default;
    Chebyshev(const std::function<double(double)>& f, double a, double b, int n);
    double operator()(double x) const;
    double a() const { return a_; }
    double b() const { return b_; }

private:
    double a_ = 0.0, b_ = 1.0;
    std::vector<double> coef_;
};

// Neumaier compensated accumulator for order-robust reductions.
class CompensatedSum {
public:
    void add(double x) {
        double t = s_ + x;
        if (std::abs(s_) >= std::abs(x))
            c_ += (s_ - t) + x;
        else
            c_ += (x - t) + s_;
        s_ = t;
    }
    double value() const { return s_ + c_; }

private:
    double s_ = 0.0, c_ = 0.0;
};

}  // namespace bcdcp::num
