#pragma once

#include <string>
#include <variant>

#include "bcdcp/rng.hpp"

namespace bcdcp {

// Jump-size / severity laws. All laws are immutable value types; sampling
// takes the caller's Rng, so concurrent use is safe.

struct ExponentialLaw {
    double rate;  // mean = 1/rate
};

// Density  rate^shape / (scale Gamma(shape)) * ln(y/scale+1)^(shape-1) * (y/scale+1)^(-rate-1).
// Equivalently Y = scale*(e^W - 1) with W ~ Gamma(shape, rate). Moments of
// order k exist iff rate > k.
struct LoggammaLaw {
    double scale;
    double rate;
    double shape;
};

// Density  (shape/scale) (z/scale)^(-shape-1) exp(-(z/scale)^(-shape)).
// Mean finite iff shape > 1, second moment iff shape > 2.
struct FrechetLaw {
    double scale;
    double shape;
};

// Beta-prime form: density  B(shape,tail)^-1 * scale^tail * x^(shape-1) / (scale+x)^(tail+shape),
// i.e. X = scale * BetaPrime(shape, tail). Mean = scale*shape/(tail-1) for
// tail > 1; second moment = scale^2 shape(shape+1)/((tail-1)(tail-2)) for tail > 2.
struct ParetoLaw {
    double tail;
    double scale;
    double shape;
};

// Point mass at zero. Used to switch off the intensity feedback of self-excited
// jumps (the shot-noise benchmark keeps the events but zeroes their marks).
struct ZeroLaw {};

using Law = std::variant<ExponentialLaw, LoggammaLaw, FrechetLaw, ParetoLaw, ZeroLaw>;

// Throws DomainError when the law parameters are invalid.
void check_valid(const Law& law);

// First/second moments; DomainError when the moment does not exist.
double mean(const Law& law);
double second_moment(const Law& law);

// E[e^{-eps X}], eps >= 0. Exact for Exponential/Zero; adaptive Gauss-Kronrod
// quadrature otherwise (NumericError carries the achieved estimate on failure).
double laplace_transform(const Law& law, double eps, double abs_tol = 1e-10);

double pdf(const Law& law, double x);
double cdf(const Law& law, double x);
double quantile(const Law& law, double u);  // u in (0,1)

double sample(const Law& law, Rng& rng);

std::string describe(const Law& law);

// Gamma(shape, rate=1) via Marsaglia-Tsang; building block for the Loggamma
// and Pareto samplers, exposed for tests.
double sample_gamma(double shape, Rng& rng);
double sample_std_normal(Rng& rng);

// Flattened sampler for the simulation hot loop: one branch on a stable enum
// per draw instead of a variant visit.
class CompiledSampler {
public:
    CompiledSampler() : kind_(Kind::Zero) {}
    explicit CompiledSampler(const Law& law);
    double operator()(Rng& rng) const;

private:
    enum class Kind { Zero, Exponential, LoggammaIntShape, Loggamma, Frechet, Pareto };
    Kind kind_;
    double p0_ = 0, p1_ = 0, p2_ = 0;
    int ishape_ = 0;
};

}  // namespace bcdcp
