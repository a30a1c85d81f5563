#include "bcdcp/laws.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "bcdcp/errors.hpp"
#include "bcdcp/numerics.hpp"

namespace bcdcp {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool cond, const char* msg) {
    if (!cond) throw DomainError(msg);
}

}  // namespace

void check_valid(const Law& law) {
    std::visit(overloaded{
                   [](const ExponentialLaw& l) { require(l.rate > 0, "exponential law requires rate > 0"); },
                   [](const LoggammaLaw& l) {
                       require(l.scale > 0 && l.rate > 0 && l.shape > 0,
                               "loggamma law requires scale, rate, shape > 0");
                   },
                   [](const FrechetLaw& l) {
                       require(l.scale > 0 && l.shape > 0, "frechet law requires scale, shape > 0");
                   },
                   [](const ParetoLaw& l) {
                       require(l.tail > 0 && l.scale > 0 && l.shape > 0,
                               "pareto law requires tail, scale, shape > 0");
                   },
                   [](const ZeroLaw&) {},
               },
               law);
}

double mean(const Law& law) {
    return std::visit(
        overloaded{
            [](const ExponentialLaw& l) { return 1.0 / l.rate; },
            [](const LoggammaLaw& l) {
                require(l.rate > 1, "loggamma mean requires rate > 1");
                return l.scale * (std::pow(l.rate / (l.rate - 1.0), l.shape) - 1.0);
            },
            [](const FrechetLaw& l) {
                require(l.shape > 1, "frechet mean requires shape > 1");
                return l.scale * std::tgamma(1.0 - 1.0 / l.shape);
            },
            [](const ParetoLaw& l) {
                require(l.tail > 1, "pareto mean requires tail > 1");
                return l.scale * l.shape / (l.tail - 1.0);
            },
            [](const ZeroLaw&) { return 0.0; },
        },
        law);
}

double second_moment(const Law& law) {
    return std::visit(
        overloaded{
            [](const ExponentialLaw& l) { return 2.0 / (l.rate * l.rate); },
            [](const LoggammaLaw& l) {
                require(l.rate > 2, "loggamma second moment requires rate > 2");
                double r = l.rate;
                return l.scale * l.scale *
                       (std::pow(r / (r - 2.0), l.shape) - 2.0 * std::pow(r / (r - 1.0), l.shape) + 1.0);
            },
            [](const FrechetLaw& l) {
                require(l.shape > 2, "frechet second moment requires shape > 2");
                return l.scale * l.scale * std::tgamma(1.0 - 2.0 / l.shape);
            },
            [](const ParetoLaw& l) {
                require(l.tail > 2, "pareto second moment requires tail > 2");
                return l.scale * l.scale * l.shape * (l.shape + 1.0) /
                       ((l.tail - 1.0) * (l.tail - 2.0));
            },
            [](const ZeroLaw&) { return 0.0; },
        },
        law);
}

double pdf(const Law& law, double x) {
    if (x < 0) return 0.0;
    return std::visit(
        overloaded{
            [&](const ExponentialLaw& l) { return l.rate * std::exp(-l.rate * x); },
            [&](const LoggammaLaw& l) {
                if (x <= 0) return 0.0;
                double w = std::log1p(x / l.scale);
                return std::pow(l.rate, l.shape) / (l.scale * std::tgamma(l.shape)) *
                       std::pow(w, l.shape - 1.0) * std::exp(-(l.rate + 1.0) * w);
            },
            [&](const FrechetLaw& l) {
                if (x <= 0) return 0.0;
                double z = x / l.scale;
                double zp = std::pow(z, -l.shape);
                return l.shape / l.scale * zp / z * std::exp(-zp);
            },
            [&](const ParetoLaw& l) {
                if (x <= 0) return l.shape > 1 ? 0.0 : (l.shape == 1 ? l.tail / l.scale : HUGE_VAL);
                double lb = std::lgamma(l.shape + l.tail) - std::lgamma(l.shape) - std::lgamma(l.tail);
                return std::exp(lb + l.tail * std::log(l.scale) + (l.shape - 1.0) * std::log(x) -
                                (l.tail + l.shape) * std::log(l.scale + x));
            },
            [&](const ZeroLaw&) { return 0.0; },
        },
        law);
}

double cdf(const Law& law, double x) {
    if (x < 0) return 0.0;
    return std::visit(
        overloaded{
            [&](const ExponentialLaw& l) { return -std::expm1(-l.rate * x); },
            [&](const LoggammaLaw& l) {
                return boost::math::gamma_p(l.shape, l.rate * std::log1p(x / l.scale));
            },
            [&](const FrechetLaw& l) {
                if (x <= 0) return 0.0;
                return std::exp(-std::pow(x / l.scale, -l.shape));
            },
            [&](const ParetoLaw& l) {
                return boost::math::ibeta(l.shape, l.tail, x / (x + l.scale));
            },
            [&](const ZeroLaw&) { return 1.0; },
        },
        law);
}

double quantile(const Law& law, double u) {
    require(u > 0.0 && u < 1.0, "quantile requires u in (0,1)");
    return std::visit(
        overloaded{
            [&](const ExponentialLaw& l) { return -std::log1p(-u) / l.rate; },
            [&](const LoggammaLaw& l) {
                double w = boost::math::gamma_p_inv(l.shape, u) / l.rate;
                return l.scale * std::expm1(w);
            },
            [&](const FrechetLaw& l) { return l.scale * std::pow(-std::log(u), -1.0 / l.shape); },
            [&](const ParetoLaw& l) {
                double y = boost::math::ibeta_inv(l.shape, l.tail, u);
                return l.scale * y / (1.0 - y);
            },
            [&](const ZeroLaw&) { return 0.0; },
        },
        law);
}

double laplace_transform(const Law& law, double eps, double abs_tol) {
    require(eps >= 0.0, "laplace transform requires eps >= 0");
    if (std::holds_alternative<ExponentialLaw>(law)) {
        double r = std::get<ExponentialLaw>(law).rate;
        return r / (r + eps);
    }
    if (std::holds_alternative<ZeroLaw>(law)) return 1.0;
    if (eps == 0.0) return 1.0;
    auto f = [&](double x) { return std::exp(-eps * x) * pdf(law, x); };
    return num::integrate_half_line_or_throw(f, abs_tol, "law laplace transform");
}

double sample_std_normal(Rng& rng) {
    // Box-Muller, cosine branch only; fully deterministic per stream.
    double u1 = rng.u01();
    double u2 = rng.u01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

double sample_gamma(double shape, Rng& rng) {
    if (shape < 1.0) {
        double u = rng.u01();
        return sample_gamma(shape + 1.0, rng) * std::pow(u, 1.0 / shape);
    }
    double d = shape - 1.0 / 3.0;
    double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = sample_std_normal(rng);
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        double u = rng.u01();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

double sample(const Law& law, Rng& rng) {
    return std::visit(
        overloaded{
            [&](const ExponentialLaw& l) { return -std::log(rng.u01()) / l.rate; },
            [&](const LoggammaLaw& l) {
                double w = sample_gamma(l.shape, rng) / l.rate;
                return l.scale * std::expm1(w);
            },
            [&](const FrechetLaw& l) {
                return l.scale * std::pow(-std::log(rng.u01()), -1.0 / l.shape);
            },
            [&](const ParetoLaw& l) {
                double g1 = sample_gamma(l.shape, rng);
                double g2 = sample_gamma(l.tail, rng);
                return l.scale * g1 / g2;
            },
            [&](const ZeroLaw&) { return 0.0; },
        },
        law);
}

std::string describe(const Law& law) {
    return std::visit(
        overloaded{
            [](const ExponentialLaw& l) { return "exponential(rate=" + std::to_string(l.rate) + ")"; },
            [](const LoggammaLaw& l) {
                return "loggamma(scale=" + std::to_string(l.scale) + ",rate=" + std::to_string(l.rate) +
                       ",shape=" + std::to_string(l.shape) + ")";
            },
            [](const FrechetLaw& l) {
                return "frechet(scale=" + std::to_string(l.scale) + ",shape=" + std::to_string(l.shape) + ")";
            },
            [](const ParetoLaw& l) {
                return "pareto(tail=" + std::to_string(l.tail) + ",scale=" + std::to_string(l.scale) +
                       ",shape=" + std::to_string(l.shape) + ")";
            },
            [](const ZeroLaw&) { return std::string("zero"); },
        },
        law);
}

CompiledSampler::CompiledSampler(const Law& law) {
    std::visit(overloaded{
                   [&](const ExponentialLaw& l) {
                       kind_ = Kind::Exponential;
                       p0_ = 1.0 / l.rate;
                   },
                   [&](const LoggammaLaw& l) {
                       double r = std::round(l.shape);
                       if (std::abs(l.shape - r) < 1e-12 && r >= 1 && r <= 4) {
                           kind_ = Kind::LoggammaIntShape;
                           ishape_ = static_cast<int>(r);
                       } else {
                           kind_ = Kind::Loggamma;
                           p2_ = l.shape;
                       }
                       p0_ = l.scale;
                       p1_ = -1.0 / l.rate;
                   },
                   [&](const FrechetLaw& l) {
                       kind_ = Kind::Frechet;
                       p0_ = l.scale;
                       p1_ = -1.0 / l.shape;
                   },
                   [&](const ParetoLaw& l) {
                       kind_ = Kind::Pareto;
                       p0_ = l.scale;
                       p1_ = l.shape;
                       p2_ = l.tail;
                   },
                   [&](const ZeroLaw&) { kind_ = Kind::Zero; },
               },
               law);
}

double CompiledSampler::operator()(Rng& rng) const {
    switch (kind_) {
        case Kind::Zero:
            return 0.0;
        case Kind::Exponential:
            return -std::log(rng.u01()) * p0_;
        case Kind::LoggammaIntShape: {
            // W = Gamma(n)/rate as -log of a product of uniforms, so
            // e^W - 1 = prod^(p1_) - 1 with a single pow.
            double prod = rng.u01();
            for (int i = 1; i < ishape_; ++i) prod *= rng.u01();
            return p0_ * (std::exp(std::log(prod) * p1_) - 1.0);
        }
        case Kind::Loggamma:
            return p0_ * std::expm1(-sample_gamma(p2_, rng) * p1_);
        case Kind::Frechet:
            return p0_ * std::exp(std::log(-std::log(rng.u01())) * p1_);
        case Kind::Pareto: {
            double g1 = sample_gamma(p1_, rng);
            double g2 = sample_gamma(p2_, rng);
            return p0_ * g1 / g2;
        }
    }
    return 0.0;
}

}  // namespace bcdcp
