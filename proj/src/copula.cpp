#include "bcdcp/copula.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <algorithm>
#include <cmath>

#include "bcdcp/errors.hpp"
#include "bcdcp/numerics.hpp"

namespace bcdcp {

namespace {

const boost::math::normal_distribution<double> kStdNormal(0.0, 1.0);

double norm_ppf(double u) { return boost::math::quantile(kStdNormal, u); }
double norm_cdf(double x) { return boost::math::cdf(kStdNormal, x); }

double t_ppf(double u, double dof) {
    return boost::math::quantile(boost::math::students_t_distribution<double>(dof), u);
}
double t_cdf(double x, double dof) {
    return boost::math::cdf(boost::math::students_t_distribution<double>(dof), x);
}

constexpr double kUMin = 1e-300;
constexpr double kUMax = 1.0 - 1e-16;

double clamp_u(double u) { return std::clamp(u, kUMin, kUMax); }

// log(x^th + y^th)/th computed in log space
double gumbel_log_a(double lx, double ly, double th) {
    double hi = std::max(lx, ly), lo = std::min(lx, ly);
    return hi + std::log1p(std::exp(th * (lo - hi))) / th;
}

double gumbel_cond_quantile(double u, double w, double th) {
    double x = -std::log(u);
    double lx = std::log(x);
    double lw = std::log(w);
    // ln h(v|u) as a function of ly = ln(-ln v); strictly decreasing.
    auto log_h = [&](double ly) {
        double la = gumbel_log_a(lx, ly, th);
        return (x - std::exp(la)) + (th - 1.0) * (lx - la);
    };
    // Small-y asymptotic ln h ~ -((x+th-1)/th) (y/x)^th seeds the bracket;
    // the exact root is hunted by expansion, log-space bisection and a short
    // Newton polish.
    double seed = lx + (std::log(-lw * th / (x + th - 1.0))) / th;
    double large = std::log(x - lw + th);
    double lo = std::min(seed, large) - 2.0;  // ln y lower end (h too big)
    double hi = std::max(seed, large) + 2.0;
    for (int i = 0; i < 200 && log_h(lo) < lw; ++i) lo -= 3.0;
    for (int i = 0; i < 200 && log_h(hi) > lw; ++i) hi += 3.0;
    for (int i = 0; i < 30; ++i) {
        double mid = 0.5 * (lo + hi);
        (log_h(mid) > lw ? lo : hi) = mid;
    }
    double ly = 0.5 * (lo + hi);
    for (int i = 0; i < 8; ++i) {
        double la = gumbel_log_a(lx, ly, th);
        double A = std::exp(la);
        double g = (x - A) + (th - 1.0) * (lx - la) - lw;
        double dgdly = -std::exp(th * ly - (th - 1.0) * la) * (1.0 + (th - 1.0) / A);
        double step = g / dgdly;
        double lnew = ly - step;
        if (!(lnew > lo && lnew < hi)) lnew = 0.5 * (lo + hi);
        (g > 0 ? lo : hi) = ly;
        if (std::abs(lnew - ly) < 1e-15 * std::max(1.0, std::abs(ly))) {
            ly = lnew;
            break;
        }
        ly = lnew;
    }
    return std::exp(-std::exp(ly));
}

double require_theta(const CopulaSpec& c) {
    check_valid(c);
    return c.theta;
}

}  // namespace

void check_valid(const CopulaSpec& c) {
    switch (c.family) {
        case CopulaFamily::Fgm:
        case CopulaFamily::Gaussian:
        case CopulaFamily::StudentT:
            if (!(c.theta >= -1.0 && c.theta <= 1.0))
                throw DomainError(family_name(c.family) + " copula requires theta in [-1,1]");
            break;
        case CopulaFamily::Gumbel:
            if (!(c.theta >= 1.0)) throw DomainError("gumbel copula requires theta >= 1");
            break;
    }
    if (c.family == CopulaFamily::StudentT && !(c.dof > 0))
        throw DomainError("student t copula requires dof > 0");
}

std::string family_name(CopulaFamily f) {
    switch (f) {
        case CopulaFamily::Fgm: return "fgm";
        case CopulaFamily::Gaussian: return "gaussian";
        case CopulaFamily::StudentT: return "student_t";
        case CopulaFamily::Gumbel: return "gumbel";
    }
    return "?";
}

CopulaFamily family_from_name(const std::string& name) {
    if (name == "fgm") return CopulaFamily::Fgm;
    if (name == "gaussian") return CopulaFamily::Gaussian;
    if (name == "student_t" || name == "t") return CopulaFamily::StudentT;
    if (name == "gumbel") return CopulaFamily::Gumbel;
    throw ConfigError("unknown copula family '" + name + "'");
}

double copula_density(const CopulaSpec& c, double u, double v) {
    double th = require_theta(c);
    u = clamp_u(u);
    v = clamp_u(v);
    switch (c.family) {
        case CopulaFamily::Fgm:
            return 1.0 + th * (1.0 - 2.0 * u) * (1.0 - 2.0 * v);
        case CopulaFamily::Gaussian: {
            if (std::abs(th) >= 1.0)
                throw DomainError("gaussian copula density undefined at |theta| = 1");
            double x = norm_ppf(u), y = norm_ppf(v);
            double om = 1.0 - th * th;
            return std::exp(-(th * th * (x * x + y * y) - 2.0 * th * x * y) / (2.0 * om)) /
                   std::sqrt(om);
        }
        case CopulaFamily::StudentT: {
            if (std::abs(th) >= 1.0)
                throw DomainError("student t copula density undefined at |theta| = 1");
            double nu = c.dof;
            double x = t_ppf(u, nu), y = t_ppf(v, nu);
            double om = 1.0 - th * th;
            double lnum = std::lgamma((nu + 2.0) / 2.0) + std::lgamma(nu / 2.0) -
                          2.0 * std::lgamma((nu + 1.0) / 2.0);
            double core = -(nu + 2.0) / 2.0 *
                          std::log1p((x * x - 2.0 * th * x * y + y * y) / (nu * om));
            double den = -(nu + 1.0) / 2.0 *
                         (std::log1p(x * x / nu) + std::log1p(y * y / nu));
            return std::exp(lnum + core - den) / std::sqrt(om);
        }
        case CopulaFamily::Gumbel: {
            double x = -std::log(u), y = -std::log(v);
            double lx = std::log(x), ly = std::log(y);
            double la = gumbel_log_a(lx, ly, th);
            double A = std::exp(la);
            // c = C(u,v) (xy)^(th-1) / (uv) * A^(1-2th) * (A + th - 1)
            double lc = -A + (th - 1.0) * (lx + ly) + (x + y) + (1.0 - 2.0 * th) * la +
                        std::log(A + th - 1.0);
            return std::exp(lc);
        }
    }
    return 1.0;
}

double conditional_quantile(const CopulaSpec& c, double u, double w) {
    double th = require_theta(c);
    u = clamp_u(u);
    w = clamp_u(w);
    switch (c.family) {
        case CopulaFamily::Fgm: {
            // C_{2|1}(v|u) = v(1 + th(1-2u)(1-v)) = w
            double a = th * (1.0 - 2.0 * u);
            if (std::abs(a) < 1e-12) return w;
            double b = 1.0 + a;
            double disc = b * b - 4.0 * a * w;
            return (b - std::sqrt(std::max(disc, 0.0))) / (2.0 * a);
        }
        case CopulaFamily::Gaussian: {
            if (th >= 1.0) return u;
            if (th <= -1.0) return 1.0 - u;
            return norm_cdf(th * norm_ppf(u) + std::sqrt(1.0 - th * th) * norm_ppf(w));
        }
        case CopulaFamily::StudentT: {
            if (th >= 1.0) return u;
            if (th <= -1.0) return 1.0 - u;
            double nu = c.dof;
            double x = t_ppf(u, nu);
            double z = t_ppf(w, nu + 1.0);
            double y = th * x + z * std::sqrt((nu + x * x) * (1.0 - th * th) / (nu + 1.0));
            return t_cdf(y, nu);
        }
        case CopulaFamily::Gumbel: {
            if (th < 1.0 + 1e-12) return w;
            return gumbel_cond_quantile(u, w, th);
        }
    }
    return w;
}

std::pair<double, double> sample_uniform_pair(const CopulaSpec& c, Rng& rng) {
    double th = require_theta(c);
    switch (c.family) {
        case CopulaFamily::Fgm: {
            double u = rng.u01();
            return {u, conditional_quantile(c, u, rng.u01())};
        }
        case CopulaFamily::Gaussian: {
            if (th >= 1.0) {
                double u = rng.u01();
                return {u, u};
            }
            if (th <= -1.0) {
                double u = rng.u01();
                return {u, 1.0 - u};
            }
            double z1 = sample_std_normal(rng);
            double z2 = th * z1 + std::sqrt(1.0 - th * th) * sample_std_normal(rng);
            return {norm_cdf(z1), norm_cdf(z2)};
        }
        case CopulaFamily::StudentT: {
            if (std::abs(th) >= 1.0) {
                double u = rng.u01();
                return {u, th > 0 ? u : 1.0 - u};
            }
            double z1 = sample_std_normal(rng);
            double z2 = th * z1 + std::sqrt(1.0 - th * th) * sample_std_normal(rng);
            double s = std::sqrt(c.dof / (2.0 * sample_gamma(c.dof / 2.0, rng)));
            return {t_cdf(z1 * s, c.dof), t_cdf(z2 * s, c.dof)};
        }
        case CopulaFamily::Gumbel: {
            if (th < 1.0 + 1e-12) return {rng.u01(), rng.u01()};
            // Marshall-Olkin: U_i = exp(-(E_i/S)^(1/th)) with S positive
            // stable (index 1/th) from the Chambers-Mallows-Stuck form
            //   S = sin(aV) sin(V)^(-1/a) (sin((1-a)V)/W)^((1-a)/a).
            double alpha = 1.0 / th;
            double V = M_PI * rng.u01();
            double W = -std::log(rng.u01());
            double S = std::sin(alpha * V) * std::pow(std::sin(V), -1.0 / alpha) *
                       std::pow(std::sin((1.0 - alpha) * V) / W, (1.0 - alpha) / alpha);
            double e1 = -std::log(rng.u01());
            double e2 = -std::log(rng.u01());
            return {std::exp(-std::pow(e1 / S, alpha)), std::exp(-std::pow(e2 / S, alpha))};
        }
    }
    return {rng.u01(), rng.u01()};
}

std::pair<double, double> sample_joint_shock(const CopulaSpec& c, const Law& marg1,
                                             const Law& marg2, Rng& rng) {
    auto [u1, u2] = sample_uniform_pair(c, rng);
    return {quantile(marg1, clamp_u(u1)), quantile(marg2, clamp_u(u2))};
}

namespace {

struct RuleLevel {
    int nodes, geo, mid;
};
constexpr RuleLevel kLevels[] = {{10, 10, 6}, {12, 14, 8}, {16, 18, 10}, {20, 22, 12}};

double cross_moment_level(const CopulaSpec& c, const Law& m1, const Law& m2, int level) {
    const auto rule = num::graded_unit_rule(kLevels[level].nodes, kLevels[level].geo,
                                            kLevels[level].mid);
    const size_t n = rule.x.size();
    std::vector<double> q1(n);
    for (size_t i = 0; i < n; ++i) q1[i] = quantile(m1, rule.x[i]);
    num::CompensatedSum total;
    for (size_t i = 0; i < n; ++i) {
        num::CompensatedSum row;
        for (size_t j = 0; j < n; ++j) {
            double v = conditional_quantile(c, rule.x[i], rule.x[j]);
            row.add(rule.w[j] * quantile(m2, clamp_u(v)));
        }
        total.add(rule.w[i] * q1[i] * row.value());
    }
    return total.value();
}

double comonotone_moment(const Law& m1, const Law& m2, bool anti) {
    const auto rule = num::graded_unit_rule(16, 18, 10);
    num::CompensatedSum s;
    for (size_t i = 0; i < rule.x.size(); ++i) {
        double u = rule.x[i];
        s.add(rule.w[i] * quantile(m1, u) * quantile(m2, anti ? 1.0 - u : u));
    }
    return s.value();
}

}  // namespace

CrossMomentResult cross_moment(const CopulaSpec& c, const Law& m1, const Law& m2,
                               const CrossMomentOptions& opt) {
    check_valid(c);
    double mean1 = mean(m1), mean2 = mean(m2);
    if (c.family == CopulaFamily::Fgm) {
        // closed form: m1*m2 + theta*A1*A2 with A = int e^{-0x}(1-2F) dF; for
        // exponential marginals A = -1/(2 rate), giving (1+theta/4)*m1*m2.
        if (std::holds_alternative<ExponentialLaw>(m1) && std::holds_alternative<ExponentialLaw>(m2)) {
            return {mean1 * mean2 * (1.0 + c.theta / 4.0), 0.0, CrossMomentMethod::ClosedForm};
        }
        auto a_term = [](const Law& law) {
            return num::integrate_or_throw(
                [&](double u) { return quantile(law, u) * (1.0 - 2.0 * u); }, 0.0, 1.0, 1e-12,
                "fgm cross-moment marginal term");
        };
        return {mean1 * mean2 + c.theta * a_term(m1) * a_term(m2), 1e-10,
                CrossMomentMethod::ClosedForm};
    }
    if ((c.family == CopulaFamily::Gaussian || c.family == CopulaFamily::StudentT) &&
        std::abs(c.theta) >= 1.0) {
        return {comonotone_moment(m1, m2, c.theta < 0), 1e-9, CrossMomentMethod::Quadrature};
    }
    // Gaussian theta = 0 and Gumbel theta = 1 are the independence copula;
    // the Student t keeps tail dependence even at theta = 0.
    if ((c.family == CopulaFamily::Gaussian && c.theta == 0.0) ||
        (c.family == CopulaFamily::Gumbel && c.theta == 1.0)) {
        return {mean1 * mean2, 0.0, CrossMomentMethod::ClosedForm};
    }

    int start = 1;
    if (opt.nodes_per_axis <= 270) start = 0;
    else if (opt.nodes_per_axis <= 420) start = 1;
    else if (opt.nodes_per_axis <= 736) start = 2;
    else start = 3;
    if (start == 0) start = 1;  // always keep one coarser level for the error estimate

    double prev = cross_moment_level(c, m1, m2, start - 1);
    double cur = prev, err = 0.0;
    for (int lv = start; lv < 4; ++lv) {
        cur = cross_moment_level(c, m1, m2, lv);
        err = std::abs(cur - prev);
        if (err <= opt.rel_tol * std::abs(cur)) return {cur, err, CrossMomentMethod::Quadrature};
        prev = cur;
    }
    if (err <= 10.0 * opt.rel_tol * std::abs(cur))
        return {cur, err, CrossMomentMethod::Quadrature};
    throw NumericError("cross-moment quadrature did not converge", err);
}

CrossMomentResult cross_moment_mc(const CopulaSpec& c, const Law& m1, const Law& m2,
                                  std::int64_t samples, std::uint64_t seed) {
    check_valid(c);
    Rng rng = Rng::substream(seed, 0xC0117u);
    num::CompensatedSum s, s2;
    for (std::int64_t i = 0; i < samples; ++i) {
        auto [x1, x2] = sample_joint_shock(c, m1, m2, rng);
        double p = x1 * x2;
        s.add(p);
        s2.add(p * p);
    }
    double n = static_cast<double>(samples);
    double meanp = s.value() / n;
    double var = std::max(0.0, s2.value() / n - meanp * meanp);
    return {meanp, std::sqrt(var / n), CrossMomentMethod::MonteCarlo};
}

}  // namespace bcdcp
