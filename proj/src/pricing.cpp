#include "bcdcp/pricing.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "bcdcp/errors.hpp"

namespace bcdcp::pricing {

namespace {

using moments::LineInputs;

std::string copula_label(const BcdcpModel& model) {
    if (!model.shocks.copula) return "-";
    const CopulaSpec& c = *model.shocks.copula;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s(%g)", family_name(c.family).c_str(), c.theta);
    return buf;
}

// Shot-noise benchmark: the same model with the self-excited intensity marks
// replaced by point masses at zero (claims remain, feedback disappears).
BcdcpModel zero_self_marks(BcdcpModel model) {
    if (model.line1.self_jump) model.line1.self_jump = Law(ZeroLaw{});
    if (model.line2 && model.line2->self_jump) model.line2->self_jump = Law(ZeroLaw{});
    return model;
}

}  // namespace

PremiumQuote premium_univariate(const BcdcpModel& model, double t, double loading) {
    if (!(loading >= 0.0 && loading <= 1.0))
        throw DomainError("premium: loading must lie in [0, 1]");
    LineInputs L = moments::line_inputs(model, 1);
    PremiumQuote q;
    q.loading = loading;
    q.copula = "-";
    q.cross_moment_method = "closed-form";
    q.mean1 = moments::mean_loss_stationary(L, t);
    q.var1 = moments::var_loss(L, t);
    q.sum_mean = q.mean1;
    q.sum_var = q.var1;
    q.premium = q.sum_mean + loading * std::sqrt(q.sum_var);
    return q;
}

PremiumQuote premium_bivariate(const BcdcpModel& model, double t, double loading,
                               const PricingOptions& opt) {
    if (!model.bivariate()) throw DomainError("bivariate premium requires two lines");
    if (!(loading >= 0.0 && loading <= 1.0))
        throw DomainError("premium: loading must lie in [0, 1]");
    moments::JointInputs J;
    J.l1 = moments::line_inputs(model, 1);
    J.l2 = moments::line_inputs(model, 2);
    J.rho = model.shocks.rho;

    PremiumQuote q;
    q.loading = loading;
    q.copula = copula_label(model);
    if (J.rho > 0) {
        const CopulaSpec cop = model.shocks.copula.value_or(CopulaSpec{});
        CrossMomentResult xm =
            opt.mc_cross_moment
                ? cross_moment_mc(cop, model.shocks.marg1, *model.shocks.marg2, opt.mc_samples,
                                  opt.mc_seed)
                : cross_moment(cop, model.shocks.marg1, *model.shocks.marg2, opt.cross);
        J.mu12 = xm.value;
        q.cross_moment_method = xm.method == CrossMomentMethod::ClosedForm ? "closed-form"
                                : xm.method == CrossMomentMethod::Quadrature ? "quadrature"
                                                                             : "mc";
    } else {
        q.cross_moment_method = "closed-form";
    }
    q.mean1 = moments::mean_loss_stationary(J.l1, t);
    q.mean2 = moments::mean_loss_stationary(J.l2, t);
    q.var1 = moments::var_loss(J.l1, t);
    q.var2 = moments::var_loss(J.l2, t);
    q.cov = moments::cov_losses(J, t);
    q.sum_mean = q.mean1 + q.mean2;
    q.sum_var = q.var1 + q.var2 + 2.0 * q.cov;
    q.premium = q.sum_mean + loading * std::sqrt(q.sum_var);
    return q;
}

Example example_from_name(const std::string& name) {
    if (name == "5.1") return Example::E51;
    if (name == "5.2-fgm") return Example::E52Fgm;
    if (name == "5.2-gaussian") return Example::E52Gaussian;
    if (name == "5.3-t") return Example::E53StudentT;
    if (name == "5.4-gumbel") return Example::E54Gumbel;
    throw ConfigError("unknown example '" + name +
                      "' (expected 5.1, 5.2-fgm, 5.2-gaussian, 5.3-t or 5.4-gumbel)");
}

std::string example_name(Example e) {
    switch (e) {
        case Example::E51: return "5.1";
        case Example::E52Fgm: return "5.2-fgm";
        case Example::E52Gaussian: return "5.2-gaussian";
        case Example::E53StudentT: return "5.3-t";
        case Example::E54Gumbel: return "5.4-gumbel";
    }
    return "?";
}

BcdcpModel example_model(Example e, double theta) {
    // Shared parameter base: initial joint attacks at rate 3 with exponential
    // mark marginals (rate 0.1 each); line-1 self jumps loggamma
    // (scale 1, rate 2.75, shape 3) with Pareto(3,4,6) severities; line-2 self
    // jumps Frechet(2,3) with Pareto(4,4,6) severities; a = 0, delta = 3.
    LineParams line1;
    line1.a = 0.0;
    line1.delta = 3.0;
    line1.self_jump = Law(LoggammaLaw{1.0, 2.75, 3.0});
    line1.severity = Law(ParetoLaw{3.0, 4.0, 6.0});

    LineParams line2;
    line2.a = 0.0;
    line2.delta = 3.0;
    line2.self_jump = Law(FrechetLaw{2.0, 3.0});
    line2.severity = Law(ParetoLaw{4.0, 4.0, 6.0});

    BcdcpModel m;
    m.shocks.rho = 3.0;
    m.shocks.marg1 = Law(ExponentialLaw{0.1});
    m.line1 = line1;
    // start at the stationary mean so simulation studies have no transient
    m.line1.lambda0 = 30.0 / (3.0 - mean(*line1.self_jump));
    if (e == Example::E51) return m;

    m.line2 = line2;
    m.line2->lambda0 = 30.0 / (3.0 - mean(*line2.self_jump));
    m.shocks.marg2 = Law(ExponentialLaw{0.1});
    CopulaSpec cop;
    cop.theta = theta;
    switch (e) {
        case Example::E52Fgm: cop.family = CopulaFamily::Fgm; break;
        case Example::E52Gaussian: cop.family = CopulaFamily::Gaussian; break;
        case Example::E53StudentT:
            cop.family = CopulaFamily::StudentT;
            cop.dof = 5.0;
            break;
        case Example::E54Gumbel: cop.family = CopulaFamily::Gumbel; break;
        default: break;
    }
    m.shocks.copula = cop;
    return m;
}

std::vector<double> example_theta_grid(Example e) {
    switch (e) {
        case Example::E51: return {0.0};
        case Example::E52Fgm: return {-1.0, -0.5, 0.0, 0.5, 1.0};
        case Example::E52Gaussian:
        case Example::E53StudentT: return {-0.99, -0.5, 0.0, 0.5, 0.99};
        case Example::E54Gumbel: return {1.001, 2.0, 5.0, 10.0, 100.0};
    }
    return {};
}

TableSet table_suite(Example e, const PricingOptions& opt) {
    TableSet set;
    const double t = 1.0, loading = 1.0;
    if (e == Example::E51) {
        BcdcpModel m = example_model(e, 0.0);
        BcdcpModel shot = zero_self_marks(m);
        PremiumQuote q = premium_univariate(m, t, loading);
        PremiumQuote qs = premium_univariate(shot, t, loading);
        Table tab;
        tab.name = "example-5.1";
        tab.header = {"row", "contagion", "shot_noise"};
        tab.rows.push_back({0.0, q.mean1, qs.mean1});
        tab.rows.push_back({1.0, q.var1, qs.var1});
        tab.rows.push_back({2.0, q.premium, qs.premium});
        set.tables.push_back(std::move(tab));
        return set;
    }

    Table prem{"premium-" + example_name(e), {"theta", "contagion", "shot_noise"}, {}};
    Table cov{"cov-" + example_name(e), {"theta", "contagion", "shot_noise"}, {}};
    Table corr{"corr-" + example_name(e), {"theta", "contagion", "shot_noise"}, {}};
    for (double theta : example_theta_grid(e)) {
        BcdcpModel m = example_model(e, theta);
        BcdcpModel shot = zero_self_marks(m);
        PremiumQuote q = premium_bivariate(m, t, loading, opt);
        PremiumQuote qs = premium_bivariate(shot, t, loading, opt);
        prem.rows.push_back({theta, q.premium, qs.premium});
        cov.rows.push_back({theta, q.cov, qs.cov});
        corr.rows.push_back({theta, q.cov / std::sqrt(q.var1 * q.var2),
                             qs.cov / std::sqrt(qs.var1 * qs.var2)});
    }
    set.tables.push_back(std::move(prem));
    set.tables.push_back(std::move(cov));
    set.tables.push_back(std::move(corr));
    return set;
}

std::string table_to_csv(const Table& t, bool round_paper) {
    std::string out;
    for (size_t i = 0; i < t.header.size(); ++i) {
        if (i) out += ',';
        out += t.header[i];
    }
    out += '\n';
    const bool e51 = t.name == "example-5.1";
    static const char* kE51Rows[] = {"mean", "variance", "premium"};
    for (const auto& row : t.rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            if (i == 0 && e51) {
                out += kE51Rows[static_cast<int>(row[0])];
                continue;
            }
            char buf[40];
            if (round_paper && i > 0) {
                bool is_corr = t.name.rfind("corr-", 0) == 0;
                std::snprintf(buf, sizeof(buf), is_corr ? "%.5f" : "%.2f", row[i]);
                out += buf;
            } else {
                auto res = std::to_chars(buf, buf + sizeof(buf), row[i]);
                out.append(buf, res.ptr);
            }
        }
        out += '\n';
    }
    return out;
}

}  // namespace bcdcp::pricing
