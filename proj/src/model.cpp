#include "bcdcp/model.hpp"

#include <cmath>

#include "bcdcp/errors.hpp"

namespace bcdcp {

double self_jump_mean(const LineParams& line) {
    if (!line.self_jump) return 0.0;
    return mean(*line.self_jump);
}

double stationarity_margin(const LineParams& line) {
    return line.delta - self_jump_mean(line);
}

double shock_inflow(const LineParams& line, double rho, const Law& marg) {
    return line.a * line.delta + rho * mean(marg);
}

double decay(const LineParams& line, double lam_from, double dt) {
    return line.a + (lam_from - line.a) * std::exp(-line.delta * dt);
}

namespace {

void check_law(ValidationReport& rep, const std::optional<Law>& law, const char* where) {
    if (!law) return;
    try {
        check_valid(*law);
    } catch (const DomainError& e) {
        rep.items.push_back({true, "law", std::string(where) + ": " + e.what()});
    }
}

void check_line(ValidationReport& rep, const LineParams& line, int d, bool& stationary) {
    std::string tag = "line" + std::to_string(d);
    if (!(line.delta > 0))
        rep.items.push_back({true, tag + ".delta", tag + ": requires delta > 0"});
    if (!(line.lambda0 > 0))
        rep.items.push_back({true, tag + ".lambda0", tag + ": requires lambda0 > 0"});
    if (!(line.a >= 0)) rep.items.push_back({true, tag + ".a", tag + ": requires a >= 0"});
    check_law(rep, line.self_jump, (tag + ".self_jump").c_str());
    check_law(rep, line.severity, (tag + ".severity").c_str());
    if (line.self_jump && !line.severity)
        rep.items.push_back(
            {true, tag + ".severity", tag + ": severity law required when self jumps are enabled"});

    stationary = true;
    if (line.self_jump) {
        try {
            double mu1 = mean(*line.self_jump);
            double margin = line.delta - mu1;
            if (margin <= 0) {
                stationary = false;
                rep.items.push_back(
                    {false, tag + ".stationarity",
                     tag + ": nonstationary, requires delta > mean of self-jump law (delta=" +
                         std::to_string(line.delta) + ", mu1=" + std::to_string(mu1) + ")"});
                if (margin == 0)
                    rep.items.push_back({false, tag + ".boundary",
                                         tag + ": boundary case delta = mu1 of self-jump law; "
                                               "stationary-regime formulas are unavailable"});
            }
        } catch (const DomainError& e) {
            stationary = false;
            rep.items.push_back({true, tag + ".self_jump", tag + ": " + std::string(e.what())});
        }
        try {
            second_moment(*line.self_jump);
        } catch (const DomainError& e) {
            rep.items.push_back({false, tag + ".self_jump.mu2",
                                 tag + ": second moment of self-jump law unavailable, variance "
                                       "formulas will fail (" + std::string(e.what()) + ")"});
        }
    }
    if (line.severity) {
        try {
            mean(*line.severity);
        } catch (const DomainError& e) {
            rep.items.push_back({true, tag + ".severity.mu1", tag + ": " + std::string(e.what())});
        }
        try {
            second_moment(*line.severity);
        } catch (const DomainError& e) {
            rep.items.push_back({false, tag + ".severity.mu2",
                                 tag + ": second moment of severity law unavailable, variance "
                                       "formulas will fail (" + std::string(e.what()) + ")"});
        }
    }
}

}  // namespace

ValidationReport validate(const BcdcpModel& model) {
    ValidationReport rep;
    check_line(rep, model.line1, 1, rep.stationary1);
    if (model.line2)
        check_line(rep, *model.line2, 2, rep.stationary2);
    else
        rep.stationary2 = true;

    if (!(model.shocks.rho >= 0))
        rep.items.push_back({true, "shocks.rho", "shocks: requires rho >= 0"});
    check_law(rep, std::optional<Law>(model.shocks.marg1), "shocks.marg1");
    check_law(rep, model.shocks.marg2, "shocks.marg2");
    if (model.line2 && model.shocks.rho > 0 && !model.shocks.marg2)
        rep.items.push_back({true, "shocks.marg2",
                             "shocks: second marginal required for a bivariate model with rho > 0"});
    if (model.line2 && model.shocks.rho > 0 && !model.shocks.copula)
        rep.items.push_back({true, "shocks.copula",
                             "shocks: copula required for a bivariate model with rho > 0"});
    if (model.shocks.copula) {
        try {
            check_valid(*model.shocks.copula);
        } catch (const DomainError& e) {
            rep.items.push_back({true, "shocks.copula", e.what()});
        }
    }
    return rep;
}

}  // namespace bcdcp
