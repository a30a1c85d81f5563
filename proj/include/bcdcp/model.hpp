#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bcdcp/copula.hpp"
#include "bcdcp/laws.hpp"

namespace bcdcp {

// One business line: mean-reverting intensity dynamics plus the laws of its
// self-excited intensity jumps and claim severities. self_jump == nullopt
// disables the line's self-event channel entirely (no claims at all); a
// ZeroLaw self_jump keeps the claims but removes the intensity feedback
// (the shot-noise benchmark).
struct LineParams {
    double a = 0.0;          // mean-reverting level
    double delta = 1.0;      // mean-reverting (decay) rate
    double lambda0 = 1.0;    // initial intensity
    std::optional<Law> self_jump;
    std::optional<Law> severity;
};

// External joint shocks: Poisson rate rho, per-line mark marginals, copula.
struct JointShockSpec {
    double rho = 0.0;
    Law marg1 = ExponentialLaw{1.0};
    std::optional<Law> marg2;
    std::optional<CopulaSpec> copula;
};

struct BcdcpModel {
    LineParams line1;
    std::optional<LineParams> line2;
    JointShockSpec shocks;

    bool bivariate() const { return line2.has_value(); }
    const LineParams& line(int d) const { return d == 1 ? line1 : line2.value(); }
};

// Mean of the self-jump law (0 when the channel is disabled or zero).
double self_jump_mean(const LineParams& line);
// kappa = delta - mu1(self jump): positive iff the line is stationary.
double stationarity_margin(const LineParams& line);
// Shock inflow a*delta + rho*mu1(external mark).
double shock_inflow(const LineParams& line, double rho, const Law& marg);

// Deterministic intensity evolution between jumps: a + (lam_from - a)e^{-delta dt}.
double decay(const LineParams& line, double lam_from, double dt);

struct ValidationItem {
    bool error = false;  // error vs warning
    std::string code;
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationItem> items;
    bool stationary1 = false;
    bool stationary2 = false;  // true also when line2 absent
    bool ok() const {
        for (const auto& it : items)
            if (it.error) return false;
        return true;
    }
};

// Collects parameter positivity, stationarity and moment-existence findings.
// Never throws for model defects; the report lists them.
ValidationReport validate(const BcdcpModel& model);

}  // namespace bcdcp
