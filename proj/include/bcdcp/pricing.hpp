#pragma once

#include <string>
#include <vector>

#include "bcdcp/moments.hpp"

namespace bcdcp::pricing {

struct PremiumQuote {
    double mean1 = 0.0, var1 = 0.0;
    double mean2 = 0.0, var2 = 0.0;
    double cov = 0.0;
    double sum_mean = 0.0;
    double sum_var = 0.0;  // var1 + var2 + 2 cov
    double loading = 0.0;  // phi in [0, 1]
    double premium = 0.0;  // sum_mean + loading * sqrt(sum_var)
    std::string copula;    // family(theta) or "-" for the univariate quote
    std::string cross_moment_method;  // closed-form | quadrature | mc
};

struct PricingOptions {
    CrossMomentOptions cross;
    bool mc_cross_moment = false;
    std::int64_t mc_samples = 2'000'000;
    std::uint64_t mc_seed = 20210901;
};

// Mean-standard-deviation premium for a single line (stationary regime).
PremiumQuote premium_univariate(const BcdcpModel& model, double t, double loading);

// Joint premium: per-line stationary means/variances plus the loss covariance
// through the copula cross moment.
PremiumQuote premium_bivariate(const BcdcpModel& model, double t, double loading,
                               const PricingOptions& opt = {});

// Canned parameter sets reproducing the published premium studies.
enum class Example { E51, E52Fgm, E52Gaussian, E53StudentT, E54Gumbel };
Example example_from_name(const std::string& name);  // "5.1", "5.2-fgm", ...
std::string example_name(Example e);

// The example's model with the given copula dependence (theta ignored for 5.1).
BcdcpModel example_model(Example e, double theta);
std::vector<double> example_theta_grid(Example e);

struct Table {
    std::string name;
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

struct TableSet {
    std::vector<Table> tables;
};

// All tables for one example: premium / covariance / correlation rows over the
// theta grid, each with the contagion and the shot-noise (self-jump marks
// zeroed) columns. Example 5.1 produces the single mean/variance/premium table.
TableSet table_suite(Example e, const PricingOptions& opt = {});

std::string table_to_csv(const Table& t, bool round_paper = false);

}  // namespace bcdcp::pricing
