// Command-line front end: configuration ingestion, subcommand dispatch and
// CSV/report emission with a reproducibility manifest per run.
#include <CLI11.hpp>

#include <charconv>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "bcdcp/config.hpp"
#include "bcdcp/errors.hpp"
#include "bcdcp/moments.hpp"
#include "bcdcp/pricing.hpp"
#include "bcdcp/simulator.hpp"
#include "bcdcp/transforms.hpp"

namespace fs = std::filesystem;
using namespace bcdcp;

namespace {

constexpr const char* kVersion = "bcdcp 1.0.0";

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitDomain = 3;
constexpr int kExitNumeric = 4;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct OutputSink {
    fs::path dir;
    std::map<std::string, std::string> checksums;

    void write(const std::string& name, const std::string& bytes) {
        fs::create_directories(dir);
        std::ofstream out(dir / name, std::ios::binary);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        checksums[name] = cfg::fnv1a_hex(bytes);
    }
};

std::string format_full(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

int run_simulate(const cfg::RunConfig& config, OutputSink& sink) {
    ValidationReport rep = validate(config.model);
    if (!rep.ok()) {
        for (const auto& it : rep.items)
            if (it.error) std::cerr << "invalid model: " << it.message << "\n";
        return kExitDomain;
    }
    std::uint64_t seed = *config.mc.seed;
    Rng rng = Rng::substream(seed, 0);
    sim::Path path = sim::simulate_path(config.model, config.horizon, rng, sim::RecordMode::Full,
                                        config.mc.grid_dt, seed);
    sink.write("path.csv", sim::path_to_csv(path));

    if (config.mc.paths > 1) {
        sim::McOptions mo;
        mo.paths = config.mc.paths;
        mo.horizon = config.horizon;
        mo.burn_in = config.mc.burn_in;
        mo.seed = seed;
        mo.threads = config.mc.threads;
        std::vector<sim::McEstimate> est = sim::monte_carlo(config.model, mo);
        std::string csv = "quantity,value,std_error,paths,horizon,burn_in\n";
        for (const auto& e : est) {
            csv += e.label;
            csv += ',';
            csv += format_full(e.value);
            csv += ',';
            csv += format_full(e.std_error);
            csv += ',';
            csv += std::to_string(e.paths);
            csv += ',';
            csv += format_full(e.horizon);
            csv += ',';
            csv += format_full(e.burn_in);
            csv += '\n';
        }
        sink.write("mc_estimates.csv", csv);
    }
    return kExitOk;
}

int run_moments(const cfg::RunConfig& config, OutputSink& sink) {
    moments::ReportMode mode = config.moment_mode == "conditional"
                                   ? moments::ReportMode::Conditional
                                   : moments::ReportMode::Stationary;
    CrossMomentOptions xopt;
    xopt.nodes_per_axis = config.numeric.cross_moment_nodes;
    moments::MomentReport r =
        moments::report(config.model, config.horizon, mode, xopt, config.numeric.mc_cross_moment,
                        config.numeric.cross_moment_mc_samples);
    std::string csv = "key,value\n";
    auto put = [&](const char* key, double v) {
        csv += key;
        csv += ',';
        csv += format_full(v);
        csv += '\n';
    };
    csv += std::string("mode,") + (mode == moments::ReportMode::Stationary ? "stationary" : "conditional") + "\n";
    put("t", r.t);
    put("mean_lambda1", r.mean_lambda1);
    put("second_lambda1", r.second_lambda1);
    put("mean_L1", r.mean_l1);
    if (r.has_joint) {
        put("mean_lambda2", r.mean_lambda2);
        put("second_lambda2", r.second_lambda2);
        put("mean_L2", r.mean_l2);
        put("mean_lambda1_lambda2", r.mean_lambda12);
    }
    if (r.has_station) {
        put("second_L1", r.second_l1);
        put("var_L1", r.var_l1);
        if (r.has_joint) {
            put("second_L2", r.second_l2);
            put("var_L2", r.var_l2);
            put("mean_lambda1_L1", r.lam1_l1);
            put("mean_lambda2_L2", r.lam2_l2);
            put("mean_lambda1_L2", r.lam1_l2);
            put("mean_lambda2_L1", r.lam2_l1);
            put("mean_L1_L2", r.mean_l1l2);
            put("cov_L1_L2", r.cov);
            put("corr_L1_L2", r.corr);
            csv += "mu12_method," + r.mu12_method + "\n";
        }
    }
    sink.write("moments.csv", csv);
    return kExitOk;
}

int run_premium_table(const cfg::RunConfig& config, OutputSink& sink, const std::string& example,
                      bool round_paper, bool mc_cross) {
    pricing::PricingOptions popt;
    popt.cross.nodes_per_axis = config.numeric.cross_moment_nodes;
    popt.mc_cross_moment = mc_cross || config.numeric.mc_cross_moment;
    popt.mc_samples = config.numeric.cross_moment_mc_samples;
    std::string id = !example.empty() ? example : config.pricing.example;
    if (id.empty())
        throw ConfigError("premium-table: no example selected (--example or /pricing/example)");
    pricing::Example e = pricing::example_from_name(id);
    pricing::TableSet set = pricing::table_suite(e, popt);
    for (const auto& t : set.tables)
        sink.write(t.name + ".csv", pricing::table_to_csv(t, round_paper));
    return kExitOk;
}

int run_transform_eval(const cfg::RunConfig& config, OutputSink& sink) {
    transforms::Options topt;
    topt.ode_tol = config.numeric.ode_tol;
    topt.initial_steps = config.numeric.ode_initial_steps;
    topt.fhat_nodes_per_axis = config.numeric.fhat_nodes;
    transforms::Evaluator ev(config.model, topt);
    std::string csv = "theta,eta,nu,zeta,upsilon,gamma,T,lambda01,lambda02,value,error_estimate\n";
    for (const auto& q : config.queries) {
        transforms::TransformValue v = ev.evaluate(q);
        for (double x : {q.theta, q.eta, q.nu, q.zeta, q.upsilon, q.gamma, q.T, q.lambda01,
                         q.lambda02, v.value, v.error_estimate}) {
            csv += format_full(x);
            csv += ',';
        }
        csv.back() = '\n';
    }
    sink.write("transform_eval.csv", csv);
    std::cout << csv;
    return kExitOk;
}

int run_validate(const cfg::RunConfig& config, OutputSink& sink) {
    ValidationReport rep = validate(config.model);
    std::string csv = "level,code,message\n";
    for (const auto& it : rep.items) {
        csv += it.error ? "error," : "warning,";
        csv += it.code + "," + "\"" + it.message + "\"\n";
    }
    csv += std::string("info,stationary1,") + (rep.stationary1 ? "true" : "false") + "\n";
    csv += std::string("info,stationary2,") + (rep.stationary2 ? "true" : "false") + "\n";

    // invariant quick-suite on the configured laws
    auto check_law_invariants = [&](const std::optional<Law>& law, const std::string& code) {
        if (!law) return;
        try {
            double lt0 = laplace_transform(*law, 0.0);
            if (std::abs(lt0 - 1.0) > 1e-9)
                csv += "error," + code + ",\"laplace transform at 0 differs from 1\"\n";
            double prev = lt0;
            for (double e = 0.5; e <= 2.0; e += 0.5) {
                double cur = laplace_transform(*law, e);
                if (cur > prev + 1e-12)
                    csv += "error," + code + ",\"laplace transform is not decreasing\"\n";
                prev = cur;
            }
        } catch (const std::exception& ex) {
            csv += "error," + code + ",\"" + ex.what() + "\"\n";
        }
    };
    check_law_invariants(config.model.line1.self_jump, "line1.self_jump");
    check_law_invariants(config.model.line1.severity, "line1.severity");
    if (config.model.line2) {
        check_law_invariants(config.model.line2->self_jump, "line2.self_jump");
        check_law_invariants(config.model.line2->severity, "line2.severity");
    }
    // decay semigroup spot check
    {
        double l = config.model.line1.lambda0;
        double one = decay(config.model.line1, l, 0.7);
        double two = decay(config.model.line1, decay(config.model.line1, l, 0.3), 0.4);
        if (std::abs(one - two) > 1e-12 * std::max(1.0, std::abs(one)))
            csv += "error,line1.decay,\"decay semigroup identity violated\"\n";
    }
    sink.write("validation.csv", csv);
    std::cout << csv;
    return rep.ok() ? kExitOk : kExitDomain;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bivariate compound dynamic contagion process engine"};
    app.set_version_flag("--version", kVersion);

    std::string config_path;
    std::string out_dir;
    std::string example;
    std::uint64_t seed_override = 0;
    bool seed_set = false;
    std::int64_t paths_override = 0;
    bool round_paper = false;
    bool mc_cross = false;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* opt = sub->add_option("--config", config_path, "run configuration (JSON)");
        if (needs_config) opt->required();
        sub->add_option("--out", out_dir, "output directory (overrides config)");
        sub->add_option("--seed", seed_override, "seed override")->each([&](const std::string&) {
            seed_set = true;
        });
        sub->add_option("--paths", paths_override, "path-count override");
    };

    CLI::App* simulate = app.add_subcommand("simulate", "simulate paths and export CSV");
    add_common(simulate, true);
    CLI::App* momentsc = app.add_subcommand("moments", "closed-form moment report");
    add_common(momentsc, true);
    CLI::App* premium = app.add_subcommand("premium-table", "premium/covariance/correlation tables");
    add_common(premium, false);
    premium->add_option("--example", example, "canned example id (5.1, 5.2-fgm, ...)");
    premium->add_flag("--round", round_paper, "round values like the published tables");
    premium->add_flag("--mc-cross-moment", mc_cross,
                      "estimate the copula cross moment by fixed-seed Monte Carlo");
    CLI::App* transform = app.add_subcommand("transform-eval", "evaluate joint transforms");
    add_common(transform, true);
    CLI::App* validatec = app.add_subcommand("validate", "model validation + invariant quick-suite");
    add_common(validatec, true);

    app.require_subcommand(1);
    CLI11_PARSE(app, argc, argv);

    auto t0 = std::chrono::steady_clock::now();
    try {
        cfg::RunConfig config;
        if (!config_path.empty()) {
            config = cfg::parse_config(read_file(config_path));
        } else {
            config.mode = cfg::Mode::PremiumTable;
        }
        if (seed_set) config.mc.seed = seed_override;
        if (paths_override > 0) config.mc.paths = paths_override;
        if (!out_dir.empty()) config.out_dir = out_dir;

        OutputSink sink{fs::path(config.out_dir), {}};
        int rc = kExitOk;
        if (simulate->parsed()) {
            if (!config.mc.seed) throw ConfigError("config error at /mc/seed: seed is mandatory for simulate mode");
            rc = run_simulate(config, sink);
        } else if (momentsc->parsed()) {
            rc = run_moments(config, sink);
        } else if (premium->parsed()) {
            rc = run_premium_table(config, sink, example, round_paper, mc_cross);
        } else if (transform->parsed()) {
            rc = run_transform_eval(config, sink);
        } else if (validatec->parsed()) {
            rc = run_validate(config, sink);
        }

        cfg::RunManifest manifest;
        manifest.version = kVersion;
        manifest.config_echo = cfg::serialize_config(config);
        manifest.wall_ms = std::chrono::duration<double, std::milli>(
                               std::chrono::steady_clock::now() - t0)
                               .count();
        manifest.output_checksums = sink.checksums;
        {
            fs::create_directories(sink.dir);
            std::ofstream mf(sink.dir / "manifest.json", std::ios::binary);
            mf << manifest.to_json();
        }
        return rc;
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    } catch (const DomainError& e) {
        std::cerr << e.what() << "\n";
        return kExitDomain;
    } catch (const NumericError& e) {
        std::cerr << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
}
