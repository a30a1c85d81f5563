#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bcdcp/model.hpp"
#include "bcdcp/transforms.hpp"

namespace bcdcp::cfg {

enum class Mode { Simulate, Moments, PremiumTable, TransformEval, Validate };

Mode mode_from_name(const std::string& name);
std::string mode_name(Mode m);

struct McBlock {
    std::int64_t paths = 1;
    double burn_in = -1.0;  // < 0: default 20 relaxation times
    std::optional<std::uint64_t> seed;
    double grid_dt = 0.0;
    int threads = 0;
};

struct NumericBlock {
    double quad_abs_tol = 1e-10;
    double ode_tol = 1e-10;
    int ode_initial_steps = 256;
    int cross_moment_nodes = 408;
    int fhat_nodes = 72;
    bool mc_cross_moment = false;
    std::int64_t cross_moment_mc_samples = 2'000'000;
};

struct PricingBlock {
    double loading = 1.0;
    std::string example;  // optional canned example id
};

struct RunConfig {
    BcdcpModel model;
    double horizon = 1.0;
    Mode mode = Mode::Validate;
    McBlock mc;
    NumericBlock numeric;
    PricingBlock pricing;
    std::vector<transforms::TransformQuery> queries;
    std::string moment_mode = "stationary";  // or "conditional"
    std::string out_dir = ".";
};

// Parse/serialize the JSON run configuration. Parse errors carry the JSON
// pointer of the offending field.
RunConfig parse_config(const std::string& json_text);
std::string serialize_config(const RunConfig& config);

Law law_from_json_text(const std::string& json_text);
std::string law_to_json_text(const Law& law);

// FNV-1a checksum of output bytes, hex encoded; recorded per output file in
// the run manifest.
std::string fnv1a_hex(const std::string& bytes);

struct RunManifest {
    std::string config_echo;
    std::string version;
    double wall_ms = 0.0;
    std::map<std::string, std::string> output_checksums;
    std::string to_json() const;
};

}  // namespace bcdcp::cfg
