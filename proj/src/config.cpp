#include "bcdcp/config.hpp"

#include <json.hpp>

#include <cstdio>

#include "bcdcp/errors.hpp"

namespace bcdcp::cfg {

using ordered_json = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ConfigError("config error at " + where + ": " + what);
}

double get_number(const ordered_json& j, const std::string& where, const char* key,
                  std::optional<double> fallback = std::nullopt) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        fail(where + "/" + key, "missing required field");
    }
    if (!j[key].is_number()) fail(where + "/" + key, "expected a number");
    return j[key].get<double>();
}

Law parse_law(const ordered_json& j, const std::string& where) {
    if (!j.is_object()) fail(where, "expected a law object");
    if (!j.contains("type")) fail(where + "/type", "missing required field");
    std::string type = j["type"].get<std::string>();
    if (type == "exponential") return ExponentialLaw{get_number(j, where, "rate")};
    if (type == "loggamma")
        return LoggammaLaw{get_number(j, where, "scale"), get_number(j, where, "rate"),
                           get_number(j, where, "shape")};
    if (type == "frechet")
        return FrechetLaw{get_number(j, where, "scale"), get_number(j, where, "shape")};
    if (type == "pareto")
        return ParetoLaw{get_number(j, where, "tail"), get_number(j, where, "scale"),
                         get_number(j, where, "shape")};
    if (type == "zero") return ZeroLaw{};
    fail(where + "/type", "unknown law type '" + type + "'");
}

ordered_json law_json(const Law& law) {
    ordered_json j;
    if (const auto* e = std::get_if<ExponentialLaw>(&law)) {
        j["type"] = "exponential";
        j["rate"] = e->rate;
    } else if (const auto* l = std::get_if<LoggammaLaw>(&law)) {
        j["type"] = "loggamma";
        j["scale"] = l->scale;
        j["rate"] = l->rate;
        j["shape"] = l->shape;
    } else if (const auto* f = std::get_if<FrechetLaw>(&law)) {
        j["type"] = "frechet";
        j["scale"] = f->scale;
        j["shape"] = f->shape;
    } else if (const auto* p = std::get_if<ParetoLaw>(&law)) {
        j["type"] = "pareto";
        j["tail"] = p->tail;
        j["scale"] = p->scale;
        j["shape"] = p->shape;
    } else {
        j["type"] = "zero";
    }
    return j;
}

LineParams parse_line(const ordered_json& j, const std::string& where) {
    LineParams line;
    line.a = get_number(j, where, "a", 0.0);
    line.delta = get_number(j, where, "delta");
    line.lambda0 = get_number(j, where, "lambda0");
    if (j.contains("self_jump") && !j["self_jump"].is_null())
        line.self_jump = parse_law(j["self_jump"], where + "/self_jump");
    if (j.contains("severity") && !j["severity"].is_null())
        line.severity = parse_law(j["severity"], where + "/severity");
    return line;
}

ordered_json line_json(const LineParams& line) {
    ordered_json j;
    j["a"] = line.a;
    j["delta"] = line.delta;
    j["lambda0"] = line.lambda0;
    if (line.self_jump) j["self_jump"] = law_json(*line.self_jump);
    if (line.severity) j["severity"] = law_json(*line.severity);
    return j;
}

CopulaSpec parse_copula(const ordered_json& j, const std::string& where) {
    CopulaSpec c;
    if (!j.contains("family")) fail(where + "/family", "missing required field");
    c.family = family_from_name(j["family"].get<std::string>());
    c.theta = get_number(j, where, "theta");
    if (c.family == CopulaFamily::StudentT) c.dof = get_number(j, where, "dof");
    return c;
}

ordered_json copula_json(const CopulaSpec& c) {
    ordered_json j;
    j["family"] = family_name(c.family);
    j["theta"] = c.theta;
    if (c.family == CopulaFamily::StudentT) j["dof"] = c.dof;
    return j;
}

transforms::TransformQuery parse_query(const ordered_json& j, const std::string& where) {
    transforms::TransformQuery q;
    q.theta = get_number(j, where, "theta", 1.0);
    q.eta = get_number(j, where, "eta", 1.0);
    q.nu = get_number(j, where, "nu", 0.0);
    q.zeta = get_number(j, where, "zeta", 0.0);
    q.upsilon = get_number(j, where, "upsilon", 0.0);
    q.gamma = get_number(j, where, "gamma", 0.0);
    q.T = get_number(j, where, "T", 1.0);
    q.lambda01 = get_number(j, where, "lambda01", 0.0);
    q.lambda02 = get_number(j, where, "lambda02", 0.0);
    return q;
}

}  // namespace

Mode mode_from_name(const std::string& name) {
    if (name == "simulate") return Mode::Simulate;
    if (name == "moments") return Mode::Moments;
    if (name == "premium-table") return Mode::PremiumTable;
    if (name == "transform-eval") return Mode::TransformEval;
    if (name == "validate") return Mode::Validate;
    throw ConfigError("config error at /mode: unknown mode '" + name + "'");
}

std::string mode_name(Mode m) {
    switch (m) {
        case Mode::Simulate: return "simulate";
        case Mode::Moments: return "moments";
        case Mode::PremiumTable: return "premium-table";
        case Mode::TransformEval: return "transform-eval";
        case Mode::Validate: return "validate";
    }
    return "?";
}

RunConfig parse_config(const std::string& json_text) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    RunConfig c;
    if (!j.contains("model")) fail("/model", "missing required field");
    const auto& jm = j["model"];
    if (!jm.contains("line1")) fail("/model/line1", "missing required field");
    c.model.line1 = parse_line(jm["line1"], "/model/line1");
    if (jm.contains("line2") && !jm["line2"].is_null())
        c.model.line2 = parse_line(jm["line2"], "/model/line2");
    if (jm.contains("shocks")) {
        const auto& js = jm["shocks"];
        c.model.shocks.rho = get_number(js, "/model/shocks", "rho", 0.0);
        if (js.contains("marg1")) c.model.shocks.marg1 = parse_law(js["marg1"], "/model/shocks/marg1");
        else if (c.model.shocks.rho > 0) fail("/model/shocks/marg1", "missing required field");
        if (js.contains("marg2") && !js["marg2"].is_null())
            c.model.shocks.marg2 = parse_law(js["marg2"], "/model/shocks/marg2");
        if (js.contains("copula") && !js["copula"].is_null())
            c.model.shocks.copula = parse_copula(js["copula"], "/model/shocks/copula");
    }
    c.horizon = get_number(j, "", "horizon", 1.0);
    if (j.contains("mode")) c.mode = mode_from_name(j["mode"].get<std::string>());
    if (j.contains("mc")) {
        const auto& jmc = j["mc"];
        c.mc.paths = static_cast<std::int64_t>(get_number(jmc, "/mc", "paths", 1.0));
        c.mc.burn_in = get_number(jmc, "/mc", "burn_in", -1.0);
        if (jmc.contains("seed"))
            c.mc.seed = static_cast<std::uint64_t>(get_number(jmc, "/mc", "seed"));
        c.mc.grid_dt = get_number(jmc, "/mc", "grid_dt", 0.0);
        c.mc.threads = static_cast<int>(get_number(jmc, "/mc", "threads", 0.0));
    }
    if (j.contains("numeric")) {
        const auto& jn = j["numeric"];
        c.numeric.quad_abs_tol = get_number(jn, "/numeric", "quad_abs_tol", 1e-10);
        c.numeric.ode_tol = get_number(jn, "/numeric", "ode_tol", 1e-10);
        c.numeric.ode_initial_steps =
            static_cast<int>(get_number(jn, "/numeric", "ode_initial_steps", 256.0));
        c.numeric.cross_moment_nodes =
            static_cast<int>(get_number(jn, "/numeric", "cross_moment_nodes", 408.0));
        c.numeric.fhat_nodes = static_cast<int>(get_number(jn, "/numeric", "fhat_nodes", 72.0));
        if (jn.contains("mc_cross_moment")) c.numeric.mc_cross_moment = jn["mc_cross_moment"].get<bool>();
        c.numeric.cross_moment_mc_samples = static_cast<std::int64_t>(
            get_number(jn, "/numeric", "cross_moment_mc_samples", 2'000'000.0));
    }
    if (j.contains("pricing")) {
        const auto& jp = j["pricing"];
        c.pricing.loading = get_number(jp, "/pricing", "loading", 1.0);
        if (jp.contains("example")) c.pricing.example = jp["example"].get<std::string>();
    }
    if (j.contains("transform") && j["transform"].contains("queries")) {
        const auto& qs = j["transform"]["queries"];
        if (!qs.is_array()) fail("/transform/queries", "expected an array");
        for (size_t i = 0; i < qs.size(); ++i)
            c.queries.push_back(parse_query(qs[i], "/transform/queries/" + std::to_string(i)));
    }
    if (j.contains("moment_mode")) {
        c.moment_mode = j["moment_mode"].get<std::string>();
        if (c.moment_mode != "stationary" && c.moment_mode != "conditional")
            fail("/moment_mode", "expected 'stationary' or 'conditional'");
    }
    if (j.contains("output") && j["output"].contains("dir"))
        c.out_dir = j["output"]["dir"].get<std::string>();

    if (c.mode == Mode::Simulate && !c.mc.seed)
        fail("/mc/seed", "seed is mandatory for simulate mode");
    return c;
}

std::string serialize_config(const RunConfig& c) {
    ordered_json j;
    ordered_json jm;
    jm["line1"] = line_json(c.model.line1);
    if (c.model.line2) jm["line2"] = line_json(*c.model.line2);
    ordered_json js;
    js["rho"] = c.model.shocks.rho;
    js["marg1"] = law_json(c.model.shocks.marg1);
    if (c.model.shocks.marg2) js["marg2"] = law_json(*c.model.shocks.marg2);
    if (c.model.shocks.copula) js["copula"] = copula_json(*c.model.shocks.copula);
    jm["shocks"] = js;
    j["model"] = jm;
    j["horizon"] = c.horizon;
    j["mode"] = mode_name(c.mode);
    ordered_json jmc;
    jmc["paths"] = c.mc.paths;
    jmc["burn_in"] = c.mc.burn_in;
    if (c.mc.seed) jmc["seed"] = *c.mc.seed;
    jmc["grid_dt"] = c.mc.grid_dt;
    jmc["threads"] = c.mc.threads;
    j["mc"] = jmc;
    ordered_json jn;
    jn["quad_abs_tol"] = c.numeric.quad_abs_tol;
    jn["ode_tol"] = c.numeric.ode_tol;
    jn["ode_initial_steps"] = c.numeric.ode_initial_steps;
    jn["cross_moment_nodes"] = c.numeric.cross_moment_nodes;
    jn["fhat_nodes"] = c.numeric.fhat_nodes;
    jn["mc_cross_moment"] = c.numeric.mc_cross_moment;
    jn["cross_moment_mc_samples"] = c.numeric.cross_moment_mc_samples;
    j["numeric"] = jn;
    ordered_json jp;
    jp["loading"] = c.pricing.loading;
    if (!c.pricing.example.empty()) jp["example"] = c.pricing.example;
    j["pricing"] = jp;
    if (!c.queries.empty()) {
        ordered_json arr = ordered_json::array();
        for (const auto& q : c.queries) {
            ordered_json jq;
            jq["theta"] = q.theta;
            jq["eta"] = q.eta;
            jq["nu"] = q.nu;
            jq["zeta"] = q.zeta;
            jq["upsilon"] = q.upsilon;
            jq["gamma"] = q.gamma;
            jq["T"] = q.T;
            jq["lambda01"] = q.lambda01;
            jq["lambda02"] = q.lambda02;
            arr.push_back(jq);
        }
        j["transform"]["queries"] = arr;
    }
    j["moment_mode"] = c.moment_mode;
    j["output"]["dir"] = c.out_dir;
    return j.dump(2) + "\n";
}

Law law_from_json_text(const std::string& json_text) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("law parse error: ") + e.what());
    }
    return parse_law(j, "/");
}

std::string law_to_json_text(const Law& law) { return law_json(law).dump(); }

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string RunManifest::to_json() const {
    ordered_json j;
    j["version"] = version;
    j["wall_ms"] = wall_ms;
    ordered_json outs;
    for (const auto& [name, sum] : output_checksums) outs[name] = sum;
    j["outputs"] = outs;
    j["config"] = ordered_json::parse(config_echo);
    return j.dump(2) + "\n";
}

}  // namespace bcdcp::cfg
