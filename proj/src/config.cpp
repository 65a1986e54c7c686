#include "hypersurf/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "hypersurf/errors.hpp"

namespace hypersurf {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) { throw ConfigError(path + ": " + msg); }

void require_object(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) fail(path, "expected an object");
    for (const auto& [key, _] : j.items()) {
        if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }) == allowed.end()) {
            fail(path.empty() ? key : path + "." + key, "unknown key");
        }
    }
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

double get_number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

int get_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    const auto v = j.get<std::int64_t>();
    if (v < -1'000'000'000 || v > 1'000'000'000) fail(path, "out of range");
    return static_cast<int>(v);
}

std::string get_string(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

std::vector<double> get_numbers(const json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t k = 0; k < j.size(); ++k) out.push_back(get_number(j[k], path + "[" + std::to_string(k) + "]"));
    return out;
}

CurvatureFamily parse_family(const std::string& name, const std::string& path) {
    std::string upper = name;
    std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char ch) { return std::toupper(ch); });
    if (upper == "CONSTANT") return CurvatureFamily::Constant;
    if (upper == "LINEAR") return CurvatureFamily::Linear;
    if (upper == "RING") return CurvatureFamily::Ring;
    fail(path, "unknown family '" + name + "' (CONSTANT, LINEAR or RING)");
}

void parse_curvature(const json& j, RunConfig& cfg) {
    const std::string path = "curvature";
    require_object(j, path, {"family", "epsilon", "schedule", "params"});
    if (j.contains("family")) cfg.curvature.family = parse_family(get_string(j["family"], path + ".family"), path + ".family");
    if (j.contains("epsilon")) {
        cfg.curvature.epsilon = get_number(j["epsilon"], path + ".epsilon");
        if (!(cfg.curvature.epsilon >= 0.0)) fail(path + ".epsilon", "must be nonnegative");
    }
    if (j.contains("schedule")) {
        cfg.schedule = get_numbers(j["schedule"], path + ".schedule");
        for (std::size_t k = 0; k < cfg.schedule.size(); ++k) {
            const std::string p = path + ".schedule[" + std::to_string(k) + "]";
            if (!(cfg.schedule[k] >= 0.0)) fail(p, "must be nonnegative");
            if (k > 0 && cfg.schedule[k] < cfg.schedule[k - 1]) fail(p, "schedule must be nondecreasing");
        }
        if (!j.contains("epsilon") && !cfg.schedule.empty()) cfg.curvature.epsilon = cfg.schedule.back();
        if (!cfg.schedule.empty() && cfg.schedule.back() != cfg.curvature.epsilon) {
            fail(path + ".schedule", "last entry must equal curvature.epsilon");
        }
    }
    if (j.contains("params")) {
        const std::string p = path + ".params";
        require_object(j["params"], p, {"ring_radius", "ring_gain"});
        if (j["params"].contains("ring_radius")) {
            cfg.curvature.ring_radius = get_number(j["params"]["ring_radius"], p + ".ring_radius");
            if (!(cfg.curvature.ring_radius >= 0.0)) fail(p + ".ring_radius", "must be nonnegative");
        }
        if (j["params"].contains("ring_gain")) {
            cfg.curvature.ring_gain = get_number(j["params"]["ring_gain"], p + ".ring_gain");
        }
    }
}

void parse_sectors(const json& j, RunConfig& cfg) {
    const std::string path = "sectors";
    require_object(j, path, {"n", "angles"});
    if (j.contains("n")) {
        cfg.n = get_int(j["n"], path + ".n");
        if (cfg.n < 2) fail(path + ".n", "need n >= 2 (at least 4 sectors)");
    }
    if (j.contains("angles")) {
        cfg.angles = get_numbers(j["angles"], path + ".angles");
        if (cfg.angles.size() != static_cast<std::size_t>(2 * cfg.n)) {
            fail(path + ".angles", "expected 2n = " + std::to_string(2 * cfg.n) + " angles");
        }
    }
}

void parse_grid(const json& j, RunConfig& cfg) {
    const std::string path = "grid";
    require_object(j, path, {"I", "J", "u_max", "v_max"});
    if (j.contains("I")) {
        cfg.I = get_int(j["I"], path + ".I");
        if (!j.contains("J")) cfg.J = cfg.I;
    }
    if (j.contains("J")) cfg.J = get_int(j["J"], path + ".J");
    if (cfg.I < 1) fail(path + ".I", "must be positive");
    if (cfg.J < 1) fail(path + ".J", "must be positive");
    if (j.contains("u_max")) {
        cfg.u_max = get_number(j["u_max"], path + ".u_max");
        if (!j.contains("v_max")) cfg.v_max = cfg.u_max;
    }
    if (j.contains("v_max")) cfg.v_max = get_number(j["v_max"], path + ".v_max");
    if (!(cfg.u_max > 0.0)) fail(path + ".u_max", "must be positive");
    if (!(cfg.v_max > 0.0)) fail(path + ".v_max", "must be positive");
}

void parse_iteration(const json& j, RunConfig& cfg) {
    const std::string path = "iteration";
    require_object(j, path, {"tol", "max_iters"});
    if (j.contains("tol")) {
        cfg.tol = get_number(j["tol"], path + ".tol");
        if (!(cfg.tol > 0.0)) fail(path + ".tol", "must be positive");
    }
    if (j.contains("max_iters")) {
        cfg.max_iters = get_int(j["max_iters"], path + ".max_iters");
        if (cfg.max_iters < 1) fail(path + ".max_iters", "must be positive");
    }
}

void parse_surgery(const json& j, RunConfig& cfg) {
    if (!j.is_array()) fail("surgery", "expected an array");
    for (std::size_t k = 0; k < j.size(); ++k) {
        const std::string path = "surgery[" + std::to_string(k) + "]";
        const json& e = j[k];
        require_object(e, path, {"sector", "b", "m", "spacing", "size"});
        for (const char* key : {"sector", "b", "m"}) {
            if (!e.contains(key)) fail(join(path, key), "required");
        }
        SurgerySpec s;
        s.sector = get_int(e["sector"], path + ".sector");
        s.b = get_int(e["b"], path + ".b");
        s.m = get_int(e["m"], path + ".m");
        if (s.sector < 0) fail(path + ".sector", "must be nonnegative");
        if (s.b < 1) fail(path + ".b", "must be at least 1");
        if (s.m < 3) fail(path + ".m", "must be at least 3");
        if (s.m % 2 == 0) fail(path + ".m", "must be odd; an even number of new sectors admits no consistent edge labelling");
        if (e.contains("spacing")) {
            s.spacing = get_number(e["spacing"], path + ".spacing");
            if (!(*s.spacing > 0.0)) fail(path + ".spacing", "must be positive");
        }
        if (e.contains("size")) {
            s.size = get_int(e["size"], path + ".size");
            if (*s.size < 1) fail(path + ".size", "must be positive");
        }
        cfg.surgery.push_back(s);
    }
}

void parse_output(const json& j, RunConfig& cfg) {
    const std::string path = "output";
    require_object(j, path, {"mesh", "csv", "report"});
    if (j.contains("mesh")) cfg.output.mesh = get_string(j["mesh"], path + ".mesh");
    if (j.contains("csv")) cfg.output.csv = get_string(j["csv"], path + ".csv");
    if (j.contains("report")) cfg.output.report = get_string(j["report"], path + ".report");
}

}  // namespace

RunConfig parse_config(std::string_view text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: malformed JSON: ") + e.what());
    }
    if (!root.is_object()) fail("config", "top level must be an object");
    for (const auto& [key, _] : root.items()) {
        static const char* const kKeys[] = {"curvature", "sectors", "grid", "iteration", "surgery", "output", "seed"};
        if (std::find_if(std::begin(kKeys), std::end(kKeys), [&](const char* a) { return key == a; }) == std::end(kKeys)) {
            fail(key, "unknown key");
        }
    }

    RunConfig cfg;
    if (root.contains("curvature")) parse_curvature(root["curvature"], cfg);
    if (root.contains("sectors")) parse_sectors(root["sectors"], cfg);
    if (root.contains("grid")) parse_grid(root["grid"], cfg);
    if (root.contains("iteration")) parse_iteration(root["iteration"], cfg);
    if (root.contains("surgery")) parse_surgery(root["surgery"], cfg);
    if (root.contains("output")) parse_output(root["output"], cfg);
    if (root.contains("seed")) {
        if (!root["seed"].is_number_unsigned()) fail("seed", "expected a nonnegative integer");
        cfg.seed = root["seed"].get<std::uint64_t>();
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::vector<double> effective_angles(const RunConfig& cfg) {
    return cfg.angles.empty() ? symmetric_angles(cfg.n) : cfg.angles;
}

std::vector<double> effective_schedule(const RunConfig& cfg) {
    if (!cfg.schedule.empty()) return cfg.schedule;
    if (cfg.curvature.family == CurvatureFamily::Constant) return {cfg.curvature.epsilon};
    return geometric_schedule(cfg.curvature.epsilon);
}

IterationConfig iteration_config(const RunConfig& cfg) {
    IterationConfig it;
    it.tol = cfg.tol;
    it.max_iters = cfg.max_iters;
    it.epsilon_schedule = effective_schedule(cfg);
    return it;
}

}  // namespace hypersurf
