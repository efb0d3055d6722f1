#include "spinecurve/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace spinecurve {

void validate_config(const Config& cfg) {
    const DiagnosisConfig& d = cfg.diagnosis;
    if (!(d.gamma_threshold_deg > 0.0))
        throw ParseError("config: gamma_threshold_deg must be positive");
    if (!(d.severity_moderate_deg > 0.0) || !(d.severity_severe_deg > d.severity_moderate_deg))
        throw ParseError("config: severity bounds must be positive and ordered");
    if (d.extremum_window < 1 || d.lumbar_relaxed_window < 1)
        throw ParseError("config: extremum windows must be >= 1");
    if (d.constraint_eps_deg < 0.0)
        throw ParseError("config: eps_deg must be >= 0");
    if (!(d.svd_rank_tol > 0.0 && d.svd_rank_tol < 1.0))
        throw ParseError("config: svd_tol must lie in (0, 1)");
    if (cfg.output_format != "json" && cfg.output_format != "csv")
        throw ParseError("config: output_format must be 'json' or 'csv'");
}

Config load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path + ": cannot open config file");
    std::ostringstream ss;
    ss << in.rdbuf();

    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(ss.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path + ": invalid JSON: " + e.what());
    }
    if (!doc.is_object()) throw ParseError(path + ": config must be a JSON object");

    Config cfg;
    auto get_double = [&](const char* key, double& target) {
        if (!doc.contains(key)) return;
        if (!doc[key].is_number()) throw ParseError(path + ": '" + key + "' must be a number");
        target = doc[key].get<double>();
    };
    auto get_int = [&](const char* key, int& target) {
        if (!doc.contains(key)) return;
        if (!doc[key].is_number_integer())
            throw ParseError(path + ": '" + key + "' must be an integer");
        target = doc[key].get<int>();
    };

    get_double("gamma_threshold_deg", cfg.diagnosis.gamma_threshold_deg);
    if (doc.contains("severity_bounds")) {
        const auto& b = doc["severity_bounds"];
        if (!b.is_array() || b.size() != 2 || !b[0].is_number() || !b[1].is_number())
            throw ParseError(path + ": 'severity_bounds' must be [moderate, severe]");
        cfg.diagnosis.severity_moderate_deg = b[0].get<double>();
        cfg.diagnosis.severity_severe_deg = b[1].get<double>();
    }
    get_int("extremum_window", cfg.diagnosis.extremum_window);
    get_int("lumbar_relaxed_window", cfg.diagnosis.lumbar_relaxed_window);
    get_double("eps_deg", cfg.diagnosis.constraint_eps_deg);
    get_double("svd_tol", cfg.diagnosis.svd_rank_tol);
    if (doc.contains("output_format")) {
        if (!doc["output_format"].is_string())
            throw ParseError(path + ": 'output_format' must be a string");
        cfg.output_format = doc["output_format"].get<std::string>();
    }
    if (doc.contains("svg_emit")) {
        if (!doc["svg_emit"].is_boolean())
            throw ParseError(path + ": 'svg_emit' must be a boolean");
        cfg.svg_emit = doc["svg_emit"].get<bool>();
    }
    validate_config(cfg);
    return cfg;
}

} // namespace spinecurve
