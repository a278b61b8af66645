#pragma once

// JSON config file and plan records. Every key is optional; unknown keys are
// rejected by name.

#include "adaprep/bench.hpp"
#include "adaprep/codec.hpp"
#include "adaprep/errors.hpp"
#include "adaprep/pipeline.hpp"

#include "json.hpp"

#include <filesystem>
#include <optional>
#include <set>
#include <string>

namespace adaprep {

struct BenchSettings {
    BenchOptions options;
    std::optional<std::string> output_dir;
};

struct CliConfig {
    PipelineConfig pipeline;
    BenchSettings bench;
};

namespace config_detail {

using json = nlohmann::json;

inline void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) {
        throw ConfigError(where + " must be an object");
    }
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : obj.items()) {
        if (!ok.contains(key)) {
            throw ConfigError("unknown key '" + (where.empty() ? key : where + "." + key) + "'");
        }
    }
}

template <typename T>
void read(const json& obj, const char* key, const std::string& where, T& out) {
    const auto it = obj.find(key);
    if (it == obj.end()) return;
    try {
        out = it->template get<T>();
    } catch (const json::exception&) {
        throw ConfigError("wrong type for '" + where + "." + key + "'");
    }
}

} // namespace config_detail

inline CliConfig parse_config(const nlohmann::json& root) {
    using config_detail::check_keys;
    using config_detail::read;
    CliConfig cfg;
    check_keys(root, "", {"analyzer", "policy", "crop", "bench"});

    if (root.contains("analyzer")) {
        const auto& a = root["analyzer"];
        check_keys(a, "analyzer", {"grad_threshold", "weight_edge", "weight_entropy", "weight_text",
                                   "edge_density_ref", "analysis_side", "t_low", "t_high"});
        auto& c = cfg.pipeline.analyzer;
        read(a, "grad_threshold", "analyzer", c.grad_threshold);
        read(a, "weight_edge", "analyzer", c.weight_edge);
        read(a, "weight_entropy", "analyzer", c.weight_entropy);
        read(a, "weight_text", "analyzer", c.weight_text);
        read(a, "edge_density_ref", "analyzer", c.edge_density_ref);
        read(a, "analysis_side", "analyzer", c.analysis_side);
        read(a, "t_low", "analyzer", c.t_low);
        read(a, "t_high", "analyzer", c.t_high);
    }
    if (root.contains("policy")) {
        const auto& p = root["policy"];
        check_keys(p, "policy", {"low_side", "medium_side", "high_side", "baseline_side", "patch"});
        auto& c = cfg.pipeline.policy;
        read(p, "low_side", "policy", c.low_side);
        read(p, "medium_side", "policy", c.medium_side);
        read(p, "high_side", "policy", c.high_side);
        read(p, "patch", "policy", c.patch);
        if (p.contains("baseline_side")) {
            int side = 0;
            read(p, "baseline_side", "policy", side);
            c.baseline_override = side;
        }
    }
    if (root.contains("crop")) {
        const auto& k = root["crop"];
        check_keys(k, "crop", {"grad_threshold", "bg_delta", "margin_frac", "min_area_frac", "enabled"});
        auto& c = cfg.pipeline.crop;
        read(k, "grad_threshold", "crop", c.grad_threshold);
        read(k, "bg_delta", "crop", c.bg_delta);
        read(k, "margin_frac", "crop", c.margin_frac);
        read(k, "min_area_frac", "crop", c.min_area_frac);
        read(k, "enabled", "crop", c.enabled);
    }
    if (root.contains("bench")) {
        const auto& b = root["bench"];
        check_keys(b, "bench", {"repeats", "workers", "output_dir", "proxy_cost_per_token"});
        auto& o = cfg.bench.options;
        read(b, "repeats", "bench", o.repeats);
        read(b, "workers", "bench", o.workers);
        read(b, "proxy_cost_per_token", "bench", o.proxy_cost_per_token);
        if (b.contains("output_dir")) {
            std::string dir;
            read(b, "output_dir", "bench", dir);
            cfg.bench.output_dir = dir;
        }
    }
    if (cfg.bench.options.repeats < 1) throw ConfigError("bench.repeats must be at least 1");
    if (cfg.bench.options.workers < 1) throw ConfigError("bench.workers must be at least 1");
    if (!(cfg.bench.options.proxy_cost_per_token >= 0)) {
        throw ConfigError("bench.proxy_cost_per_token must be non-negative");
    }
    cfg.pipeline.validated();
    return cfg;
}

inline CliConfig parse_config(std::string_view text) {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(root);
}

inline CliConfig load_config(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) {
        throw ConfigError("config file not found: " + path.string());
    }
    const auto bytes = read_file(path);
    return parse_config(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

inline nlohmann::ordered_json to_json(const PipelineConfig& c) {
    nlohmann::ordered_json j;
    j["analyzer"] = {{"grad_threshold", c.analyzer.grad_threshold},
                     {"weight_edge", c.analyzer.weight_edge},
                     {"weight_entropy", c.analyzer.weight_entropy},
                     {"weight_text", c.analyzer.weight_text},
                     {"edge_density_ref", c.analyzer.edge_density_ref},
                     {"analysis_side", c.analyzer.analysis_side},
                     {"t_low", c.analyzer.t_low},
                     {"t_high", c.analyzer.t_high}};
    j["policy"] = {{"low_side", c.policy.low_side},
                   {"medium_side", c.policy.medium_side},
                   {"high_side", c.policy.high_side},
                   {"baseline_side", c.policy.baseline_side()},
                   {"patch", c.policy.patch}};
    j["crop"] = {{"grad_threshold", c.crop.grad_threshold},
                 {"bg_delta", c.crop.bg_delta},
                 {"margin_frac", c.crop.margin_frac},
                 {"min_area_frac", c.crop.min_area_frac},
                 {"enabled", c.crop.enabled}};
    return j;
}

inline nlohmann::ordered_json to_json(const ComplexityReport& r) {
    return {{"edge_density", r.edge_density},
            {"entropy_bits", r.entropy_bits},
            {"text_density", r.text_density},
            {"score", r.score},
            {"class", std::string(to_string(r.complexity))}};
}

inline nlohmann::ordered_json to_json(const PreprocessPlan& p) {
    nlohmann::ordered_json j;
    j["complexity"] = to_json(p.complexity);
    if (p.crop_box) {
        j["crop_box"] = {{"x", p.crop_box->x}, {"y", p.crop_box->y}, {"w", p.crop_box->w}, {"h", p.crop_box->h}};
    } else {
        j["crop_box"] = "FullFrame";
    }
    j["target_side"] = p.target_side;
    j["source_dims"] = {p.source.width, p.source.height};
    j["content_dims"] = {p.placement.content.width, p.placement.content.height};
    j["output_dims"] = {p.placement.output.width, p.placement.output.height};
    j["pad_offset"] = {p.placement.offset_x, p.placement.offset_y};
    j["patch"] = p.patch;
    j["predicted_tokens"] = p.predicted_tokens;
    return j;
}

} // namespace adaprep
