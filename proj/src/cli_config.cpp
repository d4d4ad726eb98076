#include <algorithm>
#include <map>

#include "rydgate/cli.hpp"
#include "presets_embedded.hpp"

#ifndef RYDGATE_GIT_DESCRIBE
#define RYDGATE_GIT_DESCRIBE "unknown"
#endif

namespace rydgate::cli {

namespace {

json axis(double lo, double hi, int points) { return {{"min", lo}, {"max", hi}, {"points", points}}; }

json bracket(double lo, double hi) { return json::array({lo, hi}); }

const std::map<std::string, json>& defaults() {
    static const std::map<std::string, json> table = [] {
        std::map<std::string, json> t;
        t["dynamics"] = {
            {"command", "dynamics"},
            {"system",
             {{"omega0", 0.0}, {"omega_e", 10.0}, {"v", 0.0}, {"delta", 0.0}, {"t_p", 1.0}, {"window_halfwidth", 4.5}}},
            {"tol", 1e-10},
            {"samples_per_period", 40}};
        t["sweep"] = {
            {"command", "sweep"},
            {"tol", 1e-10},
            {"t_p", 1.0},
            {"window_halfwidth", 4.5},
            {"phase_maps",
             {{"enabled", false}, {"omega_e", axis(-50, 50, 201)}, {"omega0", axis(0, 50, 201)}, {"v", 50.0}}},
            {"gate_metrics",
             {{"enabled", false}, {"omega_e", axis(-50, 50, 201)}, {"ratio", axis(0, 1, 201)}, {"v", 50.0}}},
            {"fidelity_landscape",
             {{"enabled", false},
              {"omega_e", axis(0, 50, 201)},
              {"v", axis(0, 150, 201)},
              {"alpha_target_pi", -2.0},
              {"beta_target_pi", -3.0},
              {"omega0_bracket", bracket(0, 100)},
              {"v_bracket", bracket(0, 300)},
              {"locus", true},
              {"locus_above_resonance", true}}}};
        t["optimize"] = {{"command", "optimize"},
                         {"omega_e", 10.0},
                         {"t_p", 1.0},
                         {"window_halfwidth", 4.5},
                         {"alpha_target_pi", -2.0},
                         {"beta_target_pi", -3.0},
                         {"omega0_bracket", bracket(0, 100)},
                         {"v_bracket", bracket(0, 300)},
                         {"v_above_resonance", true},
                         {"tol", 1e-10}};
        t["noise"] = {{"command", "noise"},
                      {"tol", 1e-10},
                      {"design",
                       {{"omega_e", 10.0},
                        {"t_p", 1.0},
                        {"window_halfwidth", 4.5},
                        {"solve", true},
                        {"omega0", 0.0},
                        {"v", 0.0},
                        {"alpha_target_pi", -2.0},
                        {"beta_target_pi", -3.0},
                        {"omega0_bracket", bracket(0, 100)},
                        {"v_bracket", bracket(0, 300)},
                        {"v_above_resonance", true}}},
                      {"relative_error",
                       {{"enabled", true},
                        {"parameters", json::array({"omega0", "v", "omega_e"})},
                        {"epsilon", axis(-0.02, 0.02, 41)}}},
                      {"detuning", {{"enabled", true}, {"delta_over_v", axis(-1e-3, 1e-3, 21)}}},
                      {"monte_carlo",
                       {{"enabled", true},
                        {"sigma_omega0", 0.01},
                        {"sigma_v", 0.03},
                        {"sigma_omega_e", 0.0},
                        {"samples", 1000},
                        {"seed", 12345},
                        {"histogram_bins", 40}}}};
        t["check"] = {{"command", "check"},
                      {"tol", 1e-10},
                      {"seed", 2024},
                      {"cubic_samples", 1000},
                      {"cubic_tolerance", 1e-9},
                      {"subspace_samples", 5},
                      {"subspace_tolerance", 1e-8},
                      {"adiabatic_samples", 10},
                      {"adiabatic_margin_max", 1e-3},
                      {"alpha_tolerance", 1e-3},
                      {"beta_tolerance", 1e-2},
                      {"ae_ratios", json::array({5.0, 10.0, 20.0, 40.0})},
                      {"ae_tolerance", 0.01},
                      {"resonant_tolerance", 1e-3},
                      {"inject_wrong_branch", false}};
        return t;
    }();
    return table;
}

std::string type_name(const json& j) {
    if (j.is_boolean()) return "boolean";
    if (j.is_number_integer()) return "integer";
    if (j.is_number()) return "number";
    if (j.is_string()) return "string";
    if (j.is_array()) return "array";
    if (j.is_object()) return "object";
    return "null";
}

bool compatible(const json& schema, const json& value) {
    if (schema.is_boolean()) return value.is_boolean();
    if (schema.is_number_unsigned()) return value.is_number_unsigned();
    if (schema.is_number_integer()) return value.is_number_integer();
    if (schema.is_number()) return value.is_number();
    if (schema.is_string()) return value.is_string();
    if (schema.is_array()) return value.is_array();
    if (schema.is_object()) return value.is_object();
    return true;
}

void check_against(const json& schema, const json& value, const std::string& path) {
    if (!compatible(schema, value)) {
        throw ConfigError("config key '" + path + "': expected " + type_name(schema) + ", got " + type_name(value));
    }
    if (schema.is_object()) {
        for (const auto& [key, sub] : value.items()) {
            const std::string child = path.empty() ? key : path + "." + key;
            if (!schema.contains(key)) {
                throw ConfigError("unknown config key '" + child + "'");
            }
            check_against(schema.at(key), sub, child);
        }
    } else if (schema.is_array() && !schema.empty()) {
        for (std::size_t i = 0; i < value.size(); ++i) {
            check_against(schema.front(), value[i], path + "[" + std::to_string(i) + "]");
        }
    }
}

}  // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"dynamics", "sweep", "optimize", "noise", "check"};
    return names;
}

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& [name, text] : detail::embedded_presets()) {
            n.push_back(name);
        }
        std::sort(n.begin(), n.end());
        return n;
    }();
    return names;
}

json preset(const std::string& name) {
    for (const auto& [key, text] : detail::embedded_presets()) {
        if (key == name) {
            return json::parse(text);
        }
    }
    throw ConfigError("unknown preset '" + name + "'");
}

json default_config(const std::string& command) {
    const auto it = defaults().find(command);
    if (it == defaults().end()) {
        throw ConfigError("unknown command '" + command + "'");
    }
    return it->second;
}

json resolve_config(const std::string& command, const std::optional<std::string>& preset_name,
                    const std::optional<json>& file_config, const std::optional<std::uint64_t>& seed) {
    const json schema = default_config(command);
    json resolved = schema;
    const auto layer = [&](const json& patch, const std::string& origin) {
        if (!patch.is_object()) {
            throw ConfigError(origin + ": config must be a JSON object");
        }
        check_against(schema, patch, "");
        if (patch.contains("command") && patch.at("command") != command) {
            throw ConfigError(origin + " is for command '" + patch.at("command").get<std::string>() + "', not '" +
                              command + "'");
        }
        resolved.merge_patch(patch);
    };
    if (preset_name) {
        layer(preset(*preset_name), "preset '" + *preset_name + "'");
    }
    if (file_config) {
        layer(*file_config, "config file");
    }
    if (seed) {
        if (command == "noise") {
            resolved["monte_carlo"]["seed"] = *seed;
        } else if (command == "check") {
            resolved["seed"] = *seed;
        }
    }
    check_against(schema, resolved, "");
    return resolved;
}

std::string build_describe() { return RYDGATE_GIT_DESCRIBE; }

}  // namespace rydgate::cli
