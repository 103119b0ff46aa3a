#include "qfridge/cli/config.hpp"

#include "qfridge/regions.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace qfridge::cli {

using nlohmann::json;

ConfigError::ConfigError(std::string field, const std::string& message)
    : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

namespace {

double parse_double(std::string_view text, const std::string& field) {
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
        throw ConfigError(field, "expected a number, got '" + std::string(text) + "'");
    }
    return v;
}

std::size_t parse_count(std::string_view text, const std::string& field) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ConfigError(field, "expected a non-negative integer, got '" + std::string(text) + "'");
    }
    return v;
}

json parse_json(std::string_view text, const std::string& field) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(field, std::string("invalid JSON: ") + e.what());
    }
}

double number(const json& j, const std::string& field) {
    if (!j.is_number()) throw ConfigError(field, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ConfigError(field, "must be finite");
    return v;
}

std::uint64_t unsigned_integer(const json& j, const std::string& field) {
    if (!j.is_number_unsigned()) throw ConfigError(field, "expected a non-negative integer");
    return j.get<std::uint64_t>();
}

std::vector<double> number_array(const json& j, const std::string& field) {
    if (!j.is_array()) throw ConfigError(field, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], field + "[" + std::to_string(i) + "]"));
    return out;
}

std::vector<double> grid_value(const json& j, const std::string& field) {
    if (j.is_string()) return parse_grid(j.get<std::string>(), field);
    auto g = number_array(j, field);
    if (g.empty()) throw ConfigError(field, "grid is empty");
    return g;
}

PermutationChoice permutation_value(const json& j, const std::string& field) {
    if (j.is_string() || j.is_array()) return parse_permutation(j.dump(), field);
    if (!j.is_object()) throw ConfigError(field, "expected a name, an index array or an object");
    PermutationChoice choice;
    for (const auto& [key, value] : j.items()) {
        const std::string f = field + "." + key;
        if (key == "name") {
            if (!value.is_string()) throw ConfigError(f, "expected a string");
            const auto named = parse_permutation(value.dump(), f);
            choice.name = named.name;
            choice.map = named.map;
        } else if (key == "n") {
            choice.n = unsigned_integer(value, f);
        } else if (key == "n_prime") {
            choice.n_prime = unsigned_integer(value, f);
        } else {
            throw ConfigError(f, "unknown field");
        }
    }
    return choice;
}

Format format_value(std::string_view text, const std::string& field) {
    if (text == "csv") return Format::Csv;
    if (text == "json") return Format::Json;
    throw ConfigError(field, "expected 'csv' or 'json', got '" + std::string(text) + "'");
}

// Non-stationary p values; "stationary" clears them.
std::optional<std::vector<double>> p_value(const json& j, const std::string& field) {
    if (j.is_string()) {
        if (j.get<std::string>() == "stationary") return std::nullopt;
        throw ConfigError(field, "expected \"stationary\" or an array of probabilities");
    }
    return number_array(j, field);
}

struct MachineFields {
    double beta_h, beta_c, omega_h, omega_c;
};

MachineSpec build_machine(const MachineFields& m) {
    try {
        return MachineSpec(m.beta_h, m.beta_c, m.omega_h, m.omega_c);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("machine", e.what());
    }
}

MachineFields fields_of(const MachineSpec& s) { return {s.beta_h(), s.beta_c(), s.omega_h(), s.omega_c()}; }

template <class F>
void each_key(const json& j, const std::string& field, F&& f) {
    if (!j.is_object()) throw ConfigError(field, "expected an object");
    for (const auto& [key, value] : j.items()) f(key, value, field + "." + key);
}

}  // namespace

std::vector<double> parse_grid(std::string_view text, const std::string& field) {
    if (!text.empty() && text.front() == '[') return grid_value(parse_json(text, field), field);
    std::vector<std::string> parts;
    const char sep = text.find(':') != std::string_view::npos ? ':' : ',';
    std::string item;
    std::istringstream in{std::string(text)};
    while (std::getline(in, item, sep)) parts.push_back(item);
    if (sep == ':') {
        if (parts.size() != 3) throw ConfigError(field, "range must look like lo:hi:n");
        const double lo = parse_double(parts[0], field);
        const double hi = parse_double(parts[1], field);
        const std::size_t n = parse_count(parts[2], field);
        if (n == 0) throw ConfigError(field, "grid is empty");
        if (hi < lo) throw ConfigError(field, "range upper bound is below the lower bound");
        return linear_grid(lo, hi, n);
    }
    std::vector<double> out;
    for (const auto& p : parts) out.push_back(parse_double(p, field));
    if (out.empty()) throw ConfigError(field, "grid is empty");
    return out;
}

PermutationChoice parse_permutation(std::string_view text, const std::string& field) {
    std::string_view name = text;
    if (name.size() >= 2 && name.front() == '"' && name.back() == '"') name = name.substr(1, name.size() - 2);
    PermutationChoice choice;
    if (name == "pi_opt" || name == "pi_1" || name == "pi_2" || name == "identity") {
        choice.name = std::string(name);
        return choice;
    }
    if (text.empty() || text.front() != '[') {
        throw ConfigError(field, "expected pi_opt, pi_1, pi_2, identity or a JSON index array");
    }
    const json j = parse_json(text, field);
    if (!j.is_array() || j.empty()) throw ConfigError(field, "expected a non-empty index array");
    choice.name = "explicit";
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string f = field + "[" + std::to_string(i) + "]";
        const std::uint64_t v = unsigned_integer(j[i], f);
        if (v >= j.size()) throw ConfigError(f, "index out of range");
        if (std::find(choice.map.begin(), choice.map.end(), static_cast<std::int32_t>(v)) != choice.map.end()) {
            throw ConfigError(f, "index repeated");
        }
        choice.map.push_back(static_cast<std::int32_t>(v));
    }
    return choice;
}

RunConfig apply_config_text(RunConfig cfg, std::string_view json_text) {
    const json root = parse_json(json_text, "config");
    if (!root.is_object()) throw ConfigError("config", "top level must be an object");
    MachineFields machine = fields_of(cfg.machine);

    for (const auto& [key, value] : root.items()) {
        if (key == "machine") {
            each_key(value, key, [&](const std::string& k, const json& v, const std::string& f) {
                if (k == "beta_h") machine.beta_h = number(v, f);
                else if (k == "beta_c") machine.beta_c = number(v, f);
                else if (k == "omega_h") machine.omega_h = number(v, f);
                else if (k == "omega_c") machine.omega_c = number(v, f);
                else throw ConfigError(f, "unknown field");
            });
        } else if (key == "catalyst") {
            each_key(value, key, [&](const std::string& k, const json& v, const std::string& f) {
                if (k == "d") cfg.d = unsigned_integer(v, f);
                else if (k == "p") cfg.p = p_value(v, f);
                else if (k == "epsilon") cfg.epsilon = number_array(v, f);
                else throw ConfigError(f, "unknown field");
            });
        } else if (key == "permutation") {
            cfg.permutation = permutation_value(value, key);
        } else if (key == "output") {
            each_key(value, key, [&](const std::string& k, const json& v, const std::string& f) {
                if (!v.is_string()) throw ConfigError(f, "expected a string");
                if (k == "format") cfg.format = format_value(v.get<std::string>(), f);
                else if (k == "path") cfg.output_path = v.get<std::string>();
                else throw ConfigError(f, "unknown field");
            });
        } else if (key == "tol") {
            cfg.tol = number(value, key);
        } else if (key == "seed") {
            cfg.seed = unsigned_integer(value, key);
        } else if (key == "threads") {
            cfg.threads = static_cast<unsigned>(unsigned_integer(value, key));
        } else if (key == "region") {
            each_key(value, key, [&](const std::string& k, const json& v, const std::string& f) {
                if (k == "beta_ratios") cfg.beta_ratios = grid_value(v, f);
                else if (k == "omega_ratios") cfg.omega_ratios = grid_value(v, f);
                else if (k == "caps") cfg.caps = grid_value(v, f);
                else throw ConfigError(f, "unknown field");
            });
        } else if (key == "cop_curve") {
            each_key(value, key, [&](const std::string& k, const json& v, const std::string& f) {
                if (k == "d_max") cfg.d_max = unsigned_integer(v, f);
                else throw ConfigError(f, "unknown field");
            });
        } else {
            throw ConfigError(key, "unknown field");
        }
    }
    cfg.machine = build_machine(machine);
    return cfg;
}

RunConfig resolve_config(const FlagValues& flags, const char* env_tol) {
    RunConfig cfg;
    cfg.beta_ratios = linear_grid(0.5, 5.0, 50);
    cfg.omega_ratios = linear_grid(0.05, 3.0, 50);
    cfg.caps = {1.0, 2.0, 4.0, 8.0};

    if (flags.config_path) {
        std::ifstream in(*flags.config_path);
        if (!in) throw ConfigError("config", "cannot read " + *flags.config_path);
        std::ostringstream text;
        text << in.rdbuf();
        cfg = apply_config_text(std::move(cfg), text.str());
    }
    if (env_tol && *env_tol) cfg.tol = parse_double(env_tol, "QFRIDGE_TOL");

    MachineFields machine = fields_of(cfg.machine);
    if (flags.beta_h) machine.beta_h = *flags.beta_h;
    if (flags.beta_c) machine.beta_c = *flags.beta_c;
    if (flags.omega_h) machine.omega_h = *flags.omega_h;
    if (flags.omega_c) machine.omega_c = *flags.omega_c;
    cfg.machine = build_machine(machine);

    if (flags.tol) cfg.tol = *flags.tol;
    if (flags.format) cfg.format = format_value(*flags.format, "--format");
    if (flags.output) cfg.output_path = *flags.output;
    if (flags.perm) cfg.permutation = parse_permutation(*flags.perm, "--perm");
    if (flags.n) cfg.permutation.n = *flags.n;
    if (flags.n_prime) cfg.permutation.n_prime = *flags.n_prime;
    if (flags.d) cfg.d = *flags.d;
    if (flags.p) {
        cfg.p = *flags.p == "stationary" ? std::nullopt : p_value(parse_json(*flags.p, "--p"), "--p");
    }
    if (flags.epsilon) cfg.epsilon = number_array(parse_json(*flags.epsilon, "--epsilon"), "--epsilon");
    if (flags.seed) cfg.seed = *flags.seed;
    if (flags.threads) cfg.threads = *flags.threads;
    if (flags.beta_ratios) cfg.beta_ratios = parse_grid(*flags.beta_ratios, "--beta-ratios");
    if (flags.omega_ratios) cfg.omega_ratios = parse_grid(*flags.omega_ratios, "--omega-ratios");
    if (flags.caps) cfg.caps = parse_grid(*flags.caps, "--caps");
    if (flags.d_max) cfg.d_max = *flags.d_max;

    if (!(cfg.tol > 0.0) || !std::isfinite(cfg.tol)) throw ConfigError("tol", "must be positive and finite");
    return cfg;
}

}  // namespace qfridge::cli
