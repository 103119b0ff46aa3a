#pragma once

// Run configuration for the command-line front end.
//
// Values are layered: built-in defaults, then the JSON file given by
// --config, then flags. The tolerance also reads QFRIDGE_TOL, which sits
// between the file and the flag.

#include "qfridge/model.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qfridge::cli {

enum class Format { Csv, Json };

/// Malformed input. field() names the offending key or flag.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message);
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

struct PermutationChoice {
    std::string name = "pi_opt";  // pi_opt | pi_1 | pi_2 | identity | explicit
    std::vector<std::int32_t> map;  // explicit only
    std::optional<std::size_t> n;
    std::optional<std::size_t> n_prime;
};

struct RunConfig {
    MachineSpec machine{1.0, 2.0, 2.0, 0.4};
    std::optional<std::size_t> d;
    std::optional<std::vector<double>> p;  // empty means solve for the stationary catalyst
    std::vector<double> epsilon;
    PermutationChoice permutation;
    std::optional<Format> format;  // unset: the command's own default
    std::optional<std::string> output_path;
    double tol = 1e-10;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    std::vector<double> beta_ratios;
    std::vector<double> omega_ratios;
    std::vector<double> caps;
    std::size_t d_max = 16;
};

/// Command-line values; an empty optional means the flag was not given.
struct FlagValues {
    std::optional<std::string> config_path;
    std::optional<double> beta_h, beta_c, omega_h, omega_c, tol;
    std::optional<std::string> format, output, perm, p, epsilon;
    std::optional<std::string> beta_ratios, omega_ratios, caps;
    std::optional<std::size_t> d, n, n_prime, d_max;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
};

/// Applies the layers in order. env_tol is the raw QFRIDGE_TOL value or null.
/// Throws ConfigError.
RunConfig resolve_config(const FlagValues& flags, const char* env_tol);

/// Applies the keys of a parsed JSON document onto `base`. Unknown keys and
/// wrong types are rejected.
RunConfig apply_config_text(RunConfig base, std::string_view json_text);

/// "lo:hi:n" (inclusive linear grid), "x,y,z", or a JSON array.
std::vector<double> parse_grid(std::string_view text, const std::string& field);

/// "pi_opt", "pi_1", "pi_2", "identity", or a JSON array of indices.
PermutationChoice parse_permutation(std::string_view text, const std::string& field);

}  // namespace qfridge::cli
