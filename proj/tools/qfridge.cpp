#include "qfridge/cli/commands.hpp"
#include "qfridge/cli/config.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

namespace {

using qfridge::cli::FlagValues;
using qfridge::cli::RunConfig;

template <class T>
void opt(CLI::App* app, const std::string& name, std::optional<T>& slot, const std::string& help) {
    app->add_option_function<T>(name, [&slot](const T& v) { slot = v; }, help);
}

void common_flags(CLI::App* app, FlagValues& f) {
    opt(app, "--config", f.config_path, "JSON configuration file");
    opt(app, "--beta-h", f.beta_h, "hot bath inverse temperature");
    opt(app, "--beta-c", f.beta_c, "cold bath inverse temperature");
    opt(app, "--omega-h", f.omega_h, "hot qubit gap");
    opt(app, "--omega-c", f.omega_c, "cold qubit gap");
    opt(app, "--format", f.format, "csv or json");
    opt(app, "--output", f.output, "write results here instead of stdout");
    opt(app, "--tol", f.tol, "numerical tolerance (default 1e-10, env QFRIDGE_TOL)");
    opt(app, "--seed", f.seed, "seed for randomized checks");
    opt(app, "--threads", f.threads, "worker threads (0 = all cores)");
}

}  // namespace

int main(int argc, char** argv) {
    using namespace qfridge::cli;

    CLI::App app{"Two-qubit and catalytic two-stroke refrigerator toolkit"};
    app.require_subcommand(1);
    FlagValues flags;

    struct Sub {
        CLI::App* app;
        int (*run)(const RunConfig&, std::ostream&, std::ostream&);
    };
    std::vector<Sub> subs;

    auto* table1 = app.add_subcommand("table1", "all 24 bare permutations against their closed forms");
    common_flags(table1, flags);
    subs.push_back({table1, cmd_table1});

    auto* simulate = app.add_subcommand("simulate", "energy flows of one permutation");
    common_flags(simulate, flags);
    opt(simulate, "--perm", flags.perm, "pi_opt, pi_1, pi_2, identity or a JSON index array");
    opt(simulate, "--d", flags.d, "catalyst dimension");
    opt(simulate, "--n", flags.n, "pi_2: number of hot-driven links");
    opt(simulate, "--n-prime", flags.n_prime, "pi_2: number of cold-driven links");
    opt(simulate, "--p", flags.p, "catalyst distribution as a JSON array, or 'stationary'");
    opt(simulate, "--epsilon", flags.epsilon, "catalyst level energies as a JSON array");
    subs.push_back({simulate, cmd_simulate});

    auto* search = app.add_subcommand("search", "exhaustive search over all permutations (d = 1 or 2)");
    common_flags(search, flags);
    opt(search, "--d", flags.d, "catalyst dimension");
    subs.push_back({search, cmd_search});

    auto* region = app.add_subcommand("region", "cooling region over temperature and gap ratios");
    common_flags(region, flags);
    opt(region, "--beta-ratios", flags.beta_ratios, "beta_c/beta_h grid: lo:hi:n or a,b,c");
    opt(region, "--omega-ratios", flags.omega_ratios, "omega_c/omega_h grid: lo:hi:n or a,b,c");
    opt(region, "--caps", flags.caps, "largest allowed d/n' values");
    subs.push_back({region, cmd_region});

    auto* curve = app.add_subcommand("cop-curve", "COP of pi_1(d) against d");
    common_flags(curve, flags);
    opt(curve, "--d-max", flags.d_max, "largest d to emit");
    subs.push_back({curve, cmd_cop_curve});

    auto* verify = app.add_subcommand("verify", "run the invariant suite");
    common_flags(verify, flags);
    subs.push_back({verify, cmd_verify});

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        const RunConfig cfg = resolve_config(flags, std::getenv("QFRIDGE_TOL"));
        for (const auto& s : subs) {
            if (!s.app->parsed()) continue;
            if (!cfg.output_path) return s.run(cfg, std::cout, std::cerr);
            // Buffer so a failed run leaves no partial file behind.
            std::ostringstream buffer;
            const int code = s.run(cfg, buffer, std::cerr);
            std::ofstream file(*cfg.output_path, std::ios::binary);
            if (!file) throw ConfigError("output", "cannot write " + *cfg.output_path);
            file << buffer.str();
            return code;
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitConfig;
}
