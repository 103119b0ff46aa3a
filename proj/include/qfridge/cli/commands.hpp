#pragma once

// Subcommand bodies. Each writes its result to `out`, diagnostics to `err`,
// and returns the process exit code.

#include "qfridge/cli/config.hpp"

#include <iosfwd>

namespace qfridge::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 1,      // usage or configuration error
    kExitMismatch = 2,    // a verification check failed
    kExitDegenerate = 3,  // input is valid but the requested quantity is undefined
};

int cmd_table1(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_search(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_region(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_cop_curve(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace qfridge::cli
