#pragma once

// Subcommands: sample-noise, solve, verify. Flags: --config PATH (required),
// --seed N, --out DIR, --threads N.

#include <iosfwd>

#include "stableheat/config.hpp"
#include "stableheat/errors.hpp"

namespace stableheat::cli {

enum ExitCode : int {
    ok = 0,
    internal = 1,
    validation = 2,
    numerical = 3,
    experiment_failed = 4,
    precondition = 5,
    io = 6,
};

int exit_code_for(ErrorClass c);

// Each writes into rc.output_dir and echoes rc.effective there.
int cmd_sample_noise(const config::RunConfig& rc, std::ostream& out);
int cmd_solve(const config::RunConfig& rc, std::ostream& out);
int cmd_verify(const config::RunConfig& rc, std::ostream& out);

// Never throws; errors are reported on `err` and mapped to an exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace stableheat::cli
