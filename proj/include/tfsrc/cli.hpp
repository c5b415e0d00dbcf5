#pragma once

// Batch entry points behind the `tfsrc` executable.
//
// Exit codes: 0 ok, 2 configuration or domain error, 3 violated assumption,
// 4 numerical failure, 5 non-convergence, 6 verification failure.

#include <iosfwd>

#include "tfsrc/config.hpp"
#include "tfsrc/verify.hpp"

namespace tfsrc {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitAssumption = 3,
  kExitNumeric = 4,
  kExitNoConvergence = 5,
  kExitVerify = 6,
};

/// forward.csv and meta.txt in cfg.output_dir.
int run_forward(const RunConfig& cfg, std::ostream& log);

/// recovered_r.csv, residuals.csv and certificate.txt in cfg.output_dir.
int run_invert(const RunConfig& cfg, std::ostream& log);

/// perturbation.txt in cfg.output_dir.
int run_perturb(const RunConfig& cfg, std::ostream& log);

/// Prints the suite table; also writes verify.txt when `cfg` is given.
int run_verify(const VerifyOptions& options, const RunConfig* cfg, std::ostream& log);

/// Parses the command line and dispatches; errors are mapped to exit codes.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tfsrc
