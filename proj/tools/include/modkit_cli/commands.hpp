#pragma once

#include <string>
#include <vector>

#include "modkit_cli/instance.hpp"
#include "modkit_cli/report.hpp"

namespace modkit::cli {

struct Options {
    TolerancePatch flags;
    double inject_noise = 0.0;  // represent: perturb pi_X by this operator-norm scale
    bool basis = false;         // compacts/adjointables: list basis matrices
};

const std::vector<std::string>& command_names();

/// Defaults, then MODKIT_TOL_RANK, then the file, then the flags.
Tolerances resolve_tolerances(const TolerancePatch& file, const TolerancePatch& flags);

/// `args` is the instance path followed by identifiers, or the order n for `daws`.
/// Never throws; errors become report entries or the report's error field.
Report run_command(const std::string& command, const std::vector<std::string>& args,
                   const Options& opts);

}  // namespace modkit::cli
