#include "modkit_cli/app.hpp"

#include <sstream>

#include <CLI11.hpp>

#include "modkit_cli/commands.hpp"

namespace modkit::cli {

RunResult run_cli(const std::vector<std::string>& argv) {
    CLI::App app{"modkit: finite-dimensional Hilbert C*-module toolkit", "modkit"};
    std::string command;
    std::vector<std::string> args;
    std::string format = "text";
    Options opts;
    double rank = 0.0, eq = 0.0, orth = 0.0, psd = 0.0;

    app.add_option("command", command, "validate|compacts|adjointables|represent|bimodule-check|ideal-check|tensor|daws")
        ->required()
        ->check(CLI::IsMember(command_names()));
    app.add_option("args", args, "instance file followed by identifiers; the order n for daws");
    auto* o_rank = app.add_option("--tol-rank", rank, "relative singular-value cutoff");
    auto* o_eq = app.add_option("--tol-eq", eq, "identity residual tolerance");
    auto* o_orth = app.add_option("--tol-orth", orth, "orthonormality tolerance");
    auto* o_psd = app.add_option("--tol-psd", psd, "positivity eigenvalue floor");
    app.add_option("--format", format, "report format")->check(CLI::IsMember({"text", "json"}));
    app.add_option("--inject-noise", opts.inject_noise, "represent: perturb pi_X at this scale");
    app.add_flag("--basis", opts.basis, "list basis matrices");

    RunResult result;
    std::vector<std::string> reversed(argv.rbegin(), argv.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        std::ostringstream out, err;
        const int code = app.exit(e, out, err);
        result.out = out.str();
        result.err = err.str();
        result.status = code == 0 ? 0 : 2;
        return result;
    }
    if (*o_rank) opts.flags.rank = rank;
    if (*o_eq) opts.flags.eq = eq;
    if (*o_orth) opts.flags.orth = orth;
    if (*o_psd) opts.flags.psd = psd;

    const Report report = run_command(command, args, opts);
    result.out = report.render(format == "json");
    if (report.error) result.err = "modkit: " + *report.error + "\n";
    result.status = report.status();
    return result;
}

}  // namespace modkit::cli
