#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"shortcut-to-equilibration designer and damped-oscillator benchmark"};
    app.require_subcommand(1);

    ste::cli::CommonArgs args;
    std::string method;
    double t_f = -1.0;

    auto add_common = [&](CLI::App* cmd, bool needs_protocol) {
        cmd->add_option("--config", args.config_path, "run configuration (JSON)")->required();
        cmd->add_option("--out", args.out_dir, "output directory");
        cmd->add_option("--jobs", args.jobs_override, "worker threads (0 = all cores)");
        cmd->add_option("--method", method, "master|exact|both");
        if (needs_protocol)
            cmd->add_option("--protocol", args.protocol_path,
                            "protocol file (falls back to the config's protocol block)");
    };

    CLI::App* design = app.add_subcommand("design", "reverse-engineer an STE protocol");
    add_common(design, false);
    design->add_option("--t-f", t_f, "protocol duration");
    design->add_flag("--trace", args.with_trace, "include the optimizer trace in the output");

    CLI::App* simulate = app.add_subcommand("simulate", "propagate a protocol and emit CSVs");
    add_common(simulate, true);
    simulate->add_flag("--dump-final-sigma", args.dump_final_sigma,
                       "write the full final covariance matrix (binary) next to the CSVs");

    CLI::App* sweep = app.add_subcommand("sweep", "fidelity vs duration for a protocol family");
    add_common(sweep, false);

    CLI::App* validate = app.add_subcommand("validate", "timescale validity report");
    add_common(validate, true);

    CLI11_PARSE(app, argc, argv);

    try {
        if (!method.empty()) args.method_override = ste::cli::method_from_string(method);
        if (design->parsed()) return ste::cli::cmd_design(args, t_f);
        if (simulate->parsed()) return ste::cli::cmd_simulate(args);
        if (sweep->parsed()) return ste::cli::cmd_sweep(args);
        if (validate->parsed()) return ste::cli::cmd_validate(args);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 1;
}
