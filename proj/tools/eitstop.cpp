// eitstop: light storage and retrieval in a Lambda medium.
//
//   eitstop simulate  --config PATH --out DIR [--set k=v]...
//   eitstop sweep     --config PATH --deltas 0:0.6:0.05 --out FILE
//   eitstop linewidth --config PATH [--delta v]... [--out FILE]

#include <iostream>

#include <CLI11.hpp>

#include <eit/cli.hpp>

int main(int argc, char** argv)
{
    CLI::App app{"Maxwell-Bloch simulation and two-photon linewidth analysis "
                 "of EIT light storage"};
    app.set_version_flag("--version", eit::cli::tool_version);
    app.require_subcommand(1);

    eit::cli::SimulateOptions sim;
    auto* simulate = app.add_subcommand(
        "simulate", "storage/retrieval run with snapshots and analytic overlay");
    simulate->add_option("--config", sim.config_path, "configuration file")
        ->required();
    simulate->add_option("--out", sim.out_dir, "output directory")->required();
    simulate->add_option("--set", sim.sets, "override key=value (repeatable)");

    eit::cli::SweepOptions sw;
    auto* sweep = app.add_subcommand(
        "sweep", "integrated output intensity versus two-photon detuning");
    sweep->add_option("--config", sw.config_path, "configuration file")
        ->required();
    sweep->add_option("--deltas", sw.deltas,
                      "start:stop:step or comma list")
        ->capture_default_str();
    sweep->add_option("--out", sw.out_file, "output CSV")->required();
    sweep->add_option("--set", sw.sets, "override key=value (repeatable)");
    sweep->add_option("--threads", sw.threads,
                      "worker threads (0 = hardware concurrency)")
        ->capture_default_str();

    eit::cli::LinewidthOptions lw;
    auto* linewidth = app.add_subcommand(
        "linewidth", "transfer time, two-photon linewidth and loss factors");
    linewidth->add_option("--config", lw.config_path, "configuration file")
        ->required();
    linewidth->add_option("--delta", lw.deltas, "detuning (repeatable)");
    linewidth->add_option("--out", lw.out_file, "report CSV");
    linewidth->add_option("--set", lw.sets, "override key=value (repeatable)");

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : eit::cli::config_failure;
    }

    if (*simulate) return eit::cli::cmd_simulate(sim, std::cout, std::cerr);
    if (*sweep) return eit::cli::cmd_sweep(sw, std::cout, std::cerr);
    return eit::cli::cmd_linewidth(lw, std::cout, std::cerr);
}
