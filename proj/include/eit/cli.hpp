#pragma once

// Subcommands of the command-line tool. Each returns a process exit code:
// 0 ok, 1 config/usage, 2 numerical failure, 3 I/O.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <eit/analytic.hpp>
#include <eit/config.hpp>
#include <eit/csv.hpp>
#include <eit/propagation.hpp>
#include <eit/sweep.hpp>

namespace eit::cli {

inline constexpr const char* tool_version = "0.1.0";

enum exit_code : int
{
    ok = 0,
    config_failure = 1,
    numerical_failure = 2,
    io_failure = 3,
};

/// FNV-1a, stable across platforms and runs.
inline std::uint64_t fnv1a(const std::string& s)
{
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex(std::uint64_t v)
{
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(v));
    return buf;
}

inline void write_metadata(const std::string& path, const std::string& command,
                           const SimulationConfig& cfg,
                           const std::vector<std::string>& extra = {})
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    out << "tool = eitstop\n";
    out << "tool_version = " << tool_version << '\n';
    out << "command = " << command << '\n';
    out << "config_hash = " << hex(fnv1a(serialize_config(cfg))) << '\n';
    for (const auto& w : cfg.warnings) out << "warning = " << w << '\n';
    for (const auto& e : extra) out << e << '\n';
    if (!out) throw io_error("write to '" + path + "' failed");
}

/// Substitutes {t} in a file pattern with a compact time label.
inline std::string expand_pattern(const std::string& pattern, real t)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%g", t);
    std::string out = pattern;
    const std::string key = "{t}";
    for (auto pos = out.find(key); pos != std::string::npos;
         pos = out.find(key, pos)) {
        out.replace(pos, key.size(), buf);
        pos += std::char_traits<char>::length(buf);
    }
    return out;
}

inline CsvTable analytic_table(std::span<const cplx> psi, const Grid& grid)
{
    CsvTable t;
    t.header = {"z", "re_psi", "im_psi", "abs_psi_sq"};
    for (std::size_t i = 0; i < grid.n_points; ++i) {
        t.add_row({grid.z(i), psi[i].real(), psi[i].imag(),
                   std::norm(psi[i])});
    }
    return t;
}

struct SimulateOptions
{
    std::string config_path;
    std::string out_dir;
    std::vector<std::string> sets;
};

inline int cmd_simulate(const SimulateOptions& opt, std::ostream& log,
                        std::ostream& err)
{
    SimulationConfig cfg;
    try {
        cfg = load_config_file(opt.config_path, opt.sets);
    }
    catch (const std::exception& e) {
        err << "config error: " << e.what() << '\n';
        return config_failure;
    }
    for (const auto& w : cfg.warnings) err << "warning: " << w << '\n';

    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(opt.out_dir, ec);
    if (ec) {
        err << "cannot create output directory '" << opt.out_dir
            << "': " << ec.message() << '\n';
        return io_failure;
    }

    TrajectoryRecord rec;
    std::vector<std::vector<cplx>> overlays;
    try {
        rec = run(cfg);
        const auto& first = rec.snapshots.front();
        for (std::size_t i = 0; i < rec.times.size(); ++i) {
            auto r = second_order_evolve(first.polaritons.psi, cfg.grid,
                                         cfg.params.delta_two_photon,
                                         cfg.schedule, cfg.params,
                                         rec.times.front(), rec.times[i]);
            if (r.under_resolved) {
                err << "warning: analytic overlay at t = " << rec.times[i]
                    << " is under-resolved (Nyquist ratio "
                    << r.nyquist_ratio << ")\n";
            }
            overlays.push_back(std::move(r.psi));
        }
    }
    catch (const numerical_error& e) {
        err << "numerical failure: " << e.what() << '\n';
        return numerical_failure;
    }

    try {
        const fs::path dir(opt.out_dir);
        for (std::size_t i = 0; i < rec.times.size(); ++i) {
            const auto name = expand_pattern(cfg.snapshot_pattern,
                                             rec.times[i]);
            write_csv(snapshot_table(rec.snapshots[i], cfg.grid),
                      (dir / name).string());
            write_csv(analytic_table(overlays[i], cfg.grid),
                      (dir / ("analytic_" + name)).string());
            log << "wrote " << (dir / name).string() << '\n';
        }
        write_csv(diagnostics_table(rec),
                  (dir / cfg.diagnostics_file).string());
        write_metadata((dir / "run.meta").string(), "simulate", cfg);
    }
    catch (const std::exception& e) {
        err << "I/O failure: " << e.what() << '\n';
        return io_failure;
    }
    return ok;
}

struct SweepOptions
{
    std::string config_path;
    std::string deltas = "0:0.6:0.05";
    std::string out_file;
    std::vector<std::string> sets;
    unsigned threads = 0;
};

inline int cmd_sweep(const SweepOptions& opt, std::ostream& log,
                     std::ostream& err)
{
    SweepSpec spec;
    try {
        spec.base_config = load_config_file(opt.config_path, opt.sets);
        spec.delta_values = parse_delta_range(opt.deltas);
    }
    catch (const std::exception& e) {
        err << "config error: " << e.what() << '\n';
        return config_failure;
    }

    SweepResult result;
    try {
        result = run_sweep(spec, opt.threads);
    }
    catch (const config_error& e) {
        err << "config error: " << e.what() << '\n';
        return config_failure;
    }
    catch (const numerical_error& e) {
        err << "numerical failure: " << e.what() << '\n';
        return numerical_failure;
    }

    try {
        write_csv(sweep_table(result), opt.out_file);
        write_metadata(opt.out_file + ".meta", "sweep", spec.base_config,
                       {"deltas = " + opt.deltas,
                        "transfer_time = " +
                            detail::number(result.transfer_time),
                        "intensity_loss_power = " +
                            std::to_string(intensity_loss_power)});
    }
    catch (const std::exception& e) {
        err << "I/O failure: " << e.what() << '\n';
        return io_failure;
    }
    log << "wrote " << opt.out_file << " (" << result.rows.size()
        << " rows)\n";
    if (!result.failed.empty()) {
        err << result.failed.size() << " sweep point(s) failed\n";
        return numerical_failure;
    }
    return ok;
}

struct LinewidthOptions
{
    std::string config_path;
    std::vector<real> deltas;
    std::string out_file;
    std::vector<std::string> sets;
};

inline int cmd_linewidth(const LinewidthOptions& opt, std::ostream& log,
                         std::ostream& err)
{
    SimulationConfig cfg;
    try {
        ValidationOptions v;
        v.check_time_step = false;
        cfg = load_config_file(opt.config_path, opt.sets, v);
    }
    catch (const std::exception& e) {
        err << "config error: " << e.what() << '\n';
        return config_failure;
    }

    CsvTable table;
    table.header = {"delta", "loss_factor", "eps1",
                    "eps2",  "gamma_T",     "delta_2ph"};
    try {
        const auto& p = cfg.params;
        const real T = transfer_time(cfg.schedule, cfg.t_start, cfg.t_end);
        const real width = two_photon_linewidth(p, T);
        const real gamma_t = p.gamma_ab * T;
        const real eps1 = 1.0 / (p.g_sqrt_n * T);

        log << "T = " << detail::number(T) << '\n'
            << "gamma_T = " << detail::number(gamma_t) << '\n'
            << "eps1 = " << detail::number(eps1) << '\n'
            << "delta_2ph = " << detail::number(width) << '\n';

        for (const auto& w : diagnostics(cfg).warnings) {
            err << "warning: " << w << '\n';
        }

        std::vector<real> deltas = opt.deltas;
        if (deltas.empty()) deltas.push_back(p.delta_two_photon);
        for (real d : deltas) {
            const real lf = loss_factor_from_T(d, T, p);
            const real eps2 = std::abs(d) / p.g_sqrt_n;
            log << "delta = " << detail::number(d)
                << "  loss_factor = " << detail::number(lf)
                << "  eps2 = " << detail::number(eps2) << '\n';
            table.add_row({d, lf, eps1, eps2, gamma_t, width});
        }
    }
    catch (const numerical_error& e) {
        err << "error: " << e.what() << '\n';
        return config_failure;
    }

    if (!opt.out_file.empty()) {
        try {
            write_csv(table, opt.out_file);
            write_metadata(opt.out_file + ".meta", "linewidth", cfg);
        }
        catch (const std::exception& e) {
            err << "I/O failure: " << e.what() << '\n';
            return io_failure;
        }
    }
    return ok;
}

} // namespace eit::cli
