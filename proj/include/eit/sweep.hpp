#pragma once

// Detuning sweeps: one independent full simulation per delta, integrated
// output intensity of the dark-state polariton at t_end, normalized to the
// delta = 0 run and compared with the analytic intensity loss.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include <eit/analytic.hpp>
#include <eit/config.hpp>
#include <eit/csv.hpp>
#include <eit/propagation.hpp>

namespace eit {

struct SweepSpec
{
    std::vector<real> delta_values;
    SimulationConfig base_config;
    bool normalize_at_zero = true;
};

struct SweepRow
{
    real delta = 0.0;
    real numeric = 0.0;
    real normalized = 0.0;
    real analytic = 0.0;
    real relative_gap = 0.0;
};

struct SweepResult
{
    std::vector<SweepRow> rows;
    real transfer_time = 0.0;
    /// deltas whose simulation failed (their rows hold NaN)
    std::vector<real> failed;
};

/// "a:b:step" inclusive of b up to rounding, or a comma list.
inline std::vector<real> parse_delta_range(const std::string& text)
{
    if (text.find(':') == std::string::npos) {
        std::vector<real> out;
        for (const auto& item : detail::split_list(text)) {
            out.push_back(detail::parse_real("deltas", item));
        }
        if (out.empty()) throw config_error("empty delta list");
        return out;
    }
    const auto parts = detail::split_list(text, ':');
    if (parts.size() != 3) {
        throw config_error("delta range must be start:stop:step");
    }
    const real a = detail::parse_real("deltas", parts[0]);
    const real b = detail::parse_real("deltas", parts[1]);
    const real h = detail::parse_real("deltas", parts[2]);
    if (!(h > 0.0) || !(b >= a) || !std::isfinite(a) || !std::isfinite(b)) {
        throw config_error("delta range needs step > 0 and stop >= start");
    }
    const auto n = static_cast<std::size_t>(std::floor((b - a) / h + 1e-9));
    if (n > 100000) throw config_error("delta range too long");
    std::vector<real> out;
    for (std::size_t i = 0; i <= n; ++i) {
        out.push_back(a + h * static_cast<real>(i));
    }
    return out;
}

/// Integrated |Psi|^2 at t_end for one detuning.
inline real simulate_output_intensity(const SimulationConfig& base,
                                      real delta)
{
    SimulationConfig cfg = base;
    cfg.params = base.params.with_two_photon_detuning(delta);
    cfg.record_times = {cfg.t_end};
    const auto rec = run(cfg);
    return integrated_output_intensity(rec, cfg.t_end);
}

/// Runs every point; `threads` = 0 picks the hardware concurrency. The result
/// does not depend on the thread count.
inline SweepResult run_sweep(const SweepSpec& spec, unsigned threads = 0)
{
    if (spec.delta_values.empty()) {
        throw config_error("sweep needs at least one delta value");
    }
    for (real d : spec.delta_values) {
        if (!std::isfinite(d)) throw config_error("delta values must be finite");
    }

    std::vector<real> deltas = spec.delta_values;
    std::sort(deltas.begin(), deltas.end());
    deltas.erase(std::unique(deltas.begin(), deltas.end()), deltas.end());
    const bool has_zero =
        std::find(deltas.begin(), deltas.end(), 0.0) != deltas.end();
    std::vector<real> jobs = deltas;
    if (spec.normalize_at_zero && !has_zero) jobs.push_back(0.0);

    std::vector<real> values(jobs.size(),
                             std::numeric_limits<real>::quiet_NaN());
    std::vector<char> ok(jobs.size(), 0);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
            try {
                values[i] = simulate_output_intensity(spec.base_config,
                                                      jobs[i]);
                ok[i] = 1;
            }
            catch (const numerical_error&) {
                ok[i] = 0;
            }
        }
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(
        std::min<std::size_t>(threads, jobs.size()));
    if (threads <= 1) {
        worker();
    }
    else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }

    SweepResult result;
    const auto& cfg = spec.base_config;
    result.transfer_time = transfer_time(cfg.schedule, cfg.t_start, cfg.t_end);

    real reference = 1.0;
    if (spec.normalize_at_zero) {
        const auto it = std::find(jobs.begin(), jobs.end(), 0.0);
        reference = values[static_cast<std::size_t>(it - jobs.begin())];
    }
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        SweepRow row;
        row.delta = deltas[i];
        row.numeric = values[i];
        row.normalized = deltas[i] == 0.0 && spec.normalize_at_zero && ok[i]
                             ? 1.0
                             : values[i] / reference;
        row.analytic =
            intensity_loss(deltas[i], result.transfer_time, cfg.params);
        row.relative_gap = (row.normalized - row.analytic) / row.analytic;
        if (!ok[i]) result.failed.push_back(deltas[i]);
        result.rows.push_back(row);
    }
    return result;
}

/// Best exponent p in {1, 2} for normalized ~ exp(-p gamma delta^2 T/g^2N),
/// by least squares over the finite rows.
inline int fit_loss_power(const std::vector<SweepRow>& rows, real T,
                          const PhysicalParams& params)
{
    int best = 1;
    real best_cost = std::numeric_limits<real>::infinity();
    for (int p : {1, 2}) {
        real cost = 0.0;
        for (const auto& r : rows) {
            if (!std::isfinite(r.normalized)) continue;
            const real model =
                std::pow(loss_factor_from_T(r.delta, T, params), p);
            cost += (r.normalized - model) * (r.normalized - model);
        }
        if (cost < best_cost) {
            best_cost = cost;
            best = p;
        }
    }
    return best;
}

inline CsvTable sweep_table(const SweepResult& result)
{
    CsvTable t;
    t.header = {"delta", "numeric_integrated_intensity", "normalized_numeric",
                "analytic_prediction", "relative_gap"};
    for (const auto& r : result.rows) {
        t.add_row({r.delta, r.numeric, r.normalized, r.analytic,
                   r.relative_gap});
    }
    return t;
}

} // namespace eit
