#pragma once

// Co-integration of the field equation (d/dt + c d/dz) E = i g N rho_ab with
// the Bloch equations on the periodic grid.
//
// One step of length dt = dz / c is Strang-split:
//   (a) local update over dt/2: at every z, E and the atoms evolve under
//       dE/dt = i g N rho_ab plus the Bloch right-hand side (RK4, `substeps`
//       substeps), transport frozen;
//   (b) exact transport: circular shift of E by one cell in +z;
//   (c) local update over the second dt/2.

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <eit/bloch.hpp>
#include <eit/config.hpp>
#include <eit/csv.hpp>
#include <eit/core.hpp>
#include <eit/polariton.hpp>
#include <eit/schedule.hpp>

namespace eit {

struct Snapshot
{
    MediumState state;
    PolaritonField polaritons;
};

struct StepDiagnostics
{
    std::size_t step = 0;
    real t = 0.0;
    real trace_err = 0.0;
    real psi_norm = 0.0;
    real e_norm = 0.0;
};

struct TrajectoryRecord
{
    Grid grid;
    std::vector<real> times;
    std::vector<Snapshot> snapshots;
    std::vector<StepDiagnostics> diagnostics;

    const Snapshot& at(real t) const
    {
        for (std::size_t i = 0; i < times.size(); ++i) {
            if (std::abs(times[i] - t) <= 1e-9 * std::max(1.0, std::abs(t))) {
                return snapshots[i];
            }
        }
        throw std::out_of_range("no snapshot recorded at t = " +
                                std::to_string(t));
    }
};

/// Atoms in the dark state of the initial drive with the configured pulse.
inline MediumState initialize_state(const SimulationConfig& cfg)
{
    const auto& p = cfg.params;
    const real omega = rabi_frequency(cfg.schedule, cfg.t_start, p);
    if (!(omega > 0.0)) {
        throw config_error("dark-state initialization undefined: "
                           "Omega(t_start) = 0 (theta = pi/2)");
    }
    if (!std::isfinite(omega)) {
        throw config_error("dark-state initialization undefined: "
                           "Omega(t_start) is infinite (theta = 0)");
    }

    const std::size_t n = cfg.grid.n_points;
    MediumState s;
    s.t = cfg.t_start;
    s.efield.resize(n);
    s.atoms.assign(n, AtomState{});
    const real g = p.g_single();
    for (std::size_t i = 0; i < n; ++i) {
        const cplx e = cfg.pulse.envelope(cfg.grid.z(i));
        s.efield[i] = e;
        const cplx ge = g * e;
        if (cfg.mode == PropagationMode::weak_probe) {
            s.atoms[i].rho_cb = -ge / omega;
        }
        else {
            // normalized |D> ~ Omega |b> - g E |c>
            const real norm = omega * omega + std::norm(ge);
            s.atoms[i].rho_bb = omega * omega / norm;
            s.atoms[i].rho_cc = std::norm(ge) / norm;
            s.atoms[i].rho_cb = -ge * omega / norm;
        }
    }
    return s;
}

namespace detail {

struct LocalState
{
    cplx efield;
    AtomState atoms;
};

inline LocalState axpy(const LocalState& y, real h, const LocalState& k)
{
    LocalState r = y;
    r.efield += h * k.efield;
    r.atoms += h * k.atoms;
    return r;
}

} // namespace detail

/**
 * Integrates the local (pointwise) part of the dynamics over `duration`
 * starting at time t0, in place.
 */
inline void local_update(MediumState& s, real t0, real duration,
                         const ControlSchedule& schedule,
                         const SimulationConfig& cfg)
{
    const auto& p = cfg.params;
    const int m = cfg.substeps;
    const real h = duration / m;
    const real gn = p.g_n();

    // Omega at every RK node: t0 + j h / 2, j = 0 .. 2m
    std::vector<real> omega(2 * m + 1);
    for (int j = 0; j <= 2 * m; ++j) {
        omega[j] = rabi_frequency(schedule, t0 + 0.5 * h * j, p);
    }

    const bool linear = cfg.mode == PropagationMode::weak_probe;
    auto rhs = [&](const detail::LocalState& y, real om) {
        detail::LocalState d;
        d.efield = I * gn * y.atoms.rho_ab;
        d.atoms = linear ? bloch_rhs_linear(y.atoms, y.efield, om, p)
                         : bloch_rhs_full(y.atoms, y.efield, om, p);
        return d;
    };

    const std::size_t n = s.efield.size();
    for (std::size_t i = 0; i < n; ++i) {
        detail::LocalState y{s.efield[i], s.atoms[i]};
        for (int k = 0; k < m; ++k) {
            const real o0 = omega[2 * k];
            const real o1 = omega[2 * k + 1];
            const real o2 = omega[2 * k + 2];
            const auto k1 = rhs(y, o0);
            const auto k2 = rhs(detail::axpy(y, 0.5 * h, k1), o1);
            const auto k3 = rhs(detail::axpy(y, 0.5 * h, k2), o1);
            const auto k4 = rhs(detail::axpy(y, h, k3), o2);
            y.efield += (h / 6.0) *
                        (k1.efield + 2.0 * k2.efield + 2.0 * k3.efield +
                         k4.efield);
            y.atoms += (h / 6.0) * (k1.atoms + 2.0 * k2.atoms +
                                    2.0 * k3.atoms + k4.atoms);
        }
        s.efield[i] = y.efield;
        s.atoms[i] = y.atoms;
    }
}

/// Exact transport by one cell in +z.
inline void advect_one_cell(std::vector<cplx>& efield)
{
    std::rotate(efield.rbegin(), efield.rbegin() + 1, efield.rend());
}

/// Dark/bright polaritons of a state at its current time.
inline PolaritonField polaritons_of(const MediumState& s,
                                    const ControlSchedule& schedule,
                                    const SimulationConfig& cfg)
{
    std::vector<cplx> rho_cb(s.atoms.size());
    for (std::size_t i = 0; i < s.atoms.size(); ++i) {
        rho_cb[i] = s.atoms[i].rho_cb;
    }
    const auto m = mixing_angle(schedule, s.t);
    return to_polaritons(s.efield, rho_cb, m.theta, cfg.grid, cfg.params);
}

/// Advances by one Strang step; throws numerical_error on non-finite data.
inline void step(MediumState& s, const ControlSchedule& schedule,
                 const SimulationConfig& cfg, std::size_t step_index)
{
    const real t0 = s.t;
    const real half = 0.5 * cfg.dt;
    local_update(s, t0, half, schedule, cfg);
    advect_one_cell(s.efield);
    local_update(s, t0 + half, half, schedule, cfg);
    s.t = cfg.time_at(step_index + 1);

    for (std::size_t i = 0; i < s.efield.size(); ++i) {
        const auto& a = s.atoms[i];
        const bool ok = std::isfinite(s.efield[i].real()) &&
                        std::isfinite(s.efield[i].imag()) &&
                        std::isfinite(a.rho_aa) && std::isfinite(a.rho_bb) &&
                        std::isfinite(a.rho_cc) &&
                        std::isfinite(std::abs(a.rho_ab)) &&
                        std::isfinite(std::abs(a.rho_ac)) &&
                        std::isfinite(std::abs(a.rho_cb));
        if (!ok) {
            throw numerical_error("non-finite value at z-index " +
                                  std::to_string(i) + ", t = " +
                                  std::to_string(s.t));
        }
    }
}

inline StepDiagnostics diagnose(const MediumState& s,
                                const ControlSchedule& schedule,
                                const SimulationConfig& cfg,
                                std::size_t step_index)
{
    StepDiagnostics d;
    d.step = step_index;
    d.t = s.t;
    const auto m = mixing_angle(schedule, s.t);
    const real sn = std::sin(m.theta) * std::sqrt(cfg.params.n_atoms);
    const real c = std::cos(m.theta);
    real psi = 0.0;
    real e = 0.0;
    for (std::size_t i = 0; i < s.efield.size(); ++i) {
        const auto& a = s.atoms[i];
        if (cfg.mode == PropagationMode::full_bloch) {
            d.trace_err = std::max(d.trace_err, std::abs(a.trace() - 1.0));
        }
        psi += std::norm(c * s.efield[i] - sn * a.rho_cb);
        e += std::norm(s.efield[i]);
    }
    const real dz = cfg.grid.dz();
    d.psi_norm = psi * dz;
    d.e_norm = e * dz;
    return d;
}

/// Optional per-step observer, e.g. for progress reporting.
using StepObserver = std::function<void(const MediumState&,
                                        const StepDiagnostics&)>;

inline TrajectoryRecord run(const SimulationConfig& cfg,
                            const StepObserver& observer = {})
{
    TrajectoryRecord rec;
    rec.grid = cfg.grid;
    MediumState s = initialize_state(cfg);
    const std::size_t n_steps = cfg.step_count();

    std::size_t next_record = 0;
    auto maybe_record = [&](std::size_t k) {
        while (next_record < cfg.record_times.size()) {
            const real tr = cfg.record_times[next_record];
            const auto kr = static_cast<std::size_t>(
                std::llround((tr - cfg.t_start) / cfg.dt));
            if (kr != k) break;
            rec.times.push_back(tr);
            rec.snapshots.push_back({s, polaritons_of(s, cfg.schedule, cfg)});
            ++next_record;
        }
    };

    maybe_record(0);
    rec.diagnostics.reserve(n_steps + 1);
    rec.diagnostics.push_back(diagnose(s, cfg.schedule, cfg, 0));
    for (std::size_t k = 0; k < n_steps; ++k) {
        step(s, cfg.schedule, cfg, k);
        rec.diagnostics.push_back(diagnose(s, cfg.schedule, cfg, k + 1));
        if (observer) observer(s, rec.diagnostics.back());
        maybe_record(k + 1);
    }
    return rec;
}

/// dz * sum |Psi_n|^2 at a recorded time.
inline real integrated_output_intensity(const TrajectoryRecord& record,
                                        real t_out)
{
    const auto& snap = record.at(t_out);
    real sum = 0.0;
    for (const auto& v : snap.polaritons.psi) sum += std::norm(v);
    return sum * record.grid.dz();
}

/// Columns z, re_E, im_E, re_rho_cb, im_rho_cb, re_psi, im_psi, abs_psi_sq.
inline CsvTable snapshot_table(const Snapshot& snap, const Grid& grid)
{
    CsvTable t;
    t.header = {"z",      "re_E",   "im_E",   "re_rho_cb",
                "im_rho_cb", "re_psi", "im_psi", "abs_psi_sq"};
    t.rows.reserve(grid.n_points);
    for (std::size_t i = 0; i < grid.n_points; ++i) {
        const cplx e = snap.state.efield[i];
        const cplx r = snap.state.atoms[i].rho_cb;
        const cplx psi = snap.polaritons.psi[i];
        t.add_row({grid.z(i), e.real(), e.imag(), r.real(), r.imag(),
                   psi.real(), psi.imag(), std::norm(psi)});
    }
    return t;
}

/// Columns step, t, trace_err, psi_norm, e_norm.
inline CsvTable diagnostics_table(const TrajectoryRecord& rec)
{
    CsvTable t;
    t.header = {"step", "t", "trace_err", "psi_norm", "e_norm"};
    t.rows.reserve(rec.diagnostics.size());
    for (const auto& d : rec.diagnostics) {
        t.add_row({static_cast<real>(d.step), d.t, d.trace_err, d.psi_norm,
                   d.e_norm});
    }
    return t;
}

} // namespace eit
