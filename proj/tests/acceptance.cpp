// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. The full Maxwell-Bloch runs are shared between criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include <eit/eit.hpp>

#include "oracles.hpp"

using namespace eit;

namespace {

struct Outcome
{
    int id;
    std::string name;
    bool pass;
    std::string detail;
};

std::vector<Outcome> outcomes;

void report(int id, const std::string& name, bool pass,
            const std::string& detail)
{
    outcomes.push_back({id, name, pass, detail});
    std::printf("[%s] criterion %d: %s -- %s\n", pass ? "PASS" : "FAIL", id,
                name.c_str(), detail.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof(buf), f, args...);
    return buf;
}

SimulationConfig fig2_config()
{
    return load_config("gamma_ab = 1.0\n"
                       "g_sqrt_n = 1.0\n"
                       "schedule.kind = paper-tanh\n"
                       "t_start = 0\n"
                       "t_end = 150\n"
                       "record_times = 0, 150\n");
}

using RunKey = std::tuple<double, int, std::size_t, int>;
std::map<RunKey, TrajectoryRecord> run_cache;

const TrajectoryRecord& fig2_run(double delta, int substeps = 2,
                                 std::size_t n_points = 8192,
                                 PropagationMode mode =
                                     PropagationMode::full_bloch)
{
    const RunKey key{delta, substeps, n_points, static_cast<int>(mode)};
    if (auto it = run_cache.find(key); it != run_cache.end()) {
        return it->second;
    }
    SimulationConfig cfg = fig2_config();
    cfg.params = cfg.params.with_two_photon_detuning(delta);
    cfg.substeps = substeps;
    cfg.grid.n_points = n_points;
    cfg.dt = cfg.grid.dz() / cfg.params.c_light;
    cfg.mode = mode;
    validate_config(cfg);

    const auto t0 = std::chrono::steady_clock::now();
    auto rec = run(cfg);
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
    std::printf("  run delta=%.3f substeps=%d n=%zu mode=%s: %.1f s\n", delta,
                substeps, n_points, to_string(mode).c_str(), secs);
    std::fflush(stdout);
    return run_cache.emplace(key, std::move(rec)).first->second;
}

double transfer_time_romberg(const ControlSchedule& s, double t0, double t1)
{
    return oracle::romberg_split(
        [&](double t) {
            const auto m = mixing_angle(s, t);
            return m.cos * m.cos * std::pow(m.sin, 4);
        },
        t0, t1, 30);
}

void criterion_1()
{
    std::mt19937_64 rng(1);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const auto s = oracle::random_state(rng);
        const auto p = oracle::random_params(rng);
        const auto e = oracle::random_complex(rng);
        const double omega = std::uniform_real_distribution<>(0, 3)(rng);
        worst = std::max(worst, std::abs(bloch_rhs_full(s, e, omega, p)
                                             .trace()));
    }
    double trace_err = 0.0;
    for (double delta : {0.2, 0.5}) {
        for (const auto& d : fig2_run(delta).diagnostics) {
            trace_err = std::max(trace_err, d.trace_err);
        }
    }
    report(1, "trace conservation",
           worst <= 1e-14 && trace_err <= 1e-8,
           fmt("max |d tr/dt| = %.2e (tol 1e-14), max run trace error = "
               "%.2e (tol 1e-8)",
               worst, trace_err));
}

void criterion_2()
{
    std::mt19937_64 rng(2);
    Grid grid{0.0, 10.0, 64};
    PhysicalParams p;
    double norm_err = 0.0;
    double trip_err = 0.0;
    for (int r = 0; r < 100; ++r) {
        std::vector<cplx> e(grid.n_points), rho(grid.n_points);
        for (auto& v : e) v = oracle::random_complex(rng);
        for (auto& v : rho) v = oracle::random_complex(rng);
        const double theta =
            std::uniform_real_distribution<>(0, std::numbers::pi / 2)(rng);
        const double k = std::uniform_real_distribution<>(-3, 3)(rng);
        const auto pol = to_polaritons(e, rho, theta, grid, p, k);
        const auto [e2, rho2] = from_polaritons(pol, grid, p, k);
        for (std::size_t i = 0; i < grid.n_points; ++i) {
            const double lhs = std::norm(pol.psi[i]) + std::norm(pol.phi[i]);
            const double rhs = std::norm(e[i]) + p.n_atoms * std::norm(rho[i]);
            norm_err = std::max(norm_err, std::abs(lhs - rhs) / rhs);
            trip_err = std::max({trip_err, std::abs(e2[i] - e[i]),
                                 std::abs(rho2[i] - rho[i])});
        }
    }
    report(2, "polariton transform", norm_err <= 1e-12 && trip_err <= 1e-14,
           fmt("norm rel err = %.2e (tol 1e-12), round trip = %.2e "
               "(tol 1e-14)",
               norm_err, trip_err));
}

void criterion_3()
{
    std::mt19937_64 rng(3);
    Grid grid{0.0, 160.0, 256};
    PhysicalParams p;
    double worst = 0.0;
    for (int r = 0; r < 10; ++r) {
        const int m = std::uniform_int_distribution<>(-30, 30)(rng);
        const double theta =
            std::uniform_real_distribution<>(0.05, std::numbers::pi / 2)(rng);
        const double t = std::uniform_real_distribution<>(1.0, 20.0)(rng);
        const double k = 2 * std::numbers::pi * m / grid.length();
        std::vector<cplx> psi(grid.n_points);
        for (std::size_t i = 0; i < grid.n_points; ++i) {
            psi[i] = std::polar(1.0, k * grid.z(i));
        }
        const auto sched = ControlSchedule::constant(theta);
        const auto out =
            second_order_evolve(psi, grid, 0.0, sched, p, 0.0, t).psi;
        const double s2 = std::pow(std::sin(theta), 2);
        const double c2 = std::pow(std::cos(theta), 2);
        const double c0 = -(p.gamma_ab / p.g2n()) * s2 * s2 * c2;
        const cplx factor =
            std::exp(cplx{c0 * k * k * t, -k * c2 * t});
        for (std::size_t i = 0; i < grid.n_points; ++i) {
            const cplx expect = factor * psi[i];
            worst = std::max(worst, std::abs(out[i] - expect) /
                                        std::abs(expect));
        }
    }
    report(3, "frozen-coefficient per-mode decay", worst <= 1e-12,
           fmt("max rel err = %.2e (tol 1e-12)", worst));
}

void criterion_4()
{
    const auto cfg = fig2_config();
    bool pass = true;
    std::string detail;
    for (auto [delta, tol] : {std::pair{0.2, 0.1}, std::pair{0.5, 0.2}}) {
        const auto& rec = fig2_run(delta);
        const auto& psi0 = rec.at(0.0).polaritons.psi;
        const auto& psi1 = rec.at(150.0).polaritons.psi;
        const auto ana = second_order_evolve(psi0, cfg.grid, delta,
                                             cfg.schedule, cfg.params, 0.0,
                                             150.0);
        const double dist =
            oracle::profile_distance(psi1, ana.psi, cfg.grid.dz());
        pass = pass && dist <= tol && !ana.under_resolved;
        detail += fmt("delta=%.1f: L2 = %.4f (tol %.1f)%s; ", delta, dist,
                      tol, ana.under_resolved ? " under-resolved" : "");
    }
    report(4, "Fig.-2 released profile vs second-order theory", pass, detail);
}

void criterion_5()
{
    const auto cfg = fig2_config();
    const double T = transfer_time(cfg.schedule, 0.0, 150.0);
    const double T_romberg = transfer_time_romberg(cfg.schedule, 0.0, 150.0);
    const bool dual_ok = std::abs(T - T_romberg) <= 1e-8;

    const double base = integrated_output_intensity(fig2_run(0.0), 150.0);
    std::vector<SweepRow> rows;
    for (int i = 0; i <= 12; ++i) {
        const double delta = 0.05 * i;
        SweepRow r;
        r.delta = delta;
        r.numeric = integrated_output_intensity(fig2_run(delta), 150.0);
        r.normalized = r.numeric / base;
        rows.push_back(r);
    }
    const int p = fit_loss_power(rows, T, cfg.params);
    double worst = 0.0;
    for (const auto& r : rows) {
        const double model =
            std::pow(loss_factor_from_T(r.delta, T, cfg.params), p);
        std::printf("  delta=%.2f normalized=%.6f model(p=%d)=%.6f\n",
                    r.delta, r.normalized, p, model);
        if (r.delta <= 0.5 + 1e-12) {
            worst = std::max(worst, std::abs(r.normalized - model));
        }
    }
    report(5, "Fig.-3 detuning sweep vs loss factor",
           dual_ok && p == intensity_loss_power && worst <= 0.05,
           fmt("T = %.12f (Romberg diff %.1e, tol 1e-8), fitted p = %d "
               "(frozen %d), max |gap| for delta<=0.5 = %.4f (tol 0.05)",
               T, std::abs(T - T_romberg), p, intensity_loss_power, worst));
}

void criterion_6()
{
    TanhParameters slow;
    slow.rate1 = 0.05;
    slow.rate2 = 0.05;
    TanhParameters shifted;
    shifted.center1 = 30.0;
    shifted.center2 = 100.0;
    const std::vector<ControlSchedule> schedules{
        ControlSchedule::paper_tanh(),
        ControlSchedule::paper_tanh(slow),
        ControlSchedule::paper_tanh(shifted),
        ControlSchedule::constant(std::numbers::pi / 3),
        ControlSchedule::piecewise_linear_cot(
            {{0.0, 50.0}, {40.0, 0.01}, {110.0, 0.01}, {150.0, 50.0}}),
    };
    PhysicalParams p;
    double worst_id = 0.0;
    double worst_scale = 0.0;
    for (const auto& s : schedules) {
        const double T = transfer_time(s, 0.0, 150.0);
        const double w = two_photon_linewidth(p, T);
        worst_id = std::max(worst_id,
                            std::abs(loss_factor(w, s, p, 0.0, 150.0) -
                                     std::exp(-1.0)));
        PhysicalParams p2 = p;
        p2.gamma_ab *= 2.0;
        const double w_gamma = two_photon_linewidth(p2, T);
        const double w_T = two_photon_linewidth(p, 2.0 * T);
        worst_scale = std::max(
            {worst_scale, std::abs(w_gamma * std::sqrt(2.0) / w - 1.0),
             std::abs(w_T * std::sqrt(2.0) / w - 1.0)});
    }
    report(6, "linewidth identity and scaling",
           worst_id <= 1e-10 && worst_scale <= 1e-12,
           fmt("|loss(delta_2ph) - 1/e| = %.2e (tol 1e-10), scaling rel err "
               "= %.2e (tol 1e-12)",
               worst_id, worst_scale));
}

void criterion_7()
{
    const auto cfg = fig2_config();
    const auto& rec = fig2_run(0.0);
    const double transport =
        cfg.params.c_light *
        integrate(
            [&](double t) {
                const auto m = mixing_angle(cfg.schedule, t);
                return m.cos * m.cos;
            },
            0.0, 150.0)
            .value;
    const double c0 = oracle::centroid(rec.at(0.0).polaritons.psi, cfg.grid);
    const double c1 =
        oracle::centroid(rec.at(150.0).polaritons.psi, cfg.grid);
    const double centroid_err = std::abs((c1 - c0) - transport);
    const double dz = cfg.grid.dz();

    // stopped polariton: theta = pi/2, Omega = 0
    SimulationConfig stop = cfg;
    const double delta = 0.3;
    stop.params = stop.params.with_two_photon_detuning(delta);
    stop.schedule = ControlSchedule::constant(std::numbers::pi / 2);
    MediumState s;
    s.t = 0.0;
    s.efield.assign(stop.grid.n_points, cplx{});
    s.atoms.assign(stop.grid.n_points, AtomState{});
    for (std::size_t i = 0; i < stop.grid.n_points; ++i) {
        s.atoms[i].rho_cb = stop.pulse.envelope(stop.grid.z(i));
    }
    const auto initial = s.atoms;
    const auto steps = static_cast<std::size_t>(std::llround(10.0 / stop.dt));
    for (std::size_t k = 0; k < steps; ++k) step(s, stop.schedule, stop, k);
    const cplx chirp = std::polar(1.0, delta * s.t);
    double chirp_err = 0.0;
    for (std::size_t i = 0; i < stop.grid.n_points; ++i) {
        const cplx r0 = initial[i].rho_cb;
        if (std::abs(r0) < 1e-6 * stop.pulse.amplitude) continue;
        chirp_err = std::max(chirp_err,
                             std::abs(s.atoms[i].rho_cb - chirp * r0) /
                                 std::abs(r0));
    }
    report(7, "zeroth-order transport and chirp",
           centroid_err <= 2 * dz && chirp_err <= 1e-6,
           fmt("centroid shift %.6f vs c*int cos^2 = %.6f: |diff| = %.4f "
               "(tol 2dz = %.4f); chirp rel err over t = %.2f: %.2e "
               "(tol 1e-6)",
               c1 - c0, transport, centroid_err, 2 * dz, s.t, chirp_err));
}

void criterion_8()
{
    const double i2 = integrated_output_intensity(fig2_run(0.0, 2), 150.0);
    const double i4 = integrated_output_intensity(fig2_run(0.0, 4), 150.0);
    const double i8 = integrated_output_intensity(fig2_run(0.0, 8), 150.0);
    const double ifine =
        integrated_output_intensity(fig2_run(0.0, 2, 16384), 150.0);
    const double dt_change = std::abs(i4 - i2) / std::abs(i2);
    const double dz_change = std::abs(ifine - i2) / std::abs(i2);
    const double order = std::log2(std::abs(i2 - i4) / std::abs(i4 - i8));
    report(8, "convergence",
           dt_change <= 1e-6 && dz_change <= 1e-4 && order >= 2.0,
           fmt("halving local dt: %.2e (tol 1e-6); halving dz: %.2e "
               "(tol 1e-4); observed order %.2f (min 2)",
               dt_change, dz_change, order));
}

void criterion_9()
{
    const auto& full = fig2_run(0.2);
    const auto& weak = fig2_run(0.2, 2, 8192, PropagationMode::weak_probe);
    double worst = 0.0;
    for (std::size_t k = 0; k < full.diagnostics.size(); ++k) {
        const double a = full.diagnostics[k].psi_norm;
        const double b = weak.diagnostics[k].psi_norm;
        worst = std::max(worst, std::abs(a - b) / std::abs(b));
    }
    report(9, "weak-probe vs full-Bloch", worst <= 1e-4,
           fmt("max rel diff of int |Psi|^2 dz over run = %.2e (tol 1e-4)",
               worst));
}

} // namespace

int main()
{
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();

    int failed = 0;
    for (const auto& o : outcomes) failed += !o.pass;
    std::printf("\n%zu criteria, %d failed\n", outcomes.size(), failed);
    return failed ? 1 : 0;
}
