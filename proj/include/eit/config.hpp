#pragma once

// Flat key = value configuration documents.
//
//   # comment
//   gamma_ab = 1.0
//   schedule.kind = paper-tanh
//   record_times = 0, 150
//
// Unknown keys, duplicate keys and malformed lines are rejected; every
// numeric value is written back with round-trip precision by
// serialize_config.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <eit/core.hpp>
#include <eit/schedule.hpp>

namespace eit {

enum class PropagationMode
{
    full_bloch,
    weak_probe,
};

inline std::string to_string(PropagationMode mode)
{
    return mode == PropagationMode::full_bloch ? "full-bloch" : "weak-probe";
}

enum class PulseShape
{
    gaussian,
};

/// Gaussian envelope amplitude * exp(-(z - z0)^2 / (4 sigma_z^2)), so that
/// |E|^2 has rms width sigma_z.
struct InputPulseSpec
{
    PulseShape shape = PulseShape::gaussian;
    real z0 = 30.0;
    real sigma_z = 4.0;
    real amplitude = 1e-3;

    real envelope(real z) const
    {
        const real x = (z - z0) / sigma_z;
        return amplitude * std::exp(-0.25 * x * x);
    }
};

struct SimulationConfig
{
    PhysicalParams params;
    Grid grid;
    ControlSchedule schedule = ControlSchedule::paper_tanh();
    real t_start = 0.0;
    real t_end = 150.0;
    real dt = 160.0 / 8192.0;
    int substeps = 2;
    InputPulseSpec pulse;
    PropagationMode mode = PropagationMode::full_bloch;
    std::vector<real> record_times{0.0, 150.0};
    std::string snapshot_pattern = "snapshot_t{t}.csv";
    std::string diagnostics_file = "diagnostics.csv";

    /// Non-fatal findings of validation, e.g. a strong probe.
    std::vector<std::string> warnings;

    /// RK4 step of the local (atom + field source) update
    real local_step() const { return dt / (2.0 * substeps); }

    std::size_t step_count() const
    {
        return static_cast<std::size_t>(
            std::llround((t_end - t_start) / dt));
    }

    real time_at(std::size_t step) const
    {
        return t_start + static_cast<real>(step) * dt;
    }
};

struct ValidationOptions
{
    /// c dt = dz and the explicit-integrator step bound
    bool check_time_step = true;
};

namespace detail {

inline std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline real parse_real(const std::string& key, const std::string& text)
{
    real v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (!text.empty() && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) {
        throw config_error("key '" + key + "': '" + text +
                           "' is not a number");
    }
    return v;
}

inline std::vector<std::string> split_list(const std::string& text,
                                           char sep = ',')
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep)) {
        auto t = trim(item);
        if (!t.empty()) out.push_back(t);
    }
    return out;
}

inline std::string number(real v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline bool close(real a, real b, real rel)
{
    return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

} // namespace detail

/// Checks every cross-field invariant; appends warnings to cfg.warnings.
inline void validate_config(SimulationConfig& cfg,
                            const ValidationOptions& opts = {})
{
    cfg.params.validate();
    cfg.grid.validate();

    if (!std::isfinite(cfg.t_start) || !std::isfinite(cfg.t_end) ||
        !(cfg.t_end > cfg.t_start)) {
        throw config_error("t_end must exceed t_start");
    }
    if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) {
        throw config_error("dt must be positive");
    }
    if (cfg.substeps < 1) {
        throw config_error("substeps must be at least 1");
    }
    cfg.schedule.validate(cfg.t_start, cfg.t_end);

    const auto& pulse = cfg.pulse;
    if (!(pulse.sigma_z > 0.0)) {
        throw config_error("pulse.sigma_z must be positive");
    }
    if (!(pulse.amplitude >= 0.0) || !std::isfinite(pulse.amplitude)) {
        throw config_error("pulse.amplitude must be non-negative");
    }
    if (pulse.z0 - 5.0 * pulse.sigma_z < cfg.grid.z_min ||
        pulse.z0 + 5.0 * pulse.sigma_z > cfg.grid.z_max) {
        throw config_error("pulse support z0 +- 5 sigma_z must lie inside "
                           "[z_min, z_max]");
    }

    const real n_steps = (cfg.t_end - cfg.t_start) / cfg.dt;
    if (!detail::close(n_steps, std::round(n_steps), 1e-9)) {
        throw config_error("t_end - t_start must be a whole number of dt");
    }
    for (real tr : cfg.record_times) {
        const real k = (tr - cfg.t_start) / cfg.dt;
        if (tr < cfg.t_start || tr > cfg.t_end ||
            !detail::close(k, std::round(k), 1e-9)) {
            throw config_error("record time " + detail::number(tr) +
                               " is not on the time-step grid");
        }
    }
    for (std::size_t i = 1; i < cfg.record_times.size(); ++i) {
        if (!(cfg.record_times[i] > cfg.record_times[i - 1])) {
            throw config_error("record_times must be strictly increasing");
        }
    }

    if (opts.check_time_step) {
        const real dz = cfg.grid.dz();
        if (!detail::close(cfg.params.c_light * cfg.dt, dz, 1e-12)) {
            throw config_error("c_light * dt must equal dz for shift "
                               "advection (dz = " + detail::number(dz) + ")");
        }
        const auto& p = cfg.params;
        const real h = cfg.local_step();
        real fastest = std::max({p.gamma_a(), p.gamma_ab, p.gamma_ac,
                                 std::abs(p.delta_ab), std::abs(p.delta_ac),
                                 p.g_sqrt_n});
        const std::size_t n = cfg.step_count();
        for (std::size_t k = 0; k <= n; ++k) {
            fastest = std::max(fastest,
                               rabi_frequency(cfg.schedule, cfg.time_at(k), p));
        }
        if (!(h * fastest <= 0.5)) {
            throw config_error(
                "time step too large: (dt / (2 substeps)) * max rate = " +
                detail::number(h * fastest) + " exceeds 0.5");
        }
    }

    const real omega0 = rabi_frequency(cfg.schedule, cfg.t_start, cfg.params);
    if (pulse.amplitude > 0.0 &&
        !(pulse.amplitude * cfg.params.g_sqrt_n <= 0.1 * omega0)) {
        cfg.warnings.push_back("probe is not weak: amplitude * g_sqrt_n / "
                               "Omega(t_start) exceeds 0.1");
    }
}

namespace detail {

// Every accepted key. Schedule keys are accepted regardless of kind.
inline const std::set<std::string>& known_keys()
{
    static const std::set<std::string> keys{
        "g_sqrt_n", "gamma_ab", "gamma_a_to_b", "gamma_a_to_c", "gamma_ac",
        "delta_ab", "delta_ac", "delta_two_photon", "c_light", "n_atoms",
        "z_min", "z_max", "n_points", "t_start", "t_end", "dt", "substeps",
        "mode", "record_times", "output.snapshot_pattern",
        "output.diagnostics", "pulse.shape", "pulse.z0", "pulse.sigma_z",
        "pulse.amplitude", "schedule.kind", "schedule.base", "schedule.amp1",
        "schedule.rate1", "schedule.center1", "schedule.amp2",
        "schedule.rate2", "schedule.center2", "schedule.theta",
        "schedule.knots"};
    return keys;
}

inline const std::vector<std::string>& required_keys()
{
    static const std::vector<std::string> keys{"gamma_ab"};
    return keys;
}

} // namespace detail

using ConfigEntries = std::map<std::string, std::string>;

/// Parses the document into raw entries (syntax only).
inline ConfigEntries parse_config_entries(std::string_view text)
{
    ConfigEntries entries;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;

        if (auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        const std::string stripped = detail::trim(line);
        if (stripped.empty()) continue;

        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw config_error("line " + std::to_string(line_no) +
                               ": expected 'key = value'");
        }
        const std::string key = detail::trim(stripped.substr(0, eq));
        const std::string value = detail::trim(stripped.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw config_error("line " + std::to_string(line_no) +
                               ": empty key or value");
        }
        if (!detail::known_keys().contains(key)) {
            throw config_error("line " + std::to_string(line_no) +
                               ": unknown key '" + key + "'");
        }
        if (!entries.emplace(key, value).second) {
            throw config_error("line " + std::to_string(line_no) +
                               ": duplicate key '" + key + "'");
        }
    }
    return entries;
}

/// Builds and validates a configuration from raw entries.
inline SimulationConfig config_from_entries(const ConfigEntries& entries,
                                            const ValidationOptions& opts = {})
{
    for (const auto& key : detail::required_keys()) {
        if (!entries.contains(key)) {
            throw config_error("missing required key '" + key + "'");
        }
    }
    for (const auto& [key, value] : entries) {
        if (!detail::known_keys().contains(key)) {
            throw config_error("unknown key '" + key + "'");
        }
    }

    auto get = [&](const std::string& key) -> std::optional<std::string> {
        auto it = entries.find(key);
        if (it == entries.end()) return std::nullopt;
        return it->second;
    };
    auto num = [&](const std::string& key, real& target) {
        if (auto v = get(key)) target = detail::parse_real(key, *v);
    };

    SimulationConfig cfg;
    auto& p = cfg.params;
    num("g_sqrt_n", p.g_sqrt_n);
    num("gamma_ab", p.gamma_ab);
    // radiatively limited defaults tied to gamma_ab
    p.gamma_a_to_b = p.gamma_ab;
    p.gamma_a_to_c = p.gamma_ab;
    p.gamma_ac = p.gamma_ab;
    num("gamma_a_to_b", p.gamma_a_to_b);
    num("gamma_a_to_c", p.gamma_a_to_c);
    num("gamma_ac", p.gamma_ac);
    num("c_light", p.c_light);
    num("n_atoms", p.n_atoms);

    num("delta_ab", p.delta_ab);
    const bool has_ac = entries.contains("delta_ac");
    const bool has_two = entries.contains("delta_two_photon");
    num("delta_ac", p.delta_ac);
    num("delta_two_photon", p.delta_two_photon);
    if (has_two && !has_ac) {
        p.delta_ac = p.delta_ab + p.delta_two_photon;
    }
    else if (has_ac && !has_two) {
        p.delta_two_photon = p.delta_ac - p.delta_ab;
    }
    else if (!has_ac && !has_two) {
        p.delta_ac = p.delta_ab;
    }

    num("z_min", cfg.grid.z_min);
    num("z_max", cfg.grid.z_max);
    if (auto v = get("n_points")) {
        const real n = detail::parse_real("n_points", *v);
        if (!(n >= 1.0) || n != std::floor(n) || n > 1e9) {
            throw config_error("n_points must be a positive integer");
        }
        cfg.grid.n_points = static_cast<std::size_t>(n);
    }

    num("t_start", cfg.t_start);
    num("t_end", cfg.t_end);
    cfg.dt = cfg.grid.dz() / p.c_light;
    num("dt", cfg.dt);
    if (auto v = get("substeps")) {
        const real n = detail::parse_real("substeps", *v);
        if (!(n >= 1.0) || n != std::floor(n) || n > 1e6) {
            throw config_error("substeps must be a positive integer");
        }
        cfg.substeps = static_cast<int>(n);
    }

    if (auto v = get("mode")) {
        if (*v == "full-bloch") cfg.mode = PropagationMode::full_bloch;
        else if (*v == "weak-probe") cfg.mode = PropagationMode::weak_probe;
        else throw config_error("mode must be full-bloch or weak-probe");
    }
    if (auto v = get("record_times")) {
        cfg.record_times.clear();
        for (const auto& item : detail::split_list(*v)) {
            cfg.record_times.push_back(
                detail::parse_real("record_times", item));
        }
    }
    else {
        cfg.record_times = {cfg.t_start, cfg.t_end};
    }
    if (auto v = get("output.snapshot_pattern")) cfg.snapshot_pattern = *v;
    if (auto v = get("output.diagnostics")) cfg.diagnostics_file = *v;

    if (auto v = get("pulse.shape"); v && *v != "gaussian") {
        throw config_error("pulse.shape must be gaussian");
    }
    num("pulse.z0", cfg.pulse.z0);
    num("pulse.sigma_z", cfg.pulse.sigma_z);
    num("pulse.amplitude", cfg.pulse.amplitude);

    const std::string kind = get("schedule.kind").value_or("paper-tanh");
    if (kind == "paper-tanh") {
        TanhParameters tp;
        num("schedule.base", tp.base);
        num("schedule.amp1", tp.amp1);
        num("schedule.rate1", tp.rate1);
        num("schedule.center1", tp.center1);
        num("schedule.amp2", tp.amp2);
        num("schedule.rate2", tp.rate2);
        num("schedule.center2", tp.center2);
        cfg.schedule = ControlSchedule::paper_tanh(tp);
    }
    else if (kind == "constant") {
        auto v = get("schedule.theta");
        if (!v) {
            throw config_error("missing required key 'schedule.theta' for "
                               "constant schedule");
        }
        cfg.schedule =
            ControlSchedule::constant(detail::parse_real("schedule.theta", *v));
    }
    else if (kind == "piecewise-linear-in-cot") {
        auto v = get("schedule.knots");
        if (!v) {
            throw config_error("missing required key 'schedule.knots' for "
                               "piecewise-linear-in-cot schedule");
        }
        std::vector<std::pair<real, real>> knots;
        for (const auto& item : detail::split_list(*v)) {
            const auto colon = item.find(':');
            if (colon == std::string::npos) {
                throw config_error("schedule.knots entries must be t:cot");
            }
            knots.emplace_back(
                detail::parse_real("schedule.knots",
                                   detail::trim(item.substr(0, colon))),
                detail::parse_real("schedule.knots",
                                   detail::trim(item.substr(colon + 1))));
        }
        cfg.schedule = ControlSchedule::piecewise_linear_cot(std::move(knots));
    }
    else {
        throw config_error("schedule.kind must be paper-tanh, constant or "
                           "piecewise-linear-in-cot");
    }

    validate_config(cfg, opts);
    return cfg;
}

inline SimulationConfig load_config(std::string_view text,
                                    const ValidationOptions& opts = {})
{
    return config_from_entries(parse_config_entries(text), opts);
}

inline std::string read_text_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw config_error("cannot read config file '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Applies "key=value" overrides on top of the document's entries.
inline ConfigEntries apply_overrides(ConfigEntries entries,
                                     const std::vector<std::string>& sets)
{
    for (const auto& s : sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) {
            throw config_error("override '" + s + "' is not key=value");
        }
        const std::string key = detail::trim(s.substr(0, eq));
        const std::string value = detail::trim(s.substr(eq + 1));
        if (!detail::known_keys().contains(key)) {
            throw config_error("override: unknown key '" + key + "'");
        }
        entries[key] = value;
    }
    return entries;
}

inline SimulationConfig load_config_file(const std::string& path,
                                         const std::vector<std::string>& sets,
                                         const ValidationOptions& opts = {})
{
    auto entries = parse_config_entries(read_text_file(path));
    return config_from_entries(apply_overrides(std::move(entries), sets),
                               opts);
}

inline std::string serialize_config(const SimulationConfig& cfg)
{
    std::ostringstream out;
    auto kv = [&](const char* key, const std::string& value) {
        out << key << " = " << value << '\n';
    };
    auto kn = [&](const char* key, real value) {
        kv(key, detail::number(value));
    };
    const auto& p = cfg.params;
    kn("g_sqrt_n", p.g_sqrt_n);
    kn("gamma_ab", p.gamma_ab);
    kn("gamma_a_to_b", p.gamma_a_to_b);
    kn("gamma_a_to_c", p.gamma_a_to_c);
    kn("gamma_ac", p.gamma_ac);
    kn("delta_ab", p.delta_ab);
    kn("delta_ac", p.delta_ac);
    kn("delta_two_photon", p.delta_two_photon);
    kn("c_light", p.c_light);
    kn("n_atoms", p.n_atoms);
    kn("z_min", cfg.grid.z_min);
    kn("z_max", cfg.grid.z_max);
    kv("n_points", std::to_string(cfg.grid.n_points));
    kn("t_start", cfg.t_start);
    kn("t_end", cfg.t_end);
    kn("dt", cfg.dt);
    kv("substeps", std::to_string(cfg.substeps));
    kv("mode", to_string(cfg.mode));
    std::string times;
    for (std::size_t i = 0; i < cfg.record_times.size(); ++i) {
        if (i) times += ", ";
        times += detail::number(cfg.record_times[i]);
    }
    kv("record_times", times);
    kv("output.snapshot_pattern", cfg.snapshot_pattern);
    kv("output.diagnostics", cfg.diagnostics_file);
    kv("pulse.shape", "gaussian");
    kn("pulse.z0", cfg.pulse.z0);
    kn("pulse.sigma_z", cfg.pulse.sigma_z);
    kn("pulse.amplitude", cfg.pulse.amplitude);

    const auto& s = cfg.schedule;
    kv("schedule.kind", to_string(s.kind()));
    switch (s.kind()) {
    case ScheduleKind::paper_tanh: {
        const auto& tp = s.tanh_parameters();
        kn("schedule.base", tp.base);
        kn("schedule.amp1", tp.amp1);
        kn("schedule.rate1", tp.rate1);
        kn("schedule.center1", tp.center1);
        kn("schedule.amp2", tp.amp2);
        kn("schedule.rate2", tp.rate2);
        kn("schedule.center2", tp.center2);
        break;
    }
    case ScheduleKind::constant:
        kn("schedule.theta", s.constant_theta());
        break;
    case ScheduleKind::piecewise_linear_cot: {
        std::string knots;
        for (std::size_t i = 0; i < s.knots().size(); ++i) {
            if (i) knots += ", ";
            knots += detail::number(s.knots()[i].first) + ":" +
                     detail::number(s.knots()[i].second);
        }
        kv("schedule.knots", knots);
        break;
    }
    }
    return out.str();
}

} // namespace eit
