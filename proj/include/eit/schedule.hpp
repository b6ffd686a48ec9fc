#pragma once

// Time-dependent control field, expressed through the mixing angle
// tan(theta) = g sqrt(N) / Omega(t). theta = 0 is a pure light excitation,
// theta = pi/2 a stopped, purely atomic one.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <eit/core.hpp>

namespace eit {

enum class ScheduleKind
{
    paper_tanh,
    constant,
    piecewise_linear_cot,
};

inline std::string to_string(ScheduleKind kind)
{
    switch (kind) {
    case ScheduleKind::paper_tanh: return "paper-tanh";
    case ScheduleKind::constant: return "constant";
    case ScheduleKind::piecewise_linear_cot: return "piecewise-linear-in-cot";
    }
    return "unknown";
}

/// cot(theta(t)) = base - amp1 tanh[rate1 (t - center1)]
///                      + amp2 tanh[rate2 (t - center2)]
struct TanhParameters
{
    real base = 100.0;
    real amp1 = 50.0;
    real rate1 = 0.1;
    real center1 = 15.0;
    real amp2 = 50.0;
    real rate2 = 0.1;
    real center2 = 125.0;
};

/// Mixing angle together with its trigonometric functions and rate.
///
/// sin and cos are computed from cot without going through theta, so
/// theta = 0 (cot = +inf) gives sin = 0 exactly. The reported angle itself
/// is clamped to [min_theta, pi/2].
struct MixingAngle
{
    real theta = 0.0;
    real sin = 0.0;
    real cos = 1.0;
    real cot = std::numeric_limits<real>::infinity();
    real rate = 0.0;
};

class ControlSchedule
{
public:
    static constexpr real min_theta = 1e-9;
    static constexpr real derivative_step = 1e-6;

    ControlSchedule() = default;

    static ControlSchedule paper_tanh(TanhParameters p = {})
    {
        ControlSchedule s;
        s.m_kind = ScheduleKind::paper_tanh;
        s.m_tanh = p;
        return s;
    }

    /// theta in [0, pi/2]
    static ControlSchedule constant(real theta)
    {
        if (!(theta >= 0.0 && theta <= std::numbers::pi / 2)) {
            throw config_error("constant schedule: theta must lie in "
                               "[0, pi/2]");
        }
        ControlSchedule s;
        s.m_kind = ScheduleKind::constant;
        s.m_theta = theta;
        return s;
    }

    /// Constant drive Omega >= 0, i.e. cot(theta) = Omega / g sqrt(N).
    static ControlSchedule constant_rabi(real omega, real g_sqrt_n)
    {
        if (!(omega >= 0.0) || !(g_sqrt_n > 0.0)) {
            throw config_error("constant_rabi: need omega >= 0 and "
                               "g_sqrt_n > 0");
        }
        return constant(std::atan2(g_sqrt_n, omega));
    }

    /// Knots (t, cot theta), linear interpolation in cot, constant outside.
    static ControlSchedule
    piecewise_linear_cot(std::vector<std::pair<real, real>> knots)
    {
        if (knots.empty()) {
            throw config_error("piecewise schedule needs at least one knot");
        }
        for (std::size_t i = 0; i < knots.size(); ++i) {
            if (!std::isfinite(knots[i].first) ||
                !std::isfinite(knots[i].second) || knots[i].second < 0.0) {
                throw config_error("piecewise schedule knots must be finite "
                                   "with cot >= 0");
            }
            if (i > 0 && !(knots[i].first > knots[i - 1].first)) {
                throw config_error("piecewise schedule knot times must be "
                                   "strictly increasing");
            }
        }
        ControlSchedule s;
        s.m_kind = ScheduleKind::piecewise_linear_cot;
        s.m_knots = std::move(knots);
        return s;
    }

    ScheduleKind kind() const { return m_kind; }
    const TanhParameters& tanh_parameters() const { return m_tanh; }
    real constant_theta() const { return m_theta; }
    const std::vector<std::pair<real, real>>& knots() const
    {
        return m_knots;
    }

    /// t0, every knot strictly inside (t0, t1), t1.
    std::vector<real> breakpoints(real t0, real t1) const
    {
        std::vector<real> pts{t0};
        if (m_kind == ScheduleKind::piecewise_linear_cot) {
            for (const auto& [t, cot] : m_knots) {
                if (t > t0 && t < t1) pts.push_back(t);
            }
        }
        pts.push_back(t1);
        return pts;
    }

    real cot_theta(real t) const
    {
        switch (m_kind) {
        case ScheduleKind::paper_tanh:
            return m_tanh.base -
                   m_tanh.amp1 * std::tanh(m_tanh.rate1 * (t - m_tanh.center1)) +
                   m_tanh.amp2 * std::tanh(m_tanh.rate2 * (t - m_tanh.center2));
        case ScheduleKind::constant:
            if (m_theta == 0.0) {
                return std::numeric_limits<real>::infinity();
            }
            if (m_theta == std::numbers::pi / 2) {
                return 0.0;
            }
            return std::cos(m_theta) / std::sin(m_theta);
        case ScheduleKind::piecewise_linear_cot: {
            if (t <= m_knots.front().first) return m_knots.front().second;
            if (t >= m_knots.back().first) return m_knots.back().second;
            auto it = std::upper_bound(
                m_knots.begin(), m_knots.end(), t,
                [](real v, const auto& k) { return v < k.first; });
            const auto& [t1, c1] = *it;
            const auto& [t0, c0] = *(it - 1);
            return c0 + (c1 - c0) * (t - t0) / (t1 - t0);
        }
        }
        return 0.0;
    }

    /// d theta / dt; analytic for the tanh schedule.
    real theta_rate(real t) const
    {
        switch (m_kind) {
        case ScheduleKind::paper_tanh: {
            const real u = cot_theta(t);
            const real s1 = 1.0 / std::cosh(m_tanh.rate1 * (t - m_tanh.center1));
            const real s2 = 1.0 / std::cosh(m_tanh.rate2 * (t - m_tanh.center2));
            const real du = -m_tanh.amp1 * m_tanh.rate1 * s1 * s1 +
                            m_tanh.amp2 * m_tanh.rate2 * s2 * s2;
            return -du / (1.0 + u * u);
        }
        case ScheduleKind::constant:
            return 0.0;
        case ScheduleKind::piecewise_linear_cot: {
            const real h = derivative_step;
            return (angle_from_cot(cot_theta(t + h)) -
                    angle_from_cot(cot_theta(t - h))) /
                   (2.0 * h);
        }
        }
        return 0.0;
    }

    static real angle_from_cot(real cot)
    {
        return std::max(std::atan2(1.0, cot), min_theta);
    }

    /// Checks cot(theta) >= 0 on n + 1 equispaced samples of [t0, t1].
    void validate(real t0, real t1, std::size_t n = 4096) const
    {
        for (std::size_t i = 0; i <= n; ++i) {
            const real t = t0 + (t1 - t0) * static_cast<real>(i) /
                                    static_cast<real>(n);
            const real u = cot_theta(t);
            if (std::isnan(u) || u < 0.0) {
                throw config_error("schedule: cot(theta) must be >= 0 on the "
                                   "simulation window (violated at t = " +
                                   std::to_string(t) + ")");
            }
        }
    }

private:
    ScheduleKind m_kind = ScheduleKind::paper_tanh;
    TanhParameters m_tanh{};
    real m_theta = std::numbers::pi / 4;
    std::vector<std::pair<real, real>> m_knots;
};

inline MixingAngle mixing_angle(const ControlSchedule& schedule, real t)
{
    MixingAngle m;
    m.cot = schedule.cot_theta(t);
    m.theta = ControlSchedule::angle_from_cot(m.cot);
    if (std::isinf(m.cot)) {
        m.sin = 0.0;
        m.cos = 1.0;
    }
    else {
        const real r = std::hypot(1.0, m.cot);
        m.sin = 1.0 / r;
        m.cos = m.cot / r;
    }
    m.rate = schedule.theta_rate(t);
    return m;
}

/// Omega(t) = g sqrt(N) cot(theta(t)).
inline real rabi_frequency(const ControlSchedule& schedule, real t,
                           const PhysicalParams& params)
{
    return params.g_sqrt_n * schedule.cot_theta(t);
}

} // namespace eit
