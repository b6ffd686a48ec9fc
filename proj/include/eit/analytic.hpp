#pragma once

// Perturbative dark-state polariton dynamics.
//
// To second order in the adiabaticity and detuning parameters the dark-state
// polariton obeys
//
//   (d/dt + c cos^2(theta) d/dz - i delta sin^2(theta)) Psi =
//       -(A0 + delta^2 A1) Psi - i delta B0 c dPsi/dz - C0 c^2 d^2Psi/dz^2
//
// with coefficients depending on time only, so every Fourier mode evolves
// by a scalar exponential.

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include <eit/config.hpp>
#include <eit/core.hpp>
#include <eit/fft.hpp>
#include <eit/quadrature.hpp>
#include <eit/schedule.hpp>

namespace eit {

struct PerturbationCoefficients
{
    real a0 = 0.0;
    real a1 = 0.0;
    real b0 = 0.0;
    real c0 = 0.0;
};

struct ExpansionDiagnostics
{
    real transfer_time = 0.0;
    real eps1 = 0.0;
    real eps2 = 0.0;
    real gamma_T = 0.0;
    std::vector<std::string> warnings;

    bool valid() const { return warnings.empty(); }
};

inline PerturbationCoefficients coefficients_at(const ControlSchedule& schedule,
                                                const PhysicalParams& params,
                                                real t)
{
    const auto m = mixing_angle(schedule, t);
    const real pref = params.gamma_ab / params.g2n();
    const real s2 = m.sin * m.sin;
    const real c2 = m.cos * m.cos;

    PerturbationCoefficients k;
    k.a0 = pref * m.rate * m.rate * s2;
    k.a1 = pref * s2 * s2 * c2;
    k.c0 = -k.a1;
    k.b0 = 2.0 * k.c0;
    return k;
}

/// T = integral of cos^2(theta) sin^4(theta) over [t0, t1].
inline real transfer_time(const ControlSchedule& schedule, real t0, real t1)
{
    if (!(t1 > t0)) {
        throw numerical_error("transfer_time: need t0 < t1");
    }
    auto f = [&](real t) {
        const auto m = mixing_angle(schedule, t);
        const real s2 = m.sin * m.sin;
        return m.cos * m.cos * s2 * s2;
    };
    return integrate(f, schedule.breakpoints(t0, t1)).value;
}

/// delta_2ph = g sqrt(N) / sqrt(gamma T)
inline real two_photon_linewidth(const PhysicalParams& params, real T)
{
    if (!(T > 0.0)) {
        throw numerical_error("two-photon linewidth undefined: transfer time "
                              "T must be positive");
    }
    if (!(params.gamma_ab > 0.0)) {
        throw numerical_error("two-photon linewidth undefined: gamma_ab must "
                              "be positive");
    }
    return params.g_sqrt_n / std::sqrt(params.gamma_ab * T);
}

/// exp(-gamma delta^2 T / g^2 N), an amplitude factor.
inline real loss_factor_from_T(real delta, real T, const PhysicalParams& params)
{
    return std::exp(-params.gamma_ab * delta * delta * T / params.g2n());
}

inline real loss_factor(real delta, const ControlSchedule& schedule,
                        const PhysicalParams& params, real t0, real t1)
{
    return loss_factor_from_T(delta, transfer_time(schedule, t0, t1), params);
}

/// The integrated output intensity of a storage/retrieval cycle falls off as
/// loss_factor^p; p = 2 since the loss factor multiplies the polariton
/// amplitude. Confirmed against the full Maxwell-Bloch detuning sweep.
inline constexpr int intensity_loss_power = 2;

inline real intensity_loss(real delta, real T, const PhysicalParams& params)
{
    return std::pow(loss_factor_from_T(delta, T, params),
                    intensity_loss_power);
}

namespace detail {

inline void check_grid(std::span<const cplx> psi, const Grid& grid)
{
    if (psi.size() != grid.n_points) {
        throw std::invalid_argument("field length does not match grid");
    }
}

} // namespace detail

/// Adiabatic limit: form-stable transport by c * int cos^2 plus the chirp
/// exp(i delta int sin^2). The shift is applied spectrally.
inline std::vector<cplx> zeroth_order_evolve(std::span<const cplx> psi0,
                                             const Grid& grid, real delta,
                                             const ControlSchedule& schedule,
                                             const PhysicalParams& params,
                                             real t0, real t1)
{
    detail::check_grid(psi0, grid);
    auto cos2 = [&](real t) {
        const auto m = mixing_angle(schedule, t);
        return m.cos * m.cos;
    };
    auto sin2 = [&](real t) {
        const auto m = mixing_angle(schedule, t);
        return m.sin * m.sin;
    };
    const auto pts = schedule.breakpoints(t0, t1);
    const real shift = params.c_light * integrate(cos2, pts).value;
    const real phase = delta * integrate(sin2, pts).value;

    Fft1d fft(grid.n_points);
    auto spec = fft.forward(psi0);
    const auto k = wavenumbers(grid);
    for (std::size_t j = 0; j < spec.size(); ++j) {
        spec[j] *= std::polar(1.0, phase - k[j] * shift);
    }
    return fft.backward(spec);
}

/// Switches for the individual loss/dispersion terms.
struct TermMask
{
    bool a0 = true;
    bool a1 = true;
    bool b0 = true;
    bool c0 = true;
};

/// Time integrals of the per-mode exponent ingredients.
struct CoefficientIntegrals
{
    real sin2 = 0.0;
    real cos2 = 0.0;
    real a0 = 0.0;
    real a1 = 0.0;
    real b0 = 0.0;
    real c0 = 0.0;
};

/// Composite Simpson over n_panels (rounded up to even) panels.
inline CoefficientIntegrals integrate_coefficients(
    const ControlSchedule& schedule, const PhysicalParams& params, real t0,
    real t1, std::size_t n_panels)
{
    if (n_panels < 2) n_panels = 2;
    if (n_panels % 2) ++n_panels;
    const real h = (t1 - t0) / static_cast<real>(n_panels);

    CoefficientIntegrals acc;
    for (std::size_t i = 0; i <= n_panels; ++i) {
        const real w = (i == 0 || i == n_panels) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        const real t = t0 + h * static_cast<real>(i);
        const auto m = mixing_angle(schedule, t);
        const auto c = coefficients_at(schedule, params, t);
        acc.sin2 += w * m.sin * m.sin;
        acc.cos2 += w * m.cos * m.cos;
        acc.a0 += w * c.a0;
        acc.a1 += w * c.a1;
        acc.b0 += w * c.b0;
        acc.c0 += w * c.c0;
    }
    const real f = h / 3.0;
    acc.sin2 *= f;
    acc.cos2 *= f;
    acc.a0 *= f;
    acc.a1 *= f;
    acc.b0 *= f;
    acc.c0 *= f;
    return acc;
}

struct SecondOrderResult
{
    std::vector<cplx> psi;
    /// |Psi(k_Nyquist)| / max_k |Psi(k)| of the input
    real nyquist_ratio = 0.0;
    bool under_resolved = false;
};

/**
 * Integrates the second-order polariton equation exactly per Fourier mode:
 *
 *   Psi(k, t1) = Psi(k, t0) exp( i delta S - i c k C - IA0 - delta^2 IA1
 *                                + delta c k IB0 + c^2 k^2 IC0 )
 *
 * where S, C, IA0, ... are the time integrals of sin^2, cos^2, A0, ... over
 * [t0, t1] (composite Simpson with n_substeps panels).
 */
inline SecondOrderResult second_order_evolve(std::span<const cplx> psi0,
                                             const Grid& grid, real delta,
                                             const ControlSchedule& schedule,
                                             const PhysicalParams& params,
                                             real t0, real t1,
                                             std::size_t n_substeps = 4096,
                                             TermMask mask = {})
{
    detail::check_grid(psi0, grid);
    const auto in = integrate_coefficients(schedule, params, t0, t1,
                                           n_substeps);
    const real c = params.c_light;

    Fft1d fft(grid.n_points);
    auto spec = fft.forward(psi0);

    SecondOrderResult r;
    real peak = 0.0;
    for (const auto& v : spec) peak = std::max(peak, std::abs(v));
    const std::size_t nyq = nyquist_index(grid);
    if (peak > 0.0 && nyq < spec.size()) {
        r.nyquist_ratio = std::abs(spec[nyq]) / peak;
        r.under_resolved = r.nyquist_ratio > 1e-8;
    }

    const auto k = wavenumbers(grid);
    for (std::size_t j = 0; j < spec.size(); ++j) {
        const real ck = c * k[j];
        real decay = 0.0;
        if (mask.a0) decay -= in.a0;
        if (mask.a1) decay -= delta * delta * in.a1;
        if (mask.b0) decay += delta * ck * in.b0;
        if (mask.c0) decay += ck * ck * in.c0;
        const real phase = delta * in.sin2 - ck * in.cos2;
        spec[j] *= std::exp(decay) * std::polar(1.0, phase);
    }
    r.psi = fft.backward(spec);
    return r;
}

/// Phi^(2) = (gamma sin^2/g^2N) [theta' - i delta sin cos] Psi
///           - (gamma sin^3 cos/g^2N) c dPsi/dz, derivative taken spectrally.
inline std::vector<cplx> bright_polariton_estimate(
    std::span<const cplx> psi, const Grid& grid, real delta,
    const ControlSchedule& schedule, const PhysicalParams& params, real t)
{
    detail::check_grid(psi, grid);
    const auto m = mixing_angle(schedule, t);
    const real pref = params.gamma_ab / params.g2n();
    const real s = m.sin;
    const real co = m.cos;

    Fft1d fft(grid.n_points);
    auto spec = fft.forward(psi);
    const auto k = wavenumbers(grid);
    const std::size_t nyq = nyquist_index(grid);
    for (std::size_t j = 0; j < spec.size(); ++j) {
        spec[j] *= (j == nyq) ? cplx{} : I * k[j];
    }
    const auto dpsi = fft.backward(spec);

    const cplx local = pref * s * s * cplx{m.rate, -delta * s * co};
    const real grad = pref * s * s * s * co * params.c_light;
    std::vector<cplx> phi(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i) {
        phi[i] = local * psi[i] - grad * dpsi[i];
    }
    return phi;
}

inline ExpansionDiagnostics diagnostics(const SimulationConfig& cfg)
{
    const auto& p = cfg.params;
    ExpansionDiagnostics d;
    d.transfer_time = transfer_time(cfg.schedule, cfg.t_start, cfg.t_end);
    const real T = d.transfer_time;
    d.eps1 = T > 0.0 ? 1.0 / (p.g_sqrt_n * T)
                     : std::numeric_limits<real>::infinity();
    d.eps2 = std::abs(p.delta_two_photon) / p.g_sqrt_n;
    d.gamma_T = p.gamma_ab * T;
    if (d.eps1 > 0.1) {
        d.warnings.push_back("eps1 = 1/(g sqrt(N) T) exceeds 0.1: adiabatic "
                             "expansion is marginal");
    }
    if (d.eps2 > 0.5) {
        d.warnings.push_back("eps2 = delta/(g sqrt(N)) exceeds 0.5: detuning "
                             "expansion is marginal");
    }
    if (d.gamma_T < 3.0) {
        d.warnings.push_back("gamma T below 3: decay is not fast compared "
                             "with the transfer");
    }
    return d;
}

} // namespace eit
