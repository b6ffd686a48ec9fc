#pragma once

// Density-matrix equations of the Lambda system in the rotating frame with
// all carrier phases absorbed (e^{ikz} = e^{i dk z} = 1) and a real control
// Rabi frequency. rho_ba, rho_ca and rho_bc are the conjugates of the stored
// coherences.

#include <cmath>
#include <complex>
#include <vector>

#include <eit/core.hpp>

namespace eit {

struct AtomState
{
    real rho_aa = 0.0;
    real rho_bb = 1.0;
    real rho_cc = 0.0;
    cplx rho_ab{};
    cplx rho_ac{};
    cplx rho_cb{};

    real trace() const { return rho_aa + rho_bb + rho_cc; }

    static AtomState zero()
    {
        AtomState s;
        s.rho_bb = 0.0;
        return s;
    }

    AtomState& operator+=(const AtomState& o)
    {
        rho_aa += o.rho_aa;
        rho_bb += o.rho_bb;
        rho_cc += o.rho_cc;
        rho_ab += o.rho_ab;
        rho_ac += o.rho_ac;
        rho_cb += o.rho_cb;
        return *this;
    }

    AtomState& operator*=(real f)
    {
        rho_aa *= f;
        rho_bb *= f;
        rho_cc *= f;
        rho_ab *= f;
        rho_ac *= f;
        rho_cb *= f;
        return *this;
    }

    friend AtomState operator+(AtomState a, const AtomState& b)
    {
        return a += b;
    }
    friend AtomState operator*(real f, AtomState a) { return a *= f; }
};

/// Probe field envelope plus atoms on the grid at time t.
struct MediumState
{
    std::vector<cplx> efield;
    std::vector<AtomState> atoms;
    real t = 0.0;
};

/// Full nonlinear right-hand side.
inline AtomState bloch_rhs_full(const AtomState& s, cplx efield, real omega,
                                const PhysicalParams& p)
{
    const real g = p.g_single();
    const cplx ge = g * efield;
    const cplx rho_ca = std::conj(s.rho_ac);
    const cplx rho_bc = std::conj(s.rho_cb);

    // i(X - conj X) = -2 Im X
    const real probe_flow = -2.0 * std::imag(std::conj(ge) * s.rho_ab);
    const real drive_flow = -2.0 * std::imag(omega * s.rho_ac);

    AtomState d;
    d.rho_aa = -p.gamma_a() * s.rho_aa - probe_flow - drive_flow;
    d.rho_bb = p.gamma_a_to_b * s.rho_aa + probe_flow;
    d.rho_cc = p.gamma_a_to_c * s.rho_aa + drive_flow;
    d.rho_ab = -cplx{p.gamma_ab, p.delta_ab} * s.rho_ab +
               I * ge * (s.rho_bb - s.rho_aa) + I * omega * s.rho_cb;
    d.rho_ac = -cplx{p.gamma_ac, p.delta_ac} * s.rho_ac +
               I * omega * (s.rho_cc - s.rho_aa) + I * ge * rho_bc;
    d.rho_cb = -I * (p.delta_ab - p.delta_ac) * s.rho_cb +
               I * omega * s.rho_ab - I * ge * rho_ca;
    return d;
}

/// Weak-probe limit: rho_bb = 1, rho_aa = rho_cc = rho_ac = 0 frozen; only
/// rho_ab and rho_cb evolve.
inline AtomState bloch_rhs_linear(const AtomState& s, cplx efield, real omega,
                                  const PhysicalParams& p)
{
    AtomState d = AtomState::zero();
    d.rho_ab = -cplx{p.gamma_ab, p.delta_ab} * s.rho_ab +
               I * p.g_single() * efield + I * omega * s.rho_cb;
    d.rho_cb = -I * (p.delta_ab - p.delta_ac) * s.rho_cb +
               I * omega * s.rho_ab;
    return d;
}

struct SusceptibilityResult
{
    cplx value{};
    bool pole = false;
};

/**
 * Steady-state weak-probe response rho_ab / (g E).
 *
 * Uses params.delta_ac for the coupling transition and probe_detuning as
 * delta_ab. Zero at two-photon resonance for any omega > 0; reduces to the
 * bare two-level response i / gamma_ab at omega = 0.
 */
inline SusceptibilityResult
steady_state_susceptibility(const PhysicalParams& params, real omega,
                            real probe_detuning)
{
    const cplx gamma{params.gamma_ab, probe_detuning};
    const real raman = probe_detuning - params.delta_ac;

    SusceptibilityResult r;
    if (raman == 0.0) {
        // rho_cb equation forces rho_ab = 0 unless the drive vanishes too
        if (omega != 0.0) {
            r.value = 0.0;
            return r;
        }
        if (gamma == cplx{}) {
            r.pole = true;
            return r;
        }
        r.value = I / gamma;
        return r;
    }
    const cplx denom = gamma * (I * raman) + omega * omega;
    if (denom == cplx{}) {
        r.pole = true;
        return r;
    }
    r.value = I * (I * raman) / denom;
    return r;
}

} // namespace eit
