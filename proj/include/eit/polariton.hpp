#pragma once

// Dark- and bright-state polariton fields
//   Psi = cos(theta) E - sin(theta) sqrt(N) rho_cb e^{ikz}
//   Phi = sin(theta) E + cos(theta) sqrt(N) rho_cb e^{ikz}
// With the default k_probe = 0 the carrier is absorbed into rho_cb.

#include <cmath>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include <eit/core.hpp>
#include <eit/schedule.hpp>

namespace eit {

struct PolaritonField
{
    std::vector<cplx> psi;
    std::vector<cplx> phi;
    real theta = 0.0;
};

namespace detail {

inline void check_lengths(std::size_t a, std::size_t b, const Grid& grid)
{
    if (a != grid.n_points || b != grid.n_points) {
        throw std::invalid_argument("polariton transform: array length does "
                                    "not match grid");
    }
}

inline cplx carrier(real k_probe, real z)
{
    return k_probe == 0.0 ? cplx{1.0, 0.0} : std::polar(1.0, k_probe * z);
}

} // namespace detail

inline PolaritonField to_polaritons(std::span<const cplx> efield,
                                    std::span<const cplx> rho_cb, real theta,
                                    const Grid& grid,
                                    const PhysicalParams& params,
                                    real k_probe = 0.0)
{
    detail::check_lengths(efield.size(), rho_cb.size(), grid);
    const real s = std::sin(theta);
    const real c = std::cos(theta);
    const real sqrt_n = std::sqrt(params.n_atoms);

    PolaritonField out;
    out.theta = theta;
    out.psi.resize(grid.n_points);
    out.phi.resize(grid.n_points);
    for (std::size_t i = 0; i < grid.n_points; ++i) {
        const cplx spin = sqrt_n * rho_cb[i] * detail::carrier(k_probe,
                                                               grid.z(i));
        out.psi[i] = c * efield[i] - s * spin;
        out.phi[i] = s * efield[i] + c * spin;
    }
    return out;
}

/// Inverse rotation; returns (E, rho_cb).
inline std::pair<std::vector<cplx>, std::vector<cplx>>
from_polaritons(const PolaritonField& pol, const Grid& grid,
                const PhysicalParams& params, real k_probe = 0.0)
{
    detail::check_lengths(pol.psi.size(), pol.phi.size(), grid);
    const real s = std::sin(pol.theta);
    const real c = std::cos(pol.theta);
    const real sqrt_n = std::sqrt(params.n_atoms);

    std::vector<cplx> efield(grid.n_points);
    std::vector<cplx> rho_cb(grid.n_points);
    for (std::size_t i = 0; i < grid.n_points; ++i) {
        efield[i] = c * pol.psi[i] + s * pol.phi[i];
        const cplx spin = -s * pol.psi[i] + c * pol.phi[i];
        rho_cb[i] = spin * std::conj(detail::carrier(k_probe, grid.z(i))) /
                    sqrt_n;
    }
    return {std::move(efield), std::move(rho_cb)};
}

} // namespace eit
