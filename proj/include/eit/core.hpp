#pragma once

// Shared value types of the toolkit: physical parameters of the Lambda
// system, the periodic spatial grid and the error hierarchy.
//
// Unit conventions: the collective coupling g*sqrt(N) is the frequency unit
// and c = 1, so times are measured in (g sqrt N)^-1 and lengths in
// c/(g sqrt N). The dimensionless field envelope E(z, t) is used directly;
// no SI normalization is represented.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace eit {

using real = double;
using cplx = std::complex<double>;

inline constexpr cplx I{0.0, 1.0};

/// Malformed or invalid configuration (CLI exit code 1).
class config_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Non-finite values, failed quadrature, undefined analytic quantities
/// (CLI exit code 2).
class numerical_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// File system failures (CLI exit code 3).
class io_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/**
 * Rates, detunings and couplings of the three-level Lambda medium.
 *
 * The probe couples |b> <-> |a>, the control field couples |c> <-> |a>.
 * The two-photon detuning seen by the polariton equations is
 * delta_two_photon = delta_ac - delta_ab.
 */
struct PhysicalParams
{
    real g_sqrt_n = 1.0;
    real gamma_ab = 1.0;
    real gamma_a_to_b = 1.0;
    real gamma_a_to_c = 1.0;
    real gamma_ac = 1.0;
    real delta_ab = 0.0;
    real delta_ac = 0.0;
    real delta_two_photon = 0.0;
    real c_light = 1.0;
    real n_atoms = 1.0;

    /// total upper-state decay
    real gamma_a() const { return gamma_a_to_b + gamma_a_to_c; }

    /// single-atom coupling g
    real g_single() const { return g_sqrt_n / std::sqrt(n_atoms); }

    /// g*N, the source strength in the field equation
    real g_n() const { return g_sqrt_n * std::sqrt(n_atoms); }

    /// g^2 N
    real g2n() const { return g_sqrt_n * g_sqrt_n; }

    /// Sets delta_two_photon and moves delta_ac to keep the triple consistent.
    PhysicalParams with_two_photon_detuning(real delta) const
    {
        PhysicalParams p = *this;
        p.delta_two_photon = delta;
        p.delta_ac = delta_ab + delta;
        return p;
    }

    void validate() const
    {
        auto finite = [](real v) { return std::isfinite(v); };
        const real all[] = {g_sqrt_n, gamma_ab, gamma_a_to_b, gamma_a_to_c,
                            gamma_ac, delta_ab, delta_ac, delta_two_photon,
                            c_light, n_atoms};
        for (real v : all) {
            if (!finite(v)) {
                throw config_error("physical parameters must be finite");
            }
        }
        if (!(g_sqrt_n > 0.0)) {
            throw config_error("g_sqrt_n must be positive");
        }
        if (!(c_light > 0.0)) {
            throw config_error("c_light must be positive");
        }
        if (!(n_atoms > 0.0)) {
            throw config_error("n_atoms must be positive");
        }
        if (gamma_ab < 0.0 || gamma_ac < 0.0) {
            throw config_error("transverse decay rates must be non-negative");
        }
        if (gamma_a_to_b < 0.0 || gamma_a_to_c < 0.0) {
            throw config_error(
                "longitudinal decay rates must be non-negative");
        }
        const real scale = std::max({1.0, std::abs(delta_ab),
                                     std::abs(delta_ac)});
        if (std::abs(delta_two_photon - (delta_ac - delta_ab)) >
            1e-12 * scale) {
            throw config_error(
                "delta_two_photon must equal delta_ac - delta_ab");
        }
    }
};

/// Uniform periodic grid on [z_min, z_max); index n_points wraps to 0.
struct Grid
{
    real z_min = 0.0;
    real z_max = 160.0;
    std::size_t n_points = 8192;

    real length() const { return z_max - z_min; }
    real dz() const { return length() / static_cast<real>(n_points); }
    real z(std::size_t i) const
    {
        return z_min + static_cast<real>(i) * dz();
    }

    void validate() const
    {
        if (!std::isfinite(z_min) || !std::isfinite(z_max)) {
            throw config_error("grid bounds must be finite");
        }
        if (n_points < 8) {
            throw config_error("n_points must be at least 8");
        }
        if (!(z_max > z_min)) {
            throw config_error("z_max must exceed z_min");
        }
    }
};

} // namespace eit
