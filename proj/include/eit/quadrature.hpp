#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <eit/core.hpp>

namespace eit {

class quadrature_error : public numerical_error
{
public:
    quadrature_error(const std::string& what, real achieved)
        : numerical_error(what), m_achieved(achieved)
    {
    }

    real achieved_error() const { return m_achieved; }

private:
    real m_achieved;
};

struct QuadratureResult
{
    real value = 0.0;
    real error = 0.0;
};

/**
 * Adaptive 31-point Gauss-Kronrod quadrature to an absolute tolerance.
 *
 * The relative tolerance handed to the adaptive driver is derived from a
 * first coarse estimate of the L1 norm; throws quadrature_error when the
 * achieved error estimate stays above abs_tol.
 */
template <class F>
QuadratureResult integrate(F&& f, real a, real b, real abs_tol = 1e-10,
                           unsigned max_depth = 20)
{
    using gk = boost::math::quadrature::gauss_kronrod<real, 31>;
    if (a == b) return {};

    real coarse_err = 0.0;
    real l1 = 0.0;
    gk::integrate(f, a, b, 0, 0.0, &coarse_err, &l1);
    if (l1 == 0.0) return {};
    if (!std::isfinite(l1)) {
        throw quadrature_error("integrand is not finite", l1);
    }

    const real rel = std::max(0.1 * abs_tol / l1,
                              4 * std::numeric_limits<real>::epsilon());
    QuadratureResult r;
    r.value = gk::integrate(f, a, b, max_depth, rel, &r.error, &l1);
    if (!std::isfinite(r.value) || r.error > abs_tol) {
        throw quadrature_error("quadrature did not converge: achieved error " +
                                   std::to_string(r.error),
                               r.error);
    }
    return r;
}

/// Integrates over consecutive points, e.g. the kinks of a piecewise
/// integrand; the tolerance is shared in proportion to piece length.
template <class F>
QuadratureResult integrate(F&& f, std::span<const real> points,
                           real abs_tol = 1e-10, unsigned max_depth = 20)
{
    QuadratureResult total;
    if (points.size() < 2) return total;
    const real span = points.back() - points.front();
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        const real a = points[i];
        const real b = points[i + 1];
        const auto r = integrate(f, a, b, abs_tol * (b - a) / span, max_depth);
        total.value += r.value;
        total.error += r.error;
    }
    return total;
}

} // namespace eit
