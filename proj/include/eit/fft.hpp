#pragma once

// Thin RAII layer over FFTW for complex 1-D transforms on the periodic grid.
// Plans are created once per size (planner access is serialized); execution
// uses the new-array interface and is safe from several threads.

#include <cstring>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include <fftw3.h>

#include <eit/core.hpp>

namespace eit {

namespace detail {

inline std::mutex& fftw_planner_mutex()
{
    static std::mutex m;
    return m;
}

struct fftw_buffer_deleter
{
    void operator()(fftw_complex* p) const { fftw_free(p); }
};

struct fftw_plan_deleter
{
    void operator()(fftw_plan_s* p) const
    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(p);
    }
};

} // namespace detail

class Fft1d
{
public:
    explicit Fft1d(std::size_t n) : m_n(n)
    {
        if (n == 0) {
            throw std::invalid_argument("Fft1d: size must be positive");
        }
        m_in.reset(fftw_alloc_complex(n));
        m_out.reset(fftw_alloc_complex(n));
        std::lock_guard lock(detail::fftw_planner_mutex());
        m_forward.reset(fftw_plan_dft_1d(static_cast<int>(n), m_in.get(),
                                         m_out.get(), FFTW_FORWARD,
                                         FFTW_ESTIMATE));
        m_backward.reset(fftw_plan_dft_1d(static_cast<int>(n), m_in.get(),
                                          m_out.get(), FFTW_BACKWARD,
                                          FFTW_ESTIMATE));
    }

    std::size_t size() const { return m_n; }

    /// X_j = sum_n x_n exp(-2 pi i j n / N)
    std::vector<cplx> forward(std::span<const cplx> x) const
    {
        return execute(m_forward.get(), x, 1.0);
    }

    /// Inverse including the 1/N normalization.
    std::vector<cplx> backward(std::span<const cplx> x) const
    {
        return execute(m_backward.get(), x, 1.0 / static_cast<real>(m_n));
    }

private:
    std::vector<cplx> execute(fftw_plan plan, std::span<const cplx> x,
                              real scale) const
    {
        if (x.size() != m_n) {
            throw std::invalid_argument("Fft1d: input length mismatch");
        }
        std::unique_ptr<fftw_complex, detail::fftw_buffer_deleter> in(
            fftw_alloc_complex(m_n));
        std::unique_ptr<fftw_complex, detail::fftw_buffer_deleter> out(
            fftw_alloc_complex(m_n));
        std::memcpy(in.get(), x.data(), m_n * sizeof(fftw_complex));
        fftw_execute_dft(plan, in.get(), out.get());

        std::vector<cplx> result(m_n);
        std::memcpy(static_cast<void*>(result.data()), out.get(),
                    m_n * sizeof(fftw_complex));
        if (scale != 1.0) {
            for (auto& v : result) v *= scale;
        }
        return result;
    }

    std::size_t m_n;
    std::unique_ptr<fftw_complex, detail::fftw_buffer_deleter> m_in;
    std::unique_ptr<fftw_complex, detail::fftw_buffer_deleter> m_out;
    std::unique_ptr<fftw_plan_s, detail::fftw_plan_deleter> m_forward;
    std::unique_ptr<fftw_plan_s, detail::fftw_plan_deleter> m_backward;
};

/// Angular wavenumbers matching Fft1d's ordering. The Nyquist entry
/// (even n) is assigned -pi/dz.
inline std::vector<real> wavenumbers(const Grid& grid)
{
    const std::size_t n = grid.n_points;
    const real dk = 2.0 * std::numbers::pi / grid.length();
    std::vector<real> k(n);
    for (std::size_t j = 0; j < n; ++j) {
        const auto jj = static_cast<long long>(j);
        const auto nn = static_cast<long long>(n);
        k[j] = dk * static_cast<real>(2 * jj < nn ? jj : jj - nn);
    }
    return k;
}

/// Index of the Nyquist mode, or n if there is none (odd n).
inline std::size_t nyquist_index(const Grid& grid)
{
    return grid.n_points % 2 == 0 ? grid.n_points / 2 : grid.n_points;
}

} // namespace eit
