#include "mfcomp/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>

#include "mfcomp/errors.hpp"

namespace mfcomp {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
} // namespace

struct RealFft::Impl {
    std::size_t n = 0;
    double* real = nullptr;
    fftw_complex* cplx = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan inv = nullptr;

    ~Impl() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        if (fwd)
            fftw_destroy_plan(fwd);
        if (inv)
            fftw_destroy_plan(inv);
        if (real)
            fftw_free(real);
        if (cplx)
            fftw_free(cplx);
    }
};

RealFft::RealFft(std::size_t n) : impl_(std::make_unique<Impl>()) {
    if (n < 2)
        throw ConfigError("RealFft: length must be at least 2");
    impl_->n = n;
    impl_->real = fftw_alloc_real(n);
    impl_->cplx = fftw_alloc_complex(n / 2 + 1);
    if (!impl_->real || !impl_->cplx)
        throw NumericError("RealFft: allocation failed");
    std::lock_guard<std::mutex> lock(planner_mutex());
    impl_->fwd = fftw_plan_dft_r2c_1d(static_cast<int>(n), impl_->real, impl_->cplx,
                                      FFTW_ESTIMATE);
    impl_->inv = fftw_plan_dft_c2r_1d(static_cast<int>(n), impl_->cplx, impl_->real,
                                      FFTW_ESTIMATE);
    if (!impl_->fwd || !impl_->inv)
        throw NumericError("RealFft: plan creation failed");
}

RealFft::~RealFft() = default;

std::size_t RealFft::size() const { return impl_->n; }

void RealFft::forward(std::span<const double> in, std::vector<std::complex<double>>& out) {
    if (in.size() != impl_->n)
        throw ConfigError("RealFft::forward: input length mismatch");
    std::copy(in.begin(), in.end(), impl_->real);
    fftw_execute(impl_->fwd);
    const std::size_t bins = impl_->n / 2 + 1;
    out.resize(bins);
    for (std::size_t k = 0; k < bins; ++k)
        out[k] = std::complex<double>(impl_->cplx[k][0], impl_->cplx[k][1]);
}

void RealFft::inverse(std::span<const std::complex<double>> in, std::vector<double>& out) {
    const std::size_t bins = impl_->n / 2 + 1;
    if (in.size() != bins)
        throw ConfigError("RealFft::inverse: spectrum length mismatch");
    for (std::size_t k = 0; k < bins; ++k) {
        impl_->cplx[k][0] = in[k].real();
        impl_->cplx[k][1] = in[k].imag();
    }
    fftw_execute(impl_->inv);
    out.resize(impl_->n);
    const double scale = 1.0 / static_cast<double>(impl_->n);
    for (std::size_t i = 0; i < impl_->n; ++i)
        out[i] = impl_->real[i] * scale;
}

} // namespace mfcomp
