#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace mfcomp {

// Real-to-complex FFT of a fixed length n, backed by FFTW. Plans are created
// once per instance; plan creation is serialized internally because the FFTW
// planner is not thread safe, while execution on per-instance buffers is.
class RealFft {
public:
    explicit RealFft(std::size_t n);
    ~RealFft();
    RealFft(const RealFft&) = delete;
    RealFft& operator=(const RealFft&) = delete;

    std::size_t size() const;

    // in: n reals -> out: n/2 + 1 unnormalized spectrum bins.
    void forward(std::span<const double> in, std::vector<std::complex<double>>& out);

    // in: n/2 + 1 bins -> out: n reals, scaled by 1/n so that
    // inverse(forward(x)) == x up to rounding.
    void inverse(std::span<const std::complex<double>> in, std::vector<double>& out);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace mfcomp
