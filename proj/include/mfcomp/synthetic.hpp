#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mfcomp/rng.hpp"
#include "mfcomp/series.hpp"

namespace mfcomp {

struct FgnSpec {
    double hurst = 0.5;
    std::size_t length = 0;
};

enum class FgnMethod { circulant, spectral };

std::string to_string(FgnMethod method);

struct FgnOutput {
    Series series;
    FgnMethod method = FgnMethod::circulant;
};

// Unit-variance fractional Gaussian noise. Circulant embedding of the exact
// autocovariance gamma(k) = (|k+1|^2H - 2|k|^2H + |k-1|^2H) / 2 is tried
// first; if the embedding eigenvalues go negative the approximate spectral
// synthesis is used instead and reported in `method`.
FgnOutput generate_fgn(const FgnSpec& spec, Rng& rng);

struct CascadeSpec {
    double p = 0.3;        // multiplier, 0 < p <= 0.5
    std::size_t depth = 10; // number of splits; series length is 2^depth
    bool randomize = true;  // shuffle the (p, 1-p) order per node
};

// Deterministic multiplicative measure on 2^depth leaves; total mass 1.
Series binomial_cascade(const CascadeSpec& spec, Rng& rng);

// Closed-form scaling exponents of the cascade: -log2(p^q + (1-p)^q).
double cascade_tau(double p, double q);
std::vector<double> cascade_tau(double p, const std::vector<double>& q_grid);

struct HurstEstimate {
    double hurst = 0.0;
    double stderr_ = 0.0;
    std::size_t scales_used = 0;
};

// Detrended fluctuation analysis with linear detrending, fluctuation
// exponent fitted on log-spaced window sizes in [16, n/8].
HurstEstimate estimate_hurst(const Series& series);

} // namespace mfcomp
