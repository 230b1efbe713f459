#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "mfcomp/rng.hpp"
#include "mfcomp/series.hpp"

namespace mfcomp {

// A one-sided positive distribution to draw volatility-like samples from.
struct DistributionSpec {
    enum class Family { empirical, gaussian_abs, student_abs, weibull };

    Family family = Family::gaussian_abs;
    double mu = 0.0;     // gaussian_abs: |N(mu, sigma)|
    double sigma = 1.0;
    double gamma = 3.0;  // student_abs: |t_gamma|, location 0, unit scale, gamma > 2
    double beta = 1.0;   // weibull shape, 0 < beta <= 1 for stretched-exponential tails
    std::shared_ptr<const Series> reference; // empirical: resample this series

    static DistributionSpec empirical(Series reference_series);
    static DistributionSpec gaussian_abs(double mu, double sigma);
    static DistributionSpec student_abs(double gamma);
    static DistributionSpec weibull(double beta);

    void validate() const;
    std::string describe() const;
};

std::string to_string(DistributionSpec::Family family);
DistributionSpec::Family distribution_family_from_string(const std::string& name);

struct IaaftReport {
    std::size_t iterations = 0;
    double spectrum_mismatch = 0.0; // relative L2 error over non-DC bins
    bool converged = false;
};

// Fourier magnitudes |X_k| of a series, k = 0..n/2.
struct AmplitudeTarget {
    std::size_t length = 0;
    std::vector<double> amplitude;

    static AmplitudeTarget from_series(const Series& series);
};

// Uniform random permutation of the values.
Series shuffle(const Series& series, Rng& rng);

// Draws `count` i.i.d. values from the empirical distribution of `reference`
// by inverting its staircase CDF with linear interpolation between order
// statistics. Uniform variates are affinely mapped onto [min F, 1] so that
// the sample spans the reference range without exceeding it.
Series empirical_inverse_cdf_sample(const Series& reference, std::size_t count, Rng& rng);

// Iterative amplitude-adjusted Fourier transform: alternates enforcing the
// target Fourier magnitudes with restoring the exact value multiset of
// `source` (by rank), until the value ordering stops changing or max_iter is
// reached. The value multiset owns the mean and the total AC power, so the
// DC bin always keeps the source mean and the rest of the target is rescaled
// to the source's power: only the spectral shape is enforced, and the
// reported mismatch is a shape error. `shuffle_start` randomizes the initial
// ordering; with it off the iteration starts from the given ordering, so a
// series whose spectrum already matches the target is a fixed point.
std::pair<Series, IaaftReport> iaaft(const Series& source, const AmplitudeTarget& target,
                                     Rng& rng, std::size_t max_iter = 1000,
                                     bool shuffle_start = true);

// Surrogate with the same values and the same amplitude spectrum as the
// input but randomized phases: IAAFT toward the input's own amplitudes from
// a shuffled start. Keeps linear correlations, destroys nonlinear structure.
std::pair<Series, IaaftReport> linear_memory_surrogate(const Series& series, Rng& rng,
                                                       std::size_t max_iter = 1000);

// Draws fresh values from `spec` and arranges them in the rank order of
// `reference`: the result has the new marginal distribution but the original
// temporal ordering pattern. Ties in the reference keep index order.
Series rank_remap(const Series& reference, const DistributionSpec& spec, Rng& rng);

// i.i.d. sample of the given length from `spec`.
Series sample_distribution(const DistributionSpec& spec, std::size_t count, Rng& rng);

} // namespace mfcomp
