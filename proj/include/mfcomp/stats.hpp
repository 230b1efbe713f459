#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mfcomp {

// Ordinary least squares fit y = slope * x + intercept.
struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double intercept_stderr = 0.0;
    double residual_ss = 0.0;
    std::size_t n = 0;
};

LinearFit fit_line(std::span<const double> x, std::span<const double> y);

double mean(std::span<const double> v);
double sample_variance(std::span<const double> v);
double sample_stddev(std::span<const double> v);

// prefix[i] = sum of v[0..i), so a window sum is prefix[b] - prefix[a].
std::vector<double> prefix_sums(std::span<const double> v);

// Indices that would sort v ascending; equal values keep their original
// relative order.
std::vector<std::size_t> argsort_stable(std::span<const double> v);

// rank[i] = position of v[i] in the ascending order, ties broken by index.
std::vector<std::size_t> ranks_stable(std::span<const double> v);

// Sample autocorrelation at lags 0..max_lag.
std::vector<double> autocorrelation(std::span<const double> v, std::size_t max_lag);

} // namespace mfcomp
