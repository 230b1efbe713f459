#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mfcomp/stats.hpp"
#include "mfcomp/surrogates.hpp"

namespace mfcomp {

// One (H, L) cell of a finite-size calibration scan.
struct FseCell {
    double hurst = 0.0;
    std::size_t length = 0;
    double mean_width = 0.0;
    double std_width = 0.0;
    std::size_t ensemble = 0; // members that succeeded
    std::size_t failures = 0;
};

struct FseTable {
    std::vector<FseCell> cells;
    std::string pdf; // description of the marginal the members were drawn from
    std::pair<double, double> scaling_window{1000.0, 138950.0};

    std::vector<double> hurst_values() const;
    std::vector<std::size_t> length_values() const;
    const FseCell* find(double hurst, std::size_t length) const;
};

struct FseScanOptions {
    std::size_t ensemble = 20;
    std::uint64_t seed = 0;
    std::size_t iaaft_max_iter = 300;
    std::pair<double, double> scaling_window{1000.0, 138950.0};
    std::size_t threads = 1;
};

// For every (H, L) pair: draw an i.i.d. sample from `pdf`, impose the
// amplitude spectrum of a fresh fractional Gaussian noise with exponent H
// via IAAFT, measure the apparent singularity width, and average over the
// ensemble. The result quantifies the spurious width a monofractal
// long-memory series of that size exhibits.
FseTable fse_scan(const DistributionSpec& pdf, const std::vector<double>& hurst_list,
                  const std::vector<std::size_t>& length_list, const FseScanOptions& options);

// Per-H exponent a of mean_width ~ L^a, fitted over lengths inside the
// scaling window.
struct PowerLawFit {
    double hurst = 0.0;
    double exponent = 0.0;
    double stderr_ = 0.0;
    std::size_t points = 0;
};

std::vector<PowerLawFit> fit_power_exponent(const FseTable& table);

struct FseFit {
    std::vector<PowerLawFit> exponents;
    LinearFit a_vs_h;        // a(H) regressed on H, H = 0.1 excluded
    std::vector<double> g_h; // H values of the collapse
    std::vector<double> g_mean; // <g(H)> with g = width * L^{-(2H-2)}
    LinearFit ln_g_vs_h;     // ln <g> regressed on H
};

FseFit fit_linear_laws(const FseTable& table, const std::vector<PowerLawFit>& exponents);

struct FsePrediction {
    double width = 0.0;
    bool from_table = false; // true: bilinear interpolation, false: closed form
};

// Expected spurious width for a series of length L with Hurst exponent H.
// Uses bilinear interpolation in (H, ln L) when the query lies inside the
// table grid, otherwise the closed form L^{-2(1-H)} e^{10(1-H)}.
FsePrediction fse_predict(double hurst, double length, const FseTable& table);

double fse_closed_form(double hurst, double length);

} // namespace mfcomp
