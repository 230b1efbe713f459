#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mfcomp/analysis.hpp"
#include "mfcomp/surrogates.hpp"

namespace mfcomp {

struct EnsembleStat {
    double mean = 0.0;
    double stddev = 0.0;
    std::size_t count = 0;
    std::size_t failures = 0;
};

// Ensemble-averaged singularity spectra of the surrogate legs, for plotting
// alongside the original.
struct LegSpectra {
    std::vector<double> q;
    std::vector<double> alpha_original, f_original;
    std::vector<double> alpha_linear, f_linear;   // linear-memory surrogates
    std::vector<double> alpha_shuffled, f_shuffled;
    std::vector<double> alpha_gaussian, f_gaussian; // rank-remapped to |N(mu, sigma)|
};

struct DecomposeOptions {
    std::size_t ensemble = 100;
    std::uint64_t seed = 0;
    std::size_t iaaft_max_iter = 1000;
    // Parameters of the Gaussian reference; defaults to the sample mean and
    // standard deviation of the input.
    std::optional<std::pair<double, double>> gaussian_params;
    std::size_t threads = 1;
};

// The width decomposition. `width` is the apparent singularity width of the
// input; the finite-size component is the mean width of its linear-memory
// surrogates; the nonlinearity component is what remains in the Gaussian
// reference chain; the distribution component is the rest. pdf is defined by
// subtraction, so width - fse.mean - nl == pdf bit for bit.
struct ComponentReport {
    double width = 0.0;
    EnsembleStat fse;        // linear-memory surrogates of the input
    EnsembleStat shuffled;   // temporal-order destruction control
    EnsembleStat norm;       // Gaussian rank remaps
    EnsembleStat norm_fse;   // linear-memory surrogates of the remaps
    EnsembleStat norm_shuffled;
    double eff = 0.0;        // width - fse.mean
    double eff_std = 0.0;
    double nl = 0.0;         // norm.mean - norm_fse.mean
    double nl_std = 0.0;
    double pdf = 0.0;        // eff - nl
    double pdf_std = 0.0;
    double gaussian_mu = 0.0;
    double gaussian_sigma = 0.0;
    std::size_t ensemble = 0;
    std::uint64_t seed = 0;
    LegSpectra spectra;
    std::vector<std::string> notes;
};

ComponentReport decompose(const Series& series, const AnalysisConfig& cfg,
                          const DecomposeOptions& options);

// One tail-parameter setting of a distribution sweep.
struct SweepPoint {
    double parameter = 0.0;
    EnsembleStat width;   // remapped series
    EnsembleStat fse;     // their linear-memory surrogates
    EnsembleStat shuffled;
    double eff = 0.0;
    double eff_std = 0.0;
    double pdf = 0.0;
    double pdf_std = 0.0;
};

// Width components as a function of the tail parameter of a replacement
// marginal (Student-t tail exponent or Weibull shape). The nonlinearity
// component is shared: remapping preserves the ordering, so the Gaussian
// reference chain of the input applies to every grid point.
struct SweepTable {
    DistributionSpec::Family family = DistributionSpec::Family::student_abs;
    std::vector<SweepPoint> points;
    double nl = 0.0;
    double nl_std = 0.0;
    EnsembleStat norm;
    EnsembleStat norm_fse;
    std::uint64_t seed = 0;
    std::vector<std::string> notes;
};

SweepTable family_sweep(const Series& series, DistributionSpec::Family family,
                        const std::vector<double>& parameter_grid, const AnalysisConfig& cfg,
                        const DecomposeOptions& options);

} // namespace mfcomp
