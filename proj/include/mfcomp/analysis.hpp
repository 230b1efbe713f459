#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mfcomp/rng.hpp"
#include "mfcomp/series.hpp"

namespace mfcomp {

// How the m window start positions of a given box size are chosen. `random`
// draws them uniformly with replacement, `exhaustive` uses every admissible
// position (m = N - scale + 1), `aligned` tiles disjoint boxes from the start
// of the series (m = N / scale). Aligned boxes reproduce dyadic measures
// exactly and are the right choice for closed-form oracles; sliding windows
// carry a realization-dependent wobble in the extreme moments there.
enum class SamplingMode { random, exhaustive, aligned };

std::string to_string(SamplingMode mode);
SamplingMode sampling_mode_from_string(const std::string& name);

struct AnalysisConfig {
    std::vector<double> q_grid;          // must contain 0 and 1
    std::vector<std::size_t> scale_grid; // box sizes, ascending
    SamplingMode sampling = SamplingMode::random;
    double window_coverage = 2.0;        // m = ceil(coverage * N / scale)
    std::size_t min_windows = 10;
    std::optional<std::pair<std::size_t, std::size_t>> fit_range; // inclusive scale bounds
    std::uint64_t seed = 0;

    // q = -4..4 in steps of 1/4 and 30 box sizes log-spaced between
    // round(n/60) and round(n/3).
    static AnalysisConfig defaults(std::size_t n);

    // q grid for -q_max..q_max with the given step; values land on exact
    // multiples of the step where possible.
    static std::vector<double> make_q_grid(double q_max, double q_step);
    static std::vector<std::size_t> make_scale_grid(std::size_t n, std::size_t count,
                                                    double lo_fraction, double hi_fraction);

    std::size_t windows_for_scale(std::size_t n, std::size_t scale) const;
    void validate(std::size_t n) const;
};

// M_q(scale) on the q x scale grid, plus what was actually sampled.
struct PartitionTable {
    std::vector<double> q;
    std::vector<std::size_t> scales;
    std::vector<std::size_t> windows_used; // per scale
    std::size_t n = 0;                     // series length
    std::vector<double> values;            // row-major: [q_index * scales.size() + scale_index]

    double at(std::size_t qi, std::size_t si) const { return values[qi * scales.size() + si]; }
    double& at(std::size_t qi, std::size_t si) { return values[qi * scales.size() + si]; }
};

// tau(q) from the log-log regression of M_q against scale/N.
struct TauEstimate {
    std::vector<double> q;
    std::vector<double> tau;
    std::vector<double> tau_stderr;
    std::size_t scales_used = 0;
};

struct SingularitySpectrum {
    std::vector<double> q;
    std::vector<double> tau;
    std::vector<double> tau_stderr;
    std::vector<double> alpha; // d tau / d q
    std::vector<double> f;     // q * alpha - tau
    double alpha_min = 0.0;
    double alpha_max = 0.0;
    double delta_alpha = 0.0;
    std::vector<std::string> warnings;
};

struct AnalysisResult {
    PartitionTable table;
    SingularitySpectrum spectrum;
};

// Normalized window sums E_i = (sum over window) / (sum over series) for m
// windows of the given size at uniformly drawn start positions.
std::vector<double> interval_measures(const Series& series, std::size_t scale, std::size_t m,
                                      Rng& rng);

// Every admissible window position instead of a random sample.
std::vector<double> interval_measures_exhaustive(const Series& series, std::size_t scale);

PartitionTable partition_function(const Series& series, const AnalysisConfig& cfg);

TauEstimate fit_tau(const PartitionTable& table,
                    std::optional<std::pair<std::size_t, std::size_t>> fit_range = {});

// Legendre transform of tau(q): alpha by finite differences (central inside,
// one-sided at the ends), f = q * alpha - tau.
SingularitySpectrum legendre_spectrum(const TauEstimate& tau);

double singularity_width(const SingularitySpectrum& spectrum);

// partition_function + fit_tau + legendre_spectrum in one call.
AnalysisResult analyze(const Series& series, const AnalysisConfig& cfg);

} // namespace mfcomp
