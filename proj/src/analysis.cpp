#include "mfcomp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mfcomp/errors.hpp"
#include "mfcomp/stats.hpp"

namespace mfcomp {

std::string to_string(SamplingMode mode) {
    switch (mode) {
    case SamplingMode::random: return "random";
    case SamplingMode::exhaustive: return "exhaustive";
    case SamplingMode::aligned: return "aligned";
    }
    return "unknown";
}

SamplingMode sampling_mode_from_string(const std::string& name) {
    if (name == "random") return SamplingMode::random;
    if (name == "exhaustive") return SamplingMode::exhaustive;
    if (name == "aligned") return SamplingMode::aligned;
    throw ConfigError("unknown sampling mode: " + name);
}

std::vector<double> AnalysisConfig::make_q_grid(double q_max, double q_step) {
    if (!(q_max > 0.0) || !(q_step > 0.0))
        throw ConfigError("q grid: q_max and q_step must be positive");
    const auto half = static_cast<long>(std::floor(q_max / q_step + 1e-9));
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(2 * half + 1));
    for (long i = -half; i <= half; ++i) {
        double q = static_cast<double>(i) * q_step;
        if (std::fabs(q) < 1e-12)
            q = 0.0;
        if (std::fabs(q - 1.0) < 1e-12)
            q = 1.0;
        grid.push_back(q);
    }
    return grid;
}

std::vector<std::size_t> AnalysisConfig::make_scale_grid(std::size_t n, std::size_t count,
                                                         double lo_fraction, double hi_fraction) {
    if (n < 2)
        throw ConfigError("scale grid: series too short");
    if (count < 2 || !(lo_fraction > 0.0) || !(hi_fraction > lo_fraction) || hi_fraction > 1.0)
        throw ConfigError("scale grid: invalid parameters");
    const auto lo = std::max<std::size_t>(
        2, static_cast<std::size_t>(std::llround(lo_fraction * static_cast<double>(n))));
    const auto hi = std::max<std::size_t>(
        lo + 1, static_cast<std::size_t>(std::llround(hi_fraction * static_cast<double>(n))));

    std::vector<std::size_t> scales;
    const double log_lo = std::log(static_cast<double>(lo));
    const double log_hi = std::log(static_cast<double>(hi));
    for (std::size_t i = 0; i < count; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(count - 1);
        const auto s = static_cast<std::size_t>(
            std::llround(std::exp(log_lo + t * (log_hi - log_lo))));
        scales.push_back(std::min(std::max<std::size_t>(s, lo), hi));
    }
    std::sort(scales.begin(), scales.end());
    scales.erase(std::unique(scales.begin(), scales.end()), scales.end());
    return scales;
}

AnalysisConfig AnalysisConfig::defaults(std::size_t n) {
    AnalysisConfig cfg;
    cfg.q_grid = make_q_grid(4.0, 0.25);
    cfg.scale_grid = make_scale_grid(n, 30, 1.0 / 60.0, 1.0 / 3.0);
    return cfg;
}

std::size_t AnalysisConfig::windows_for_scale(std::size_t n, std::size_t scale) const {
    if (scale > n)
        throw ConfigError("scale exceeds series length");
    const std::size_t positions = n - scale + 1;
    if (sampling == SamplingMode::exhaustive)
        return positions;
    if (sampling == SamplingMode::aligned)
        return n / scale;
    const double raw = std::ceil(window_coverage * static_cast<double>(n) /
                                 static_cast<double>(scale));
    auto m = static_cast<std::size_t>(raw);
    m = std::max(m, min_windows);
    m = std::min(m, positions);
    return m;
}

void AnalysisConfig::validate(std::size_t n) const {
    if (q_grid.empty())
        throw ConfigError("q grid is empty");
    for (std::size_t i = 0; i + 1 < q_grid.size(); ++i)
        if (!(q_grid[i] < q_grid[i + 1]))
            throw ConfigError("q grid must be strictly ascending");
    for (double q : q_grid)
        if (!std::isfinite(q))
            throw ConfigError("q grid contains a non-finite value");
    auto contains = [&](double target) {
        return std::any_of(q_grid.begin(), q_grid.end(),
                           [&](double q) { return std::fabs(q - target) < 1e-12; });
    };
    if (!contains(0.0) || !contains(1.0))
        throw ConfigError("q grid must include q = 0 and q = 1");

    if (scale_grid.empty())
        throw ConfigError("scale grid is empty");
    for (std::size_t i = 0; i + 1 < scale_grid.size(); ++i)
        if (!(scale_grid[i] < scale_grid[i + 1]))
            throw ConfigError("scale grid must be strictly ascending");
    if (scale_grid.front() < 1)
        throw ConfigError("scales must be at least 1");
    if (scale_grid.back() > n)
        throw ConfigError("largest scale " + std::to_string(scale_grid.back()) +
                          " exceeds series length " + std::to_string(n));

    if (!(window_coverage > 0.0) || !std::isfinite(window_coverage))
        throw ConfigError("window coverage must be positive");
    if (min_windows < 10)
        throw ConfigError("at least 10 windows per scale are required");
    for (std::size_t scale : scale_grid) {
        const std::size_t admits =
            sampling == SamplingMode::aligned ? n / scale : n - scale + 1;
        if (admits < min_windows)
            throw ConfigError("scale " + std::to_string(scale) + " admits only " +
                              std::to_string(admits) + " windows, need " +
                              std::to_string(min_windows));
    }

    if (fit_range && !(fit_range->first < fit_range->second))
        throw ConfigError("fit range must have lower bound < upper bound");
}

namespace {

void check_measure_preconditions(const Series& series, std::size_t scale) {
    if (series.empty())
        throw InputError("interval measures: empty series");
    if (scale < 1 || scale > series.size())
        throw ConfigError("interval measures: scale " + std::to_string(scale) +
                          " outside [1, " + std::to_string(series.size()) + "]");
    for (double v : series.values)
        if (v < 0.0 || !std::isfinite(v))
            throw ConfigError("interval measures: series must be non-negative and finite");
}

std::vector<double> measures_from_starts(const std::vector<double>& prefix, double total,
                                         std::size_t scale,
                                         const std::vector<std::size_t>& starts) {
    std::vector<double> e;
    e.reserve(starts.size());
    for (std::size_t s : starts)
        e.push_back((prefix[s + scale] - prefix[s]) / total);
    return e;
}

std::vector<std::size_t> random_starts(std::size_t n, std::size_t scale, std::size_t m,
                                       Rng& rng) {
    std::uniform_int_distribution<std::size_t> dist(0, n - scale);
    std::vector<std::size_t> starts(m);
    for (auto& s : starts)
        s = dist(rng);
    return starts;
}

} // namespace

std::vector<double> interval_measures(const Series& series, std::size_t scale, std::size_t m,
                                      Rng& rng) {
    check_measure_preconditions(series, scale);
    if (m < 1)
        throw ConfigError("interval measures: need at least one window");
    const std::vector<double> prefix = prefix_sums(series.values);
    const double total = prefix.back();
    if (!(total > 0.0))
        throw NumericError("interval measures: series sums to zero");
    return measures_from_starts(prefix, total, scale,
                                random_starts(series.size(), scale, m, rng));
}

std::vector<double> interval_measures_exhaustive(const Series& series, std::size_t scale) {
    check_measure_preconditions(series, scale);
    const std::vector<double> prefix = prefix_sums(series.values);
    const double total = prefix.back();
    if (!(total > 0.0))
        throw NumericError("interval measures: series sums to zero");
    std::vector<std::size_t> starts(series.size() - scale + 1);
    for (std::size_t s = 0; s < starts.size(); ++s)
        starts[s] = s;
    return measures_from_starts(prefix, total, scale, starts);
}

PartitionTable partition_function(const Series& series, const AnalysisConfig& cfg) {
    const std::size_t n = series.size();
    cfg.validate(n);
    check_measure_preconditions(series, cfg.scale_grid.back());

    const std::vector<double> prefix = prefix_sums(series.values);
    const double total = prefix.back();
    if (!(total > 0.0))
        throw NumericError("partition function: series sums to zero");

    PartitionTable table;
    table.q = cfg.q_grid;
    table.scales = cfg.scale_grid;
    table.n = n;
    table.windows_used.resize(cfg.scale_grid.size());
    table.values.assign(cfg.q_grid.size() * cfg.scale_grid.size(), 0.0);

    std::vector<double> log_e;
    for (std::size_t si = 0; si < cfg.scale_grid.size(); ++si) {
        const std::size_t scale = cfg.scale_grid[si];
        const std::size_t m = cfg.windows_for_scale(n, scale);
        table.windows_used[si] = m;

        std::vector<std::size_t> starts;
        if (cfg.sampling == SamplingMode::exhaustive) {
            starts.resize(n - scale + 1);
            for (std::size_t s = 0; s < starts.size(); ++s)
                starts[s] = s;
        } else if (cfg.sampling == SamplingMode::aligned) {
            starts.resize(m);
            for (std::size_t s = 0; s < m; ++s)
                starts[s] = s * scale;
        } else {
            Rng rng = make_rng(derive_seed(cfg.seed, 0xA11Au, si));
            starts = random_starts(n, scale, m, rng);
        }

        // One measure sample per scale, reused for every q.
        const std::vector<double> e = measures_from_starts(prefix, total, scale, starts);
        log_e.clear();
        std::size_t zero_count = 0;
        for (double value : e) {
            if (value > 0.0)
                log_e.push_back(std::log(value));
            else
                ++zero_count;
        }

        for (std::size_t qi = 0; qi < cfg.q_grid.size(); ++qi) {
            const double q = cfg.q_grid[qi];
            double moment;
            if (q == 0.0) {
                // E^0 = 1 for every window, so M_0 = n / scale identically.
                table.at(qi, si) = static_cast<double>(n) / static_cast<double>(scale);
                continue;
            }
            if (q < 0.0 && zero_count > 0)
                throw NumericError("partition function diverges: zero-measure window at scale " +
                                   std::to_string(scale) + " with q = " + std::to_string(q));
            double sum = 0.0;
            for (double le : log_e)
                sum += std::exp(q * le);
            moment = sum * static_cast<double>(n) /
                     (static_cast<double>(m) * static_cast<double>(scale));
            if (!(moment > 0.0) || !std::isfinite(moment))
                throw NumericError("partition function is not positive and finite at scale " +
                                   std::to_string(scale) + ", q = " + std::to_string(q));
            table.at(qi, si) = moment;
        }
    }
    return table;
}

TauEstimate fit_tau(const PartitionTable& table,
                    std::optional<std::pair<std::size_t, std::size_t>> fit_range) {
    std::vector<std::size_t> keep;
    for (std::size_t si = 0; si < table.scales.size(); ++si) {
        const std::size_t scale = table.scales[si];
        if (fit_range && (scale < fit_range->first || scale > fit_range->second))
            continue;
        keep.push_back(si);
    }
    if (keep.size() < 5)
        throw ConfigError("tau fit: fewer than 5 usable scales");

    std::vector<double> x(keep.size());
    for (std::size_t k = 0; k < keep.size(); ++k)
        x[k] = std::log(static_cast<double>(table.scales[keep[k]]) /
                        static_cast<double>(table.n));

    TauEstimate est;
    est.q = table.q;
    est.tau.resize(table.q.size());
    est.tau_stderr.resize(table.q.size());
    est.scales_used = keep.size();

    std::vector<double> y(keep.size());
    for (std::size_t qi = 0; qi < table.q.size(); ++qi) {
        for (std::size_t k = 0; k < keep.size(); ++k) {
            const double m = table.at(qi, keep[k]);
            if (!(m > 0.0) || !std::isfinite(m))
                throw NumericError("tau fit: partition value not positive at q = " +
                                   std::to_string(table.q[qi]));
            y[k] = std::log(m);
        }
        const LinearFit fit = fit_line(x, y);
        est.tau[qi] = fit.slope;
        est.tau_stderr[qi] = fit.slope_stderr;
    }
    return est;
}

SingularitySpectrum legendre_spectrum(const TauEstimate& tau) {
    const std::size_t nq = tau.q.size();
    if (nq < 3)
        throw ConfigError("Legendre transform: need at least 3 q points");
    for (std::size_t i = 0; i + 1 < nq; ++i)
        if (!(tau.q[i] < tau.q[i + 1]))
            throw ConfigError("Legendre transform: q grid must be strictly ascending");

    SingularitySpectrum spec;
    spec.q = tau.q;
    spec.tau = tau.tau;
    spec.tau_stderr = tau.tau_stderr;
    spec.alpha.resize(nq);
    spec.f.resize(nq);

    spec.alpha[0] = (tau.tau[1] - tau.tau[0]) / (tau.q[1] - tau.q[0]);
    spec.alpha[nq - 1] = (tau.tau[nq - 1] - tau.tau[nq - 2]) / (tau.q[nq - 1] - tau.q[nq - 2]);
    for (std::size_t i = 1; i + 1 < nq; ++i)
        spec.alpha[i] = (tau.tau[i + 1] - tau.tau[i - 1]) / (tau.q[i + 1] - tau.q[i - 1]);

    for (std::size_t i = 0; i < nq; ++i)
        spec.f[i] = tau.q[i] * spec.alpha[i] - tau.tau[i];

    const auto [lo, hi] = std::minmax_element(spec.alpha.begin(), spec.alpha.end());
    spec.alpha_min = *lo;
    spec.alpha_max = *hi;
    spec.delta_alpha = spec.alpha_max - spec.alpha_min;

    for (std::size_t i = 0; i + 1 < nq; ++i) {
        if (spec.alpha[i + 1] - spec.alpha[i] > 1e-6) {
            std::ostringstream msg;
            msg << "alpha(q) increases by " << (spec.alpha[i + 1] - spec.alpha[i])
                << " between q = " << tau.q[i] << " and q = " << tau.q[i + 1];
            spec.warnings.push_back(msg.str());
        }
    }
    return spec;
}

double singularity_width(const SingularitySpectrum& spectrum) { return spectrum.delta_alpha; }

AnalysisResult analyze(const Series& series, const AnalysisConfig& cfg) {
    AnalysisResult result;
    result.table = partition_function(series, cfg);
    result.spectrum = legendre_spectrum(fit_tau(result.table, cfg.fit_range));
    return result;
}

} // namespace mfcomp
