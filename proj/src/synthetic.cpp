#include "mfcomp/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "mfcomp/errors.hpp"
#include "mfcomp/fft.hpp"
#include "mfcomp/stats.hpp"

namespace mfcomp {

std::string to_string(FgnMethod method) {
    return method == FgnMethod::circulant ? "circulant" : "spectral";
}

namespace {

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n)
        p <<= 1;
    return p;
}

std::string fgn_label(const FgnSpec& spec, FgnMethod method) {
    std::ostringstream os;
    os << "fgn(H=" << spec.hurst << ",L=" << spec.length << "," << to_string(method) << ")";
    return os.str();
}

// Exact autocovariance of fractional Gaussian noise with unit variance.
double fgn_gamma(std::size_t k, double hurst) {
    const double h2 = 2.0 * hurst;
    const double kc = static_cast<double>(k);
    const double up = std::pow(kc + 1.0, h2);
    const double mid = 2.0 * std::pow(kc, h2);
    const double down = std::pow(std::fabs(kc - 1.0), h2);
    return 0.5 * (up - mid + down);
}

bool try_circulant(const FgnSpec& spec, Rng& rng, std::vector<double>& out) {
    const std::size_t lp = next_pow2(std::max<std::size_t>(spec.length, 64));
    const std::size_t m = 2 * lp;

    std::vector<double> c(m, 0.0);
    for (std::size_t k = 0; k <= lp; ++k)
        c[k] = fgn_gamma(k, spec.hurst);
    for (std::size_t k = 1; k < lp; ++k)
        c[m - k] = c[k];

    RealFft fft(m);
    std::vector<std::complex<double>> eigen;
    fft.forward(c, eigen);

    double max_eigen = 0.0;
    for (const auto& e : eigen)
        max_eigen = std::max(max_eigen, e.real());
    if (max_eigen <= 0.0)
        return false;
    std::vector<double> lambda(eigen.size());
    for (std::size_t k = 0; k < eigen.size(); ++k) {
        const double value = eigen[k].real();
        if (value < -1e-8 * max_eigen)
            return false; // embedding not nonnegative definite
        lambda[k] = std::max(value, 0.0);
    }

    std::normal_distribution<double> normal(0.0, 1.0);
    const auto md = static_cast<double>(m);
    std::vector<std::complex<double>> bins(lambda.size());
    bins[0] = std::sqrt(lambda[0] / md) * normal(rng);
    for (std::size_t k = 1; k + 1 < lambda.size(); ++k) {
        const double amp = std::sqrt(lambda[k] / (2.0 * md));
        const double re = normal(rng);
        const double im = normal(rng);
        bins[k] = std::complex<double>(amp * re, amp * im);
    }
    bins[lambda.size() - 1] = std::sqrt(lambda.back() / md) * normal(rng);

    std::vector<double> x;
    fft.inverse(bins, x);
    out.resize(spec.length);
    for (std::size_t i = 0; i < spec.length; ++i)
        out[i] = x[i] * md; // undo the 1/m scaling of the inverse transform
    return true;
}

void spectral_synthesis(const FgnSpec& spec, Rng& rng, std::vector<double>& out) {
    const std::size_t lp = next_pow2(std::max<std::size_t>(spec.length, 64));
    const std::size_t m = 2 * lp;
    const double beta = 1.0 - 2.0 * spec.hurst; // power spectrum exponent

    std::normal_distribution<double> normal(0.0, 1.0);
    const auto md = static_cast<double>(m);
    std::vector<std::complex<double>> bins(m / 2 + 1);
    bins[0] = 0.0;
    for (std::size_t k = 1; k < m / 2; ++k) {
        const double s = std::pow(2.0 * std::sin(M_PI * static_cast<double>(k) / md), beta);
        const double amp = std::sqrt(s / (2.0 * md));
        bins[k] = std::complex<double>(amp * normal(rng), amp * normal(rng));
    }
    bins[m / 2] = std::sqrt(std::pow(2.0, beta) / md) * normal(rng);

    RealFft fft(m);
    std::vector<double> x;
    fft.inverse(bins, x);
    out.resize(spec.length);
    for (std::size_t i = 0; i < spec.length; ++i)
        out[i] = x[i] * md;

    const double sd = sample_stddev(out);
    if (!(sd > 0.0))
        throw NumericError("spectral synthesis produced a constant series");
    for (double& v : out)
        v /= sd;
}

} // namespace

FgnOutput generate_fgn(const FgnSpec& spec, Rng& rng) {
    if (!(spec.hurst > 0.0) || !(spec.hurst < 1.0))
        throw ConfigError("fgn: Hurst exponent must lie in (0, 1)");
    if (spec.length < 64)
        throw ConfigError("fgn: length must be at least 64");

    FgnOutput output;
    std::vector<double> values;
    if (try_circulant(spec, rng, values)) {
        output.method = FgnMethod::circulant;
    } else {
        spectral_synthesis(spec, rng, values);
        output.method = FgnMethod::spectral;
    }
    output.series.values = std::move(values);
    output.series.kind = SeriesKind::log_return;
    output.series.label = fgn_label(spec, output.method);
    output.series.provenance = SeedProvenance{std::nullopt, output.series.label};
    return output;
}

Series binomial_cascade(const CascadeSpec& spec, Rng& rng) {
    if (!(spec.p > 0.0) || spec.p > 0.5)
        throw ConfigError("cascade: p must lie in (0, 0.5]");
    if (spec.depth < 1 || spec.depth > 24)
        throw ConfigError("cascade: depth must lie in [1, 24]");

    std::vector<double> mass{1.0};
    std::bernoulli_distribution coin(0.5);
    for (std::size_t level = 0; level < spec.depth; ++level) {
        std::vector<double> next(mass.size() * 2);
        for (std::size_t i = 0; i < mass.size(); ++i) {
            double lo = spec.p;
            double hi = 1.0 - spec.p;
            if (spec.randomize && coin(rng))
                std::swap(lo, hi);
            next[2 * i] = mass[i] * lo;
            next[2 * i + 1] = mass[i] * hi;
        }
        mass = std::move(next);
    }

    Series series;
    series.values = std::move(mass);
    series.kind = SeriesKind::generic_positive;
    std::ostringstream label;
    label << "cascade(p=" << spec.p << ",depth=" << spec.depth << ")";
    series.label = label.str();
    series.provenance = SeedProvenance{std::nullopt, series.label};
    return series;
}

double cascade_tau(double p, double q) {
    if (!(p > 0.0) || p > 0.5)
        throw ConfigError("cascade: p must lie in (0, 0.5]");
    return -std::log2(std::pow(p, q) + std::pow(1.0 - p, q));
}

std::vector<double> cascade_tau(double p, const std::vector<double>& q_grid) {
    std::vector<double> tau(q_grid.size());
    for (std::size_t i = 0; i < q_grid.size(); ++i)
        tau[i] = cascade_tau(p, q_grid[i]);
    return tau;
}

HurstEstimate estimate_hurst(const Series& series) {
    const std::size_t n = series.size();
    if (n < 1024)
        throw ConfigError("hurst estimate: need at least 1024 points");

    const double m = mean(series.values);
    std::vector<double> profile(n);
    double acc = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        acc += series.values[t] - m;
        profile[t] = acc;
    }

    std::vector<std::size_t> scales;
    {
        const double lo = std::log(16.0);
        const double hi = std::log(static_cast<double>(n) / 8.0);
        const std::size_t count = 20;
        for (std::size_t i = 0; i < count; ++i) {
            const double t = static_cast<double>(i) / static_cast<double>(count - 1);
            scales.push_back(static_cast<std::size_t>(std::llround(std::exp(lo + t * (hi - lo)))));
        }
        std::sort(scales.begin(), scales.end());
        scales.erase(std::unique(scales.begin(), scales.end()), scales.end());
    }

    std::vector<double> log_s;
    std::vector<double> log_f;
    for (std::size_t s : scales) {
        const std::size_t windows = n / s;
        if (windows < 4)
            continue;
        const auto sd = static_cast<double>(s);
        const double sx = sd * (sd - 1.0) / 2.0;
        const double sxx = (sd - 1.0) * sd * (2.0 * sd - 1.0) / 6.0;
        const double denom = sd * sxx - sx * sx;

        double rss = 0.0;
        auto window_rss = [&](std::size_t off) {
            double sy = 0.0;
            double sxy = 0.0;
            for (std::size_t j = 0; j < s; ++j) {
                sy += profile[off + j];
                sxy += static_cast<double>(j) * profile[off + j];
            }
            const double slope = (sd * sxy - sx * sy) / denom;
            const double intercept = (sy - slope * sx) / sd;
            double acc_rss = 0.0;
            for (std::size_t j = 0; j < s; ++j) {
                const double r = profile[off + j] - (intercept + slope * static_cast<double>(j));
                acc_rss += r * r;
            }
            return acc_rss;
        };
        for (std::size_t w = 0; w < windows; ++w) {
            rss += window_rss(w * s);
            rss += window_rss(n - (w + 1) * s);
        }
        const double f = std::sqrt(rss / (2.0 * static_cast<double>(windows) * sd));
        if (f > 0.0) {
            log_s.push_back(std::log(sd));
            log_f.push_back(std::log(f));
        }
    }
    if (log_s.size() < 4)
        throw NumericError("hurst estimate: too few usable scales");

    const LinearFit fit = fit_line(log_s, log_f);
    HurstEstimate est;
    est.hurst = fit.slope;
    est.stderr_ = fit.slope_stderr;
    est.scales_used = log_s.size();
    return est;
}

} // namespace mfcomp
