#include "mfcomp/surrogates.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "mfcomp/errors.hpp"
#include "mfcomp/fft.hpp"
#include "mfcomp/stats.hpp"

namespace mfcomp {

std::string to_string(DistributionSpec::Family family) {
    switch (family) {
    case DistributionSpec::Family::empirical: return "empirical";
    case DistributionSpec::Family::gaussian_abs: return "gaussian_abs";
    case DistributionSpec::Family::student_abs: return "student_abs";
    case DistributionSpec::Family::weibull: return "weibull";
    }
    return "unknown";
}

DistributionSpec::Family distribution_family_from_string(const std::string& name) {
    if (name == "empirical") return DistributionSpec::Family::empirical;
    if (name == "gaussian_abs") return DistributionSpec::Family::gaussian_abs;
    if (name == "student_abs") return DistributionSpec::Family::student_abs;
    if (name == "weibull") return DistributionSpec::Family::weibull;
    throw ConfigError("unknown distribution family: " + name);
}

DistributionSpec DistributionSpec::empirical(Series reference_series) {
    DistributionSpec spec;
    spec.family = Family::empirical;
    spec.reference = std::make_shared<const Series>(std::move(reference_series));
    spec.validate();
    return spec;
}

DistributionSpec DistributionSpec::gaussian_abs(double mu, double sigma) {
    DistributionSpec spec;
    spec.family = Family::gaussian_abs;
    spec.mu = mu;
    spec.sigma = sigma;
    spec.validate();
    return spec;
}

DistributionSpec DistributionSpec::student_abs(double gamma) {
    DistributionSpec spec;
    spec.family = Family::student_abs;
    spec.gamma = gamma;
    spec.validate();
    return spec;
}

DistributionSpec DistributionSpec::weibull(double beta) {
    DistributionSpec spec;
    spec.family = Family::weibull;
    spec.beta = beta;
    spec.validate();
    return spec;
}

void DistributionSpec::validate() const {
    switch (family) {
    case Family::empirical:
        if (!reference || reference->size() < 2)
            throw ConfigError("empirical distribution needs a reference series of length >= 2");
        break;
    case Family::gaussian_abs:
        if (!(sigma > 0.0) || !std::isfinite(sigma) || !std::isfinite(mu))
            throw ConfigError("gaussian_abs needs finite mu and sigma > 0");
        break;
    case Family::student_abs:
        if (!(gamma > 2.0) || !std::isfinite(gamma))
            throw ConfigError("student_abs needs tail exponent gamma > 2");
        break;
    case Family::weibull:
        if (!(beta > 0.0) || beta > 1.0)
            throw ConfigError("weibull shape must lie in (0, 1]");
        break;
    }
}

std::string DistributionSpec::describe() const {
    std::ostringstream os;
    switch (family) {
    case Family::empirical:
        os << "empirical(" << (reference ? reference->label : "?") << ")";
        break;
    case Family::gaussian_abs:
        os << "gaussian_abs(mu=" << mu << ",sigma=" << sigma << ")";
        break;
    case Family::student_abs:
        os << "student_abs(gamma=" << gamma << ")";
        break;
    case Family::weibull:
        os << "weibull(beta=" << beta << ")";
        break;
    }
    return os.str();
}

AmplitudeTarget AmplitudeTarget::from_series(const Series& series) {
    if (series.size() < 2)
        throw ConfigError("amplitude target: series too short");
    AmplitudeTarget target;
    target.length = series.size();
    RealFft fft(series.size());
    std::vector<std::complex<double>> spec;
    fft.forward(series.values, spec);
    target.amplitude.resize(spec.size());
    for (std::size_t k = 0; k < spec.size(); ++k)
        target.amplitude[k] = std::abs(spec[k]);
    return target;
}

Series shuffle(const Series& series, Rng& rng) {
    Series out = series;
    std::shuffle(out.values.begin(), out.values.end(), rng);
    out.label = "shuffle(" + series.label + ")";
    out.provenance = SeedProvenance{std::nullopt, out.label};
    return out;
}

Series empirical_inverse_cdf_sample(const Series& reference, std::size_t count, Rng& rng) {
    const std::size_t n = reference.size();
    if (n < 2)
        throw ConfigError("inverse-CDF sample: reference must have at least 2 values");
    if (count < 2)
        throw ConfigError("inverse-CDF sample: need at least 2 draws");

    std::vector<double> sorted = reference.values;
    std::sort(sorted.begin(), sorted.end());
    if (!(sorted.front() < sorted.back()))
        throw NumericError("inverse-CDF sample: reference distribution is degenerate");

    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::vector<double> u(count);
    double umin = 1.0;
    double umax = 0.0;
    for (double& x : u) {
        x = uniform(rng);
        umin = std::min(umin, x);
        umax = std::max(umax, x);
    }
    if (!(umax > umin))
        throw NumericError("inverse-CDF sample: degenerate uniform draw");

    // Map the drawn range onto [F(min), 1] so the smallest draw hits the
    // smallest observation and the largest hits the maximum, never beyond.
    const double f_min = 1.0 / static_cast<double>(n);
    const double scale = (1.0 - f_min) / (umax - umin);

    Series out;
    out.kind = reference.kind;
    out.label = "inverse_cdf_sample(" + reference.label + ")";
    out.provenance = SeedProvenance{std::nullopt, out.label};
    out.values.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double y = f_min + (u[i] - umin) * scale;
        // F(sorted[k]) = (k+1)/n; between knots interpolate linearly.
        const double pos = y * static_cast<double>(n) - 1.0;
        const auto k = static_cast<std::size_t>(
            std::clamp(std::floor(pos), 0.0, static_cast<double>(n - 2)));
        const double frac = pos - static_cast<double>(k);
        out.values[i] = sorted[k] + (sorted[k + 1] - sorted[k]) * frac;
    }
    return out;
}

std::pair<Series, IaaftReport> iaaft(const Series& source, const AmplitudeTarget& target,
                                     Rng& rng, std::size_t max_iter, bool shuffle_start) {
    const std::size_t n = source.size();
    if (n < 2)
        throw ConfigError("iaaft: source too short");
    if (target.length != n)
        throw ConfigError("iaaft: target length " + std::to_string(target.length) +
                          " does not match source length " + std::to_string(n));
    if (max_iter < 1)
        throw ConfigError("iaaft: max_iter must be at least 1");

    std::vector<double> sorted = source.values;
    std::sort(sorted.begin(), sorted.end());

    // The value multiset fixes the mean, so the achievable DC amplitude is
    // the source's own; honor it regardless of what the target says.
    std::vector<double> amp = target.amplitude;
    {
        double sum = 0.0;
        for (double v : source.values)
            sum += v;
        amp[0] = std::fabs(sum);
    }

    RealFft fft(n);
    std::vector<std::complex<double>> spec;

    // The multiset also fixes the total AC power (Parseval), so only the
    // shape of the target spectrum is achievable. Rescale the target once to
    // the power the values actually carry; a uniform non-DC rescale cannot
    // change any ordering the iteration produces (samples are mean + c *
    // deviation), it just stops the enforcement from chasing an unreachable
    // scale and keeps the mismatch a pure shape error.
    fft.forward(source.values, spec);
    double source_power = 0.0;
    double target_power = 0.0;
    for (std::size_t k = 1; k < spec.size(); ++k) {
        const double w = 2 * k < n ? 2.0 : 1.0;
        source_power += w * std::norm(spec[k]);
        target_power += w * amp[k] * amp[k];
    }
    if (source_power > 0.0 && target_power > 0.0) {
        const double scale = std::sqrt(source_power / target_power);
        for (std::size_t k = 1; k < amp.size(); ++k)
            amp[k] *= scale;
    }

    std::vector<double> current = source.values;
    if (shuffle_start)
        std::shuffle(current.begin(), current.end(), rng);

    std::vector<double> filtered;
    std::vector<double> previous;

    IaaftReport report;
    for (std::size_t iter = 1; iter <= max_iter; ++iter) {
        report.iterations = iter;

        fft.forward(current, spec);
        for (std::size_t k = 0; k < spec.size(); ++k) {
            const double mag = std::abs(spec[k]);
            if (mag > 0.0)
                spec[k] *= amp[k] / mag;
            else
                spec[k] = std::complex<double>(amp[k], 0.0);
        }
        fft.inverse(spec, filtered);

        const std::vector<std::size_t> order = argsort_stable(filtered);
        previous = current;
        for (std::size_t r = 0; r < n; ++r)
            current[order[r]] = sorted[r];

        if (current == previous) {
            report.converged = true;
            break;
        }
    }

    fft.forward(current, spec);
    double err = 0.0;
    double norm = 0.0;
    for (std::size_t k = 1; k < spec.size(); ++k) {
        const double d = std::abs(spec[k]) - amp[k];
        err += d * d;
        norm += amp[k] * amp[k];
    }
    report.spectrum_mismatch = norm > 0.0 ? std::sqrt(err / norm) : 0.0;

    Series out;
    out.values = std::move(current);
    out.kind = source.kind;
    out.label = "iaaft(" + source.label + ")";
    out.provenance = SeedProvenance{std::nullopt, out.label};
    return {std::move(out), report};
}

std::pair<Series, IaaftReport> linear_memory_surrogate(const Series& series, Rng& rng,
                                                       std::size_t max_iter) {
    if (series.size() < 64)
        throw ConfigError("linear-memory surrogate: series must have at least 64 values");
    const AmplitudeTarget target = AmplitudeTarget::from_series(series);
    auto [surrogate, report] = iaaft(series, target, rng, max_iter, true);
    surrogate.label = "linear_memory(" + series.label + ")";
    if (surrogate.provenance)
        surrogate.provenance->recipe = surrogate.label;
    return {std::move(surrogate), report};
}

Series rank_remap(const Series& reference, const DistributionSpec& spec, Rng& rng) {
    spec.validate();
    const std::size_t n = reference.size();
    if (n < 2)
        throw ConfigError("rank remap: reference must have at least 2 values");

    Series draws = sample_distribution(spec, n, rng);
    std::sort(draws.values.begin(), draws.values.end());

    const std::vector<std::size_t> order = argsort_stable(reference.values);
    Series out;
    out.kind = reference.kind;
    out.label = "rank_remap(" + reference.label + " <- " + spec.describe() + ")";
    out.provenance = SeedProvenance{std::nullopt, out.label};
    out.values.resize(n);
    for (std::size_t r = 0; r < n; ++r)
        out.values[order[r]] = draws.values[r];
    return out;
}

Series sample_distribution(const DistributionSpec& spec, std::size_t count, Rng& rng) {
    spec.validate();
    if (count < 1)
        throw ConfigError("sample_distribution: need at least one draw");

    Series out;
    out.kind = SeriesKind::generic_positive;
    out.label = "sample(" + spec.describe() + ")";
    out.provenance = SeedProvenance{std::nullopt, out.label};

    switch (spec.family) {
    case DistributionSpec::Family::empirical:
        return empirical_inverse_cdf_sample(*spec.reference, count, rng);
    case DistributionSpec::Family::gaussian_abs: {
        std::normal_distribution<double> normal(spec.mu, spec.sigma);
        out.values.resize(count);
        for (double& v : out.values)
            v = std::fabs(normal(rng));
        break;
    }
    case DistributionSpec::Family::student_abs: {
        std::student_t_distribution<double> student(spec.gamma);
        out.values.resize(count);
        for (double& v : out.values)
            v = std::fabs(student(rng));
        break;
    }
    case DistributionSpec::Family::weibull: {
        std::weibull_distribution<double> weibull(spec.beta, 1.0);
        out.values.resize(count);
        for (double& v : out.values)
            v = weibull(rng);
        break;
    }
    }
    return out;
}

} // namespace mfcomp
