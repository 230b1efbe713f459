#include "mfcomp/decompose.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "mfcomp/errors.hpp"
#include "mfcomp/parallel.hpp"
#include "mfcomp/stats.hpp"

namespace mfcomp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Seed-path tags for the surrogate legs. Shared between decompose and
// family_sweep so that equal seeds yield the identical Gaussian chain.
enum LegTag : std::uint64_t {
    kLegLinear = 1,
    kLegShuffled = 2,
    kLegGaussian = 3,
    kLegGaussianLinear = 4,
    kLegGaussianShuffled = 5,
};

struct LegOutcome {
    EnsembleStat stat;
    std::vector<double> alpha_mean;
    std::vector<double> f_mean;
    std::vector<std::string> notes;
};

EnsembleStat stat_from_widths(const std::vector<double>& widths, std::size_t ensemble) {
    std::vector<double> ok;
    ok.reserve(widths.size());
    for (double w : widths)
        if (std::isfinite(w))
            ok.push_back(w);
    EnsembleStat stat;
    stat.count = ok.size();
    stat.failures = ensemble - ok.size();
    stat.mean = ok.empty() ? kNaN : mean(ok);
    stat.stddev = ok.empty() ? kNaN : sample_stddev(ok);
    return stat;
}

// Runs one surrogate leg: `make(i, rng)` builds member i, which is then
// analyzed under a member-specific window seed. Failed members are recorded,
// not fatal.
template <typename MakeSeries>
LegOutcome run_leg(const std::string& name, const Series& input, const AnalysisConfig& cfg,
                   const DecomposeOptions& options, std::uint64_t leg_tag, MakeSeries make,
                   bool keep_spectra) {
    const std::size_t ensemble = options.ensemble;
    std::vector<double> widths(ensemble, kNaN);
    std::vector<std::string> member_notes(ensemble);
    std::vector<std::vector<double>> alphas(keep_spectra ? ensemble : 0);
    std::vector<std::vector<double>> fs(keep_spectra ? ensemble : 0);

    parallel_for(ensemble, options.threads, [&](std::size_t i) {
        try {
            Rng rng = make_rng(derive_seed(options.seed, leg_tag, i));
            const Series member = make(input, i, rng);
            AnalysisConfig member_cfg = cfg;
            member_cfg.seed = derive_seed(options.seed, leg_tag, i, 0xA9u);
            const SingularitySpectrum spec = analyze(member, member_cfg).spectrum;
            widths[i] = spec.delta_alpha;
            if (keep_spectra) {
                alphas[i] = spec.alpha;
                fs[i] = spec.f;
            }
        } catch (const NumericError& e) {
            std::ostringstream note;
            note << name << " member " << i << " failed: " << e.what();
            member_notes[i] = note.str();
        }
    });

    LegOutcome outcome;
    outcome.stat = stat_from_widths(widths, ensemble);
    for (std::string& note : member_notes)
        if (!note.empty())
            outcome.notes.push_back(std::move(note));

    if (keep_spectra && outcome.stat.count > 0) {
        const std::size_t nq = cfg.q_grid.size();
        outcome.alpha_mean.assign(nq, 0.0);
        outcome.f_mean.assign(nq, 0.0);
        for (std::size_t i = 0; i < ensemble; ++i) {
            if (!std::isfinite(widths[i]))
                continue;
            for (std::size_t k = 0; k < nq; ++k) {
                outcome.alpha_mean[k] += alphas[i][k];
                outcome.f_mean[k] += fs[i][k];
            }
        }
        for (std::size_t k = 0; k < nq; ++k) {
            outcome.alpha_mean[k] /= static_cast<double>(outcome.stat.count);
            outcome.f_mean[k] /= static_cast<double>(outcome.stat.count);
        }
    }
    return outcome;
}

std::pair<double, double> resolve_gaussian(const Series& series,
                                           const DecomposeOptions& options,
                                           std::vector<std::string>& notes) {
    if (options.gaussian_params) {
        const auto [mu, sigma] = *options.gaussian_params;
        if (!(sigma > 0.0))
            throw ConfigError("decompose: gaussian sigma must be positive");
        return {mu, sigma};
    }
    const double mu = mean(series.values);
    const double sigma = sample_stddev(series.values);
    if (!(sigma > 0.0))
        throw NumericError("decompose: input series is constant, no Gaussian reference");
    notes.push_back("gaussian reference defaulted to sample moments of the input");
    return {mu, sigma};
}

double quad(double a, double b) { return std::sqrt(a * a + b * b); }

} // namespace

ComponentReport decompose(const Series& series, const AnalysisConfig& cfg,
                          const DecomposeOptions& options) {
    if (options.ensemble < 2)
        throw ConfigError("decompose: ensemble must be at least 2");

    ComponentReport report;
    report.ensemble = options.ensemble;
    report.seed = options.seed;

    const AnalysisResult base = analyze(series, cfg);
    report.width = base.spectrum.delta_alpha;
    report.spectra.q = base.spectrum.q;
    report.spectra.alpha_original = base.spectrum.alpha;
    report.spectra.f_original = base.spectrum.f;

    const auto [mu, sigma] = resolve_gaussian(series, options, report.notes);
    report.gaussian_mu = mu;
    report.gaussian_sigma = sigma;
    const DistributionSpec gauss = DistributionSpec::gaussian_abs(mu, sigma);

    const auto linear_member = [&](const Series& input, std::size_t, Rng& rng) {
        return linear_memory_surrogate(input, rng, options.iaaft_max_iter).first;
    };
    const auto shuffle_member = [&](const Series& input, std::size_t, Rng& rng) {
        return shuffle(input, rng);
    };
    const auto remap_member = [&](const Series& input, std::size_t, Rng& rng) {
        return rank_remap(input, gauss, rng);
    };
    // The remap of member i is regenerated from its own seed path, so the
    // derived legs see the identical series without storing the ensemble.
    const auto remap_of = [&](const Series& input, std::size_t i) {
        Rng rng = make_rng(derive_seed(options.seed, kLegGaussian, i));
        return rank_remap(input, gauss, rng);
    };
    const auto remap_linear_member = [&](const Series& input, std::size_t i, Rng& rng) {
        return linear_memory_surrogate(remap_of(input, i), rng, options.iaaft_max_iter).first;
    };
    const auto remap_shuffle_member = [&](const Series& input, std::size_t i, Rng& rng) {
        return shuffle(remap_of(input, i), rng);
    };

    LegOutcome linear =
        run_leg("linear-memory", series, cfg, options, kLegLinear, linear_member, true);
    LegOutcome shuffled =
        run_leg("shuffled", series, cfg, options, kLegShuffled, shuffle_member, true);
    LegOutcome norm =
        run_leg("gaussian-remap", series, cfg, options, kLegGaussian, remap_member, true);
    LegOutcome norm_linear = run_leg("gaussian-remap linear-memory", series, cfg, options,
                                     kLegGaussianLinear, remap_linear_member, false);
    LegOutcome norm_shuffled = run_leg("gaussian-remap shuffled", series, cfg, options,
                                       kLegGaussianShuffled, remap_shuffle_member, false);

    report.fse = linear.stat;
    report.shuffled = shuffled.stat;
    report.norm = norm.stat;
    report.norm_fse = norm_linear.stat;
    report.norm_shuffled = norm_shuffled.stat;
    report.spectra.alpha_linear = std::move(linear.alpha_mean);
    report.spectra.f_linear = std::move(linear.f_mean);
    report.spectra.alpha_shuffled = std::move(shuffled.alpha_mean);
    report.spectra.f_shuffled = std::move(shuffled.f_mean);
    report.spectra.alpha_gaussian = std::move(norm.alpha_mean);
    report.spectra.f_gaussian = std::move(norm.f_mean);
    for (LegOutcome* leg : {&linear, &shuffled, &norm, &norm_linear, &norm_shuffled})
        for (std::string& note : leg->notes)
            report.notes.push_back(std::move(note));

    report.eff = report.width - report.fse.mean;
    report.eff_std = report.fse.stddev;
    report.nl = report.norm.mean - report.norm_fse.mean;
    report.nl_std = quad(report.norm.stddev, report.norm_fse.stddev);
    report.pdf = report.eff - report.nl;
    report.pdf_std = quad(report.eff_std, report.nl_std);
    return report;
}

SweepTable family_sweep(const Series& series, DistributionSpec::Family family,
                        const std::vector<double>& parameter_grid, const AnalysisConfig& cfg,
                        const DecomposeOptions& options) {
    if (family != DistributionSpec::Family::student_abs &&
        family != DistributionSpec::Family::weibull)
        throw ConfigError("family sweep: family must be student_abs or weibull");
    if (parameter_grid.empty())
        throw ConfigError("family sweep: empty parameter grid");
    if (options.ensemble < 2)
        throw ConfigError("family sweep: ensemble must be at least 2");

    const auto make_spec = [&](double parameter) {
        return family == DistributionSpec::Family::student_abs
                   ? DistributionSpec::student_abs(parameter)
                   : DistributionSpec::weibull(parameter);
    };
    for (double parameter : parameter_grid)
        make_spec(parameter); // validates

    SweepTable table;
    table.family = family;
    table.seed = options.seed;

    const auto [mu, sigma] = resolve_gaussian(series, options, table.notes);
    const DistributionSpec gauss = DistributionSpec::gaussian_abs(mu, sigma);

    // Nonlinearity component from the Gaussian chain of the input; the rank
    // remaps below share the input's ordering, so it applies to all of them.
    const auto remap_member = [&](const Series& input, std::size_t, Rng& rng) {
        return rank_remap(input, gauss, rng);
    };
    const auto remap_of = [&](const Series& input, std::size_t i) {
        Rng rng = make_rng(derive_seed(options.seed, kLegGaussian, i));
        return rank_remap(input, gauss, rng);
    };
    const auto remap_linear_member = [&](const Series& input, std::size_t i, Rng& rng) {
        return linear_memory_surrogate(remap_of(input, i), rng, options.iaaft_max_iter).first;
    };

    LegOutcome norm =
        run_leg("gaussian-remap", series, cfg, options, kLegGaussian, remap_member, false);
    LegOutcome norm_linear = run_leg("gaussian-remap linear-memory", series, cfg, options,
                                     kLegGaussianLinear, remap_linear_member, false);
    table.norm = norm.stat;
    table.norm_fse = norm_linear.stat;
    table.nl = table.norm.mean - table.norm_fse.mean;
    table.nl_std = quad(table.norm.stddev, table.norm_fse.stddev);
    for (LegOutcome* leg : {&norm, &norm_linear})
        for (std::string& note : leg->notes)
            table.notes.push_back(std::move(note));

    for (std::size_t gi = 0; gi < parameter_grid.size(); ++gi) {
        const double parameter = parameter_grid[gi];
        const DistributionSpec spec = make_spec(parameter);

        const auto member_remap = [&](const Series& input, std::size_t i) {
            Rng rng = make_rng(derive_seed(options.seed, 0x51u, gi, i));
            return rank_remap(input, spec, rng);
        };
        // All three legs of a grid point act on the same remap realization.
        const auto width_member = [&](const Series& input, std::size_t i, Rng&) {
            return member_remap(input, i);
        };
        const auto fse_member = [&](const Series& input, std::size_t i, Rng& rng) {
            return linear_memory_surrogate(member_remap(input, i), rng, options.iaaft_max_iter)
                .first;
        };
        const auto shuffle_member = [&](const Series& input, std::size_t i, Rng& rng) {
            return shuffle(member_remap(input, i), rng);
        };

        LegOutcome width = run_leg("remap " + spec.describe(), series, cfg, options,
                                   derive_seed(0x51u, gi), width_member, false);
        LegOutcome fse = run_leg("remap-linear " + spec.describe(), series, cfg, options,
                                 derive_seed(0x52u, gi), fse_member, false);
        LegOutcome shuffled = run_leg("remap-shuffled " + spec.describe(), series, cfg, options,
                                      derive_seed(0x53u, gi), shuffle_member, false);

        SweepPoint point;
        point.parameter = parameter;
        point.width = width.stat;
        point.fse = fse.stat;
        point.shuffled = shuffled.stat;
        point.eff = point.width.mean - point.fse.mean;
        point.eff_std = quad(point.width.stddev, point.fse.stddev);
        point.pdf = point.eff - table.nl;
        point.pdf_std = quad(point.eff_std, table.nl_std);
        table.points.push_back(point);
        for (LegOutcome* leg : {&width, &fse, &shuffled})
            for (std::string& note : leg->notes)
                table.notes.push_back(std::move(note));
    }
    return table;
}

} // namespace mfcomp
