#include <doctest.h>

#include <cmath>
#include <vector>

#include "mfcomp/decompose.hpp"
#include "mfcomp/errors.hpp"
#include "mfcomp/rng.hpp"
#include "mfcomp/surrogates.hpp"
#include "mfcomp/synthetic.hpp"

using namespace mfcomp;

namespace {

// Volatility-like input: fat-tailed values in long-memory order. Rank
// remapping of a Gaussian path introduces no structure beyond the linear
// memory, which is exactly what the surrogate legs are supposed to absorb.
Series volatility_like(std::size_t n, std::uint64_t seed) {
    Rng fgn_rng = make_rng(derive_seed(seed, 1));
    FgnSpec spec;
    spec.hurst = 0.75;
    spec.length = n;
    const Series ordering = generate_fgn(spec, fgn_rng).series;
    Rng remap_rng = make_rng(derive_seed(seed, 2));
    return rank_remap(ordering, DistributionSpec::student_abs(3.0), remap_rng);
}

} // namespace

TEST_SUITE("decompose") {

TEST_CASE("component arithmetic is exact and ensembles are accounted for") {
    const Series input = volatility_like(4096, 500);
    AnalysisConfig cfg = AnalysisConfig::defaults(input.size());
    cfg.seed = 501;
    DecomposeOptions options;
    options.ensemble = 6;
    options.seed = 502;
    options.iaaft_max_iter = 200;

    const ComponentReport report = decompose(input, cfg, options);

    CHECK(report.width > 0.0);
    CHECK(report.eff == report.width - report.fse.mean);
    CHECK(report.pdf == (report.width - report.fse.mean) - report.nl);
    CHECK(report.nl == report.norm.mean - report.norm_fse.mean);

    CHECK(report.fse.count == 6);
    CHECK(report.fse.failures == 0);
    CHECK(report.shuffled.count == 6);
    CHECK(report.norm.count == 6);
    CHECK(report.norm_fse.count == 6);
    CHECK(report.norm_shuffled.count == 6);

    CHECK(report.eff_std == report.fse.stddev);
    CHECK(report.spectra.q.size() == cfg.q_grid.size());
    CHECK(report.spectra.alpha_linear.size() == cfg.q_grid.size());
    CHECK(report.spectra.alpha_gaussian.size() == cfg.q_grid.size());

    // No Gaussian parameters were supplied, so the sample moments were used
    // and noted.
    CHECK(report.gaussian_sigma > 0.0);
    CHECK(!report.notes.empty());
}

TEST_CASE("decomposition is deterministic for a fixed seed") {
    const Series input = volatility_like(2048, 600);
    AnalysisConfig cfg = AnalysisConfig::defaults(input.size());
    cfg.seed = 601;
    DecomposeOptions options;
    options.ensemble = 4;
    options.seed = 602;
    options.iaaft_max_iter = 150;

    const ComponentReport a = decompose(input, cfg, options);
    const ComponentReport b = decompose(input, cfg, options);
    CHECK(a.width == b.width);
    CHECK(a.fse.mean == b.fse.mean);
    CHECK(a.nl == b.nl);
    CHECK(a.pdf == b.pdf);
    CHECK(a.spectra.alpha_shuffled == b.spectra.alpha_shuffled);
}

TEST_CASE("explicit gaussian parameters are honored") {
    const Series input = volatility_like(2048, 610);
    AnalysisConfig cfg = AnalysisConfig::defaults(input.size());
    cfg.seed = 611;
    DecomposeOptions options;
    options.ensemble = 4;
    options.seed = 612;
    options.iaaft_max_iter = 150;
    options.gaussian_params = std::make_pair(0.0, 1.0);

    const ComponentReport report = decompose(input, cfg, options);
    CHECK(report.gaussian_mu == 0.0);
    CHECK(report.gaussian_sigma == 1.0);
}

TEST_CASE("decompose rejects tiny ensembles and constant input") {
    const Series input = volatility_like(2048, 620);
    AnalysisConfig cfg = AnalysisConfig::defaults(input.size());
    DecomposeOptions options;
    options.ensemble = 1;
    CHECK_THROWS_AS(decompose(input, cfg, options), ConfigError);

    Series flat;
    flat.kind = SeriesKind::generic_positive;
    flat.values.assign(2048, 1.0);
    DecomposeOptions ok;
    ok.ensemble = 4;
    CHECK_THROWS_AS(decompose(flat, cfg, ok), NumericError);
}

TEST_CASE("family sweep shares the nonlinearity leg with decompose") {
    const Series input = volatility_like(2048, 700);
    AnalysisConfig cfg = AnalysisConfig::defaults(input.size());
    cfg.seed = 701;
    DecomposeOptions options;
    options.ensemble = 4;
    options.seed = 702;
    options.iaaft_max_iter = 150;

    const SweepTable sweep =
        family_sweep(input, DistributionSpec::Family::student_abs, {3.0, 5.0}, cfg, options);
    REQUIRE(sweep.points.size() == 2);
    CHECK(sweep.points[0].parameter == 3.0);
    for (const SweepPoint& point : sweep.points) {
        CHECK(point.width.count == 4);
        CHECK(point.eff == point.width.mean - point.fse.mean);
        CHECK(point.pdf == point.eff - sweep.nl);
        CHECK(point.width.mean > 0.0);
    }

    // The Gaussian reference chain only depends on the input ordering, so it
    // is the same ensemble as in the direct decomposition.
    const ComponentReport report = decompose(input, cfg, options);
    CHECK(sweep.nl == report.nl);
    CHECK(sweep.norm.mean == report.norm.mean);
    CHECK(sweep.norm_fse.mean == report.norm_fse.mean);
}

TEST_CASE("family sweep validates its family and grid") {
    const Series input = volatility_like(2048, 710);
    AnalysisConfig cfg = AnalysisConfig::defaults(input.size());
    DecomposeOptions options;
    options.ensemble = 4;
    CHECK_THROWS_AS(
        family_sweep(input, DistributionSpec::Family::gaussian_abs, {1.0}, cfg, options),
        ConfigError);
    CHECK_THROWS_AS(family_sweep(input, DistributionSpec::Family::weibull, {}, cfg, options),
                    ConfigError);
}

} // TEST_SUITE
