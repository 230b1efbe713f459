#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "mfcomp/errors.hpp"
#include "mfcomp/rng.hpp"
#include "mfcomp/stats.hpp"
#include "mfcomp/synthetic.hpp"

using namespace mfcomp;

TEST_SUITE("synthetic") {

TEST_CASE("cascade conserves mass and hits the closed-form extremes") {
    Rng rng = make_rng(9);
    CascadeSpec spec;
    spec.p = 0.3;
    spec.depth = 16;
    const Series s = binomial_cascade(spec, rng);
    REQUIRE(s.size() == std::size_t{1} << 16);

    double total = 0.0;
    for (double v : s.values)
        total += v;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

    const auto [lo, hi] = std::minmax_element(s.values.begin(), s.values.end());
    CHECK(*hi == doctest::Approx(std::pow(0.7, 16)).epsilon(1e-12));
    CHECK(*lo == doctest::Approx(std::pow(0.3, 16)).epsilon(1e-12));
    CHECK(*lo > 0.0);
}

TEST_CASE("p = 1/2 collapses to the uniform measure exactly") {
    Rng rng = make_rng(1);
    CascadeSpec spec;
    spec.p = 0.5;
    spec.depth = 12;
    const Series s = binomial_cascade(spec, rng);
    const double leaf = std::ldexp(1.0, -12);
    for (double v : s.values)
        CHECK(v == leaf);
}

TEST_CASE("cascade parameter validation") {
    Rng rng = make_rng(2);
    CascadeSpec spec;
    spec.p = 0.6;
    CHECK_THROWS_AS(binomial_cascade(spec, rng), ConfigError);
    spec.p = 0.0;
    CHECK_THROWS_AS(binomial_cascade(spec, rng), ConfigError);
    spec.p = 0.3;
    spec.depth = 0;
    CHECK_THROWS_AS(binomial_cascade(spec, rng), ConfigError);
    spec.depth = 25;
    CHECK_THROWS_AS(binomial_cascade(spec, rng), ConfigError);
}

TEST_CASE("cascade scaling exponents in closed form") {
    CHECK(cascade_tau(0.3, 0.0) == -1.0);
    CHECK(std::fabs(cascade_tau(0.3, 1.0)) < 1e-12);
    CHECK(cascade_tau(0.3, 2.0) == doctest::Approx(0.785875194647153).epsilon(1e-12));
    CHECK(cascade_tau(0.3, -2.0) == doctest::Approx(-3.717202339344776).epsilon(1e-12));
    CHECK(cascade_tau(0.3, 4.0) == doctest::Approx(2.010424979419093).epsilon(1e-12));
    // p = 1/2 is the monofractal end point: tau = q - 1 for every q.
    for (double q : {-4.0, -1.0, 0.5, 3.0})
        CHECK(cascade_tau(0.5, q) == doctest::Approx(q - 1.0).epsilon(1e-12));

    const std::vector<double> grid{-1.0, 0.0, 2.0};
    const std::vector<double> tau = cascade_tau(0.3, grid);
    REQUIRE(tau.size() == 3);
    CHECK(tau[1] == -1.0);
}

TEST_CASE("fgn uses the exact embedding and matches the target moments") {
    for (double h : {0.2, 0.5, 0.8}) {
        Rng rng = make_rng(77);
        FgnSpec spec;
        spec.hurst = h;
        spec.length = 16384;
        const FgnOutput out = generate_fgn(spec, rng);
        CHECK(out.method == FgnMethod::circulant);
        REQUIRE(out.series.size() == spec.length);
        CHECK(sample_stddev(out.series.values) == doctest::Approx(1.0).epsilon(0.1));

        // gamma(1) = 2^{2H-1} - 1.
        const double expected_acf1 = std::pow(2.0, 2.0 * h - 1.0) - 1.0;
        const std::vector<double> acf = autocorrelation(out.series.values, 1);
        CHECK(std::fabs(acf[1] - expected_acf1) < 0.05);
    }
}

TEST_CASE("fgn handles non-power-of-two lengths") {
    Rng rng = make_rng(5);
    FgnSpec spec;
    spec.hurst = 0.7;
    spec.length = 3000;
    const FgnOutput out = generate_fgn(spec, rng);
    CHECK(out.series.size() == 3000);
}

TEST_CASE("fgn is deterministic for a fixed seed") {
    FgnSpec spec;
    spec.hurst = 0.65;
    spec.length = 1024;
    Rng a = make_rng(400);
    Rng b = make_rng(400);
    CHECK(generate_fgn(spec, a).series.values == generate_fgn(spec, b).series.values);
}

TEST_CASE("fgn parameter validation") {
    Rng rng = make_rng(3);
    FgnSpec spec;
    spec.hurst = 1.0;
    spec.length = 1024;
    CHECK_THROWS_AS(generate_fgn(spec, rng), ConfigError);
    spec.hurst = 0.0;
    CHECK_THROWS_AS(generate_fgn(spec, rng), ConfigError);
    spec.hurst = 0.5;
    spec.length = 63;
    CHECK_THROWS_AS(generate_fgn(spec, rng), ConfigError);
}

TEST_CASE("dfa recovers the memory exponent") {
    for (double h : {0.3, 0.5, 0.8}) {
        Rng rng = make_rng(123);
        FgnSpec spec;
        spec.hurst = h;
        spec.length = 16384;
        const FgnOutput out = generate_fgn(spec, rng);
        const HurstEstimate est = estimate_hurst(out.series);
        CHECK(std::fabs(est.hurst - h) < 0.08);
        CHECK(est.scales_used >= 4);
    }
}

TEST_CASE("dfa needs a long enough series") {
    Series s;
    s.values.assign(512, 1.0);
    CHECK_THROWS_AS(estimate_hurst(s), ConfigError);
}

} // TEST_SUITE
