#include <doctest.h>

#include <cmath>
#include <vector>

#include "mfcomp/errors.hpp"
#include "mfcomp/stats.hpp"

using namespace mfcomp;

TEST_SUITE("stats") {

TEST_CASE("fit_line recovers an exact line with zero residual") {
    std::vector<double> x, y;
    for (int i = 0; i < 10; ++i) {
        x.push_back(i);
        y.push_back(3.0 * i - 2.0);
    }
    const LinearFit fit = fit_line(x, y);
    CHECK(fit.slope == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(fit.intercept == doctest::Approx(-2.0).epsilon(1e-13));
    CHECK(fit.residual_ss < 1e-22);
    CHECK(fit.slope_stderr < 1e-12);
    CHECK(fit.n == 10);
}

TEST_CASE("fit_line matches hand-computed least squares") {
    // x = {0,1,2}, y = {0,1,3}: slope 3/2, intercept -1/6, SS = 1/6,
    // slope stderr = sqrt((SS/(n-2))/Sxx) = sqrt(1/12).
    const std::vector<double> x{0.0, 1.0, 2.0};
    const std::vector<double> y{0.0, 1.0, 3.0};
    const LinearFit fit = fit_line(x, y);
    CHECK(fit.slope == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(fit.intercept == doctest::Approx(-1.0 / 6.0).epsilon(1e-13));
    CHECK(fit.residual_ss == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    CHECK(fit.slope_stderr == doctest::Approx(0.28867513459481287).epsilon(1e-12));
}

TEST_CASE("fit_line rejects degenerate input") {
    const std::vector<double> one{1.0};
    CHECK_THROWS_AS(fit_line(one, one), ConfigError);
    const std::vector<double> x{2.0, 2.0, 2.0};
    const std::vector<double> y{1.0, 2.0, 3.0};
    CHECK_THROWS_AS(fit_line(x, y), NumericError);
}

TEST_CASE("mean and sample variance") {
    const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
    CHECK(mean(v) == doctest::Approx(2.5));
    CHECK(sample_variance(v) == doctest::Approx(5.0 / 3.0).epsilon(1e-14));
    CHECK(sample_stddev(v) == doctest::Approx(std::sqrt(5.0 / 3.0)).epsilon(1e-14));
}

TEST_CASE("prefix sums give window sums") {
    const std::vector<double> v{1.0, 2.0, 3.0, 4.0, 5.0};
    const std::vector<double> p = prefix_sums(v);
    REQUIRE(p.size() == 6);
    CHECK(p[0] == 0.0);
    CHECK(p[5] == 15.0);
    CHECK(p[4] - p[1] == 9.0); // v[1] + v[2] + v[3]
}

TEST_CASE("argsort and ranks are stable under ties") {
    const std::vector<double> v{2.0, 1.0, 2.0, 1.0};
    const std::vector<std::size_t> order = argsort_stable(v);
    CHECK(order == std::vector<std::size_t>{1, 3, 0, 2});
    const std::vector<std::size_t> rank = ranks_stable(v);
    CHECK(rank == std::vector<std::size_t>{2, 0, 3, 1});
}

TEST_CASE("autocorrelation of an alternating series") {
    const std::size_t n = 64;
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = (i % 2 == 0) ? 1.0 : -1.0;
    const std::vector<double> acf = autocorrelation(v, 2);
    REQUIRE(acf.size() == 3);
    CHECK(acf[0] == doctest::Approx(1.0));
    // sum v_i v_{i+1} = -(n-1), normalized by n * var with var = n/(n-1)... the
    // biased estimator divides by the lag-0 sum, so acf[1] = -(n-1)/n.
    CHECK(acf[1] == doctest::Approx(-(double(n) - 1.0) / double(n)).epsilon(1e-12));
}

} // TEST_SUITE
