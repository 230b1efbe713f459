#include "mfcomp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mfcomp/errors.hpp"

namespace mfcomp {

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw ConfigError("fit_line: x and y sizes differ");
    const std::size_t n = x.size();
    if (n < 2)
        throw ConfigError("fit_line: need at least 2 points");

    const double xbar = mean(x);
    const double ybar = mean(y);
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - xbar;
        sxx += dx * dx;
        sxy += dx * (y[i] - ybar);
    }
    if (sxx <= 0.0)
        throw NumericError("fit_line: abscissa values are all equal");

    LinearFit fit;
    fit.n = n;
    fit.slope = sxy / sxx;
    fit.intercept = ybar - fit.slope * xbar;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (fit.slope * x[i] + fit.intercept);
        fit.residual_ss += r * r;
    }
    if (n > 2) {
        const double s2 = fit.residual_ss / static_cast<double>(n - 2);
        fit.slope_stderr = std::sqrt(s2 / sxx);
        fit.intercept_stderr =
            std::sqrt(s2 * (1.0 / static_cast<double>(n) + xbar * xbar / sxx));
    }
    return fit;
}

double mean(std::span<const double> v) {
    if (v.empty())
        return 0.0;
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_variance(std::span<const double> v) {
    const std::size_t n = v.size();
    if (n < 2)
        return 0.0;
    const double m = mean(v);
    double ss = 0.0;
    for (double value : v) {
        const double d = value - m;
        ss += d * d;
    }
    return ss / static_cast<double>(n - 1);
}

double sample_stddev(std::span<const double> v) { return std::sqrt(sample_variance(v)); }

std::vector<double> prefix_sums(std::span<const double> v) {
    std::vector<double> prefix(v.size() + 1, 0.0);
    for (std::size_t i = 0; i < v.size(); ++i)
        prefix[i + 1] = prefix[i] + v[i];
    return prefix;
}

std::vector<std::size_t> argsort_stable(std::span<const double> v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    return order;
}

std::vector<std::size_t> ranks_stable(std::span<const double> v) {
    const std::vector<std::size_t> order = argsort_stable(v);
    std::vector<std::size_t> rank(v.size());
    for (std::size_t r = 0; r < order.size(); ++r)
        rank[order[r]] = r;
    return rank;
}

std::vector<double> autocorrelation(std::span<const double> v, std::size_t max_lag) {
    const std::size_t n = v.size();
    if (n < 2)
        throw ConfigError("autocorrelation: need at least 2 points");
    if (max_lag >= n)
        throw ConfigError("autocorrelation: max_lag must be smaller than the series");

    const double m = mean(v);
    double denom = 0.0;
    for (double value : v) {
        const double d = value - m;
        denom += d * d;
    }
    std::vector<double> acf(max_lag + 1, 0.0);
    if (denom <= 0.0)
        throw NumericError("autocorrelation: series is constant");
    for (std::size_t k = 0; k <= max_lag; ++k) {
        double s = 0.0;
        for (std::size_t t = 0; t + k < n; ++t)
            s += (v[t] - m) * (v[t + k] - m);
        acf[k] = s / denom;
    }
    return acf;
}

} // namespace mfcomp
