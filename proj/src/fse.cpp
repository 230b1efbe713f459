#include "mfcomp/fse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mfcomp/analysis.hpp"
#include "mfcomp/errors.hpp"
#include "mfcomp/parallel.hpp"
#include "mfcomp/synthetic.hpp"

namespace mfcomp {

std::vector<double> FseTable::hurst_values() const {
    std::vector<double> hs;
    for (const FseCell& cell : cells)
        if (std::find(hs.begin(), hs.end(), cell.hurst) == hs.end())
            hs.push_back(cell.hurst);
    std::sort(hs.begin(), hs.end());
    return hs;
}

std::vector<std::size_t> FseTable::length_values() const {
    std::vector<std::size_t> ls;
    for (const FseCell& cell : cells)
        if (std::find(ls.begin(), ls.end(), cell.length) == ls.end())
            ls.push_back(cell.length);
    std::sort(ls.begin(), ls.end());
    return ls;
}

const FseCell* FseTable::find(double hurst, std::size_t length) const {
    for (const FseCell& cell : cells)
        if (cell.length == length && std::fabs(cell.hurst - hurst) < 1e-12)
            return &cell;
    return nullptr;
}

FseTable fse_scan(const DistributionSpec& pdf, const std::vector<double>& hurst_list,
                  const std::vector<std::size_t>& length_list, const FseScanOptions& options) {
    pdf.validate();
    if (hurst_list.empty() || length_list.empty())
        throw ConfigError("fse scan: empty H or L grid");
    if (options.ensemble < 2)
        throw ConfigError("fse scan: ensemble must be at least 2");
    for (double h : hurst_list)
        if (!(h > 0.0) || !(h < 1.0))
            throw ConfigError("fse scan: Hurst exponents must lie in (0, 1)");
    for (std::size_t l : length_list)
        if (l < 600)
            throw ConfigError("fse scan: series length must be at least 600");

    FseTable table;
    table.pdf = pdf.describe();
    table.scaling_window = options.scaling_window;

    for (std::size_t hi = 0; hi < hurst_list.size(); ++hi) {
        for (std::size_t li = 0; li < length_list.size(); ++li) {
            const double hurst = hurst_list[hi];
            const std::size_t length = length_list[li];

            std::vector<double> widths(options.ensemble,
                                       std::numeric_limits<double>::quiet_NaN());
            parallel_for(options.ensemble, options.threads, [&](std::size_t k) {
                const std::uint64_t member = derive_seed(options.seed, 0xF5Eu, hi, li, k);
                try {
                    Rng rng_base = make_rng(derive_seed(member, 1));
                    const Series base = sample_distribution(pdf, length, rng_base);

                    Rng rng_fgn = make_rng(derive_seed(member, 2));
                    const FgnOutput fgn = generate_fgn({hurst, length}, rng_fgn);
                    const AmplitudeTarget target = AmplitudeTarget::from_series(fgn.series);

                    Rng rng_iaaft = make_rng(derive_seed(member, 3));
                    auto [surrogate, report] =
                        iaaft(base, target, rng_iaaft, options.iaaft_max_iter, true);
                    (void)report;

                    AnalysisConfig cfg = AnalysisConfig::defaults(length);
                    cfg.seed = derive_seed(member, 4);
                    widths[k] = analyze(surrogate, cfg).spectrum.delta_alpha;
                } catch (const NumericError&) {
                    // failed member, slot stays NaN
                }
            });

            std::vector<double> ok;
            ok.reserve(widths.size());
            for (double w : widths)
                if (std::isfinite(w))
                    ok.push_back(w);

            FseCell cell;
            cell.hurst = hurst;
            cell.length = length;
            cell.ensemble = ok.size();
            cell.failures = options.ensemble - ok.size();
            if (!ok.empty()) {
                cell.mean_width = mean(ok);
                cell.std_width = sample_stddev(ok);
            } else {
                cell.mean_width = std::numeric_limits<double>::quiet_NaN();
                cell.std_width = std::numeric_limits<double>::quiet_NaN();
            }
            table.cells.push_back(cell);
        }
    }
    return table;
}

namespace {

bool cell_in_window(const FseCell& cell, const std::pair<double, double>& window) {
    const auto l = static_cast<double>(cell.length);
    return cell.ensemble > 0 && cell.mean_width > 0.0 && std::isfinite(cell.mean_width) &&
           l >= window.first && l <= window.second;
}

} // namespace

std::vector<PowerLawFit> fit_power_exponent(const FseTable& table) {
    std::vector<PowerLawFit> fits;
    for (double hurst : table.hurst_values()) {
        std::vector<double> log_l;
        std::vector<double> log_w;
        for (const FseCell& cell : table.cells) {
            if (std::fabs(cell.hurst - hurst) > 1e-12)
                continue;
            if (!cell_in_window(cell, table.scaling_window))
                continue;
            log_l.push_back(std::log(static_cast<double>(cell.length)));
            log_w.push_back(std::log(cell.mean_width));
        }
        if (log_l.size() < 3)
            throw NumericError("power-law fit: fewer than 3 lengths inside the scaling window "
                               "for H = " +
                               std::to_string(hurst));
        const LinearFit fit = fit_line(log_l, log_w);
        fits.push_back({hurst, fit.slope, fit.slope_stderr, log_l.size()});
    }
    return fits;
}

FseFit fit_linear_laws(const FseTable& table, const std::vector<PowerLawFit>& exponents) {
    FseFit out;
    out.exponents = exponents;

    std::vector<double> hs;
    std::vector<double> as;
    for (const PowerLawFit& fit : exponents) {
        if (std::fabs(fit.hurst - 0.1) < 1e-9)
            continue; // the shortest-memory corner does not follow the common line
        hs.push_back(fit.hurst);
        as.push_back(fit.exponent);
    }
    if (hs.size() < 2)
        throw ConfigError("linear laws: need at least 2 Hurst values besides 0.1");
    out.a_vs_h = fit_line(hs, as);

    std::vector<double> g_h;
    std::vector<double> ln_g;
    for (double hurst : table.hurst_values()) {
        const double a = 2.0 * hurst - 2.0;
        std::vector<double> g;
        for (const FseCell& cell : table.cells) {
            if (std::fabs(cell.hurst - hurst) > 1e-12)
                continue;
            if (!cell_in_window(cell, table.scaling_window))
                continue;
            g.push_back(cell.mean_width * std::pow(static_cast<double>(cell.length), -a));
        }
        if (g.empty())
            continue;
        const double g_mean = mean(g);
        out.g_h.push_back(hurst);
        out.g_mean.push_back(g_mean);
        g_h.push_back(hurst);
        ln_g.push_back(std::log(g_mean));
    }
    if (g_h.size() < 2)
        throw ConfigError("linear laws: need at least 2 Hurst values for the collapse");
    out.ln_g_vs_h = fit_line(g_h, ln_g);
    return out;
}

double fse_closed_form(double hurst, double length) {
    return std::pow(length, -2.0 * (1.0 - hurst)) * std::exp(10.0 * (1.0 - hurst));
}

FsePrediction fse_predict(double hurst, double length, const FseTable& table) {
    if (!(hurst > 0.0) || !(hurst < 1.0))
        throw ConfigError("fse predict: Hurst exponent must lie in (0, 1)");
    if (!(length > 1.0))
        throw ConfigError("fse predict: length must exceed 1");

    const std::vector<double> hs = table.hurst_values();
    const std::vector<std::size_t> ls = table.length_values();

    auto fallback = [&]() {
        return FsePrediction{fse_closed_form(hurst, length), false};
    };
    if (hs.size() < 2 || ls.size() < 2)
        return fallback();
    if (hurst < hs.front() || hurst > hs.back())
        return fallback();
    const auto lmin = static_cast<double>(ls.front());
    const auto lmax = static_cast<double>(ls.back());
    if (length < lmin || length > lmax)
        return fallback();

    auto bracket = [](const std::vector<double>& grid, double x) {
        std::size_t i = 0;
        while (i + 2 < grid.size() && grid[i + 1] <= x)
            ++i;
        return i;
    };
    std::vector<double> lsd(ls.size());
    for (std::size_t i = 0; i < ls.size(); ++i)
        lsd[i] = static_cast<double>(ls[i]);

    const std::size_t i = bracket(hs, hurst);
    const std::size_t j = bracket(lsd, length);

    const FseCell* c00 = table.find(hs[i], ls[j]);
    const FseCell* c01 = table.find(hs[i], ls[j + 1]);
    const FseCell* c10 = table.find(hs[i + 1], ls[j]);
    const FseCell* c11 = table.find(hs[i + 1], ls[j + 1]);
    for (const FseCell* c : {c00, c01, c10, c11})
        if (!c || c->ensemble == 0 || !std::isfinite(c->mean_width))
            return fallback();

    // Endpoint hits return the stored value unchanged, so grid nodes are
    // reproduced without rounding.
    auto lerp = [](double a, double b, double t) {
        if (t <= 0.0)
            return a;
        if (t >= 1.0)
            return b;
        return a + (b - a) * t;
    };
    const double th = (hurst - hs[i]) / (hs[i + 1] - hs[i]);
    // Interpolate in ln L, where the power-law decay is linear.
    const double tl = (std::log(length) - std::log(lsd[j])) /
                      (std::log(lsd[j + 1]) - std::log(lsd[j]));
    const double lo = lerp(c00->mean_width, c01->mean_width, tl);
    const double hi = lerp(c10->mean_width, c11->mean_width, tl);
    return FsePrediction{lerp(lo, hi, th), true};
}

} // namespace mfcomp
