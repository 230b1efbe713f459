// Command line front end: measures multifractal spectra of positive series,
// generates surrogate and synthetic data, calibrates finite-size effects and
// decomposes apparent singularity widths into their components.

#include <array>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mfcomp/analysis.hpp"
#include "mfcomp/decompose.hpp"
#include "mfcomp/errors.hpp"
#include "mfcomp/fse.hpp"
#include "mfcomp/parallel.hpp"
#include "mfcomp/report.hpp"
#include "mfcomp/series.hpp"
#include "mfcomp/stats.hpp"
#include "mfcomp/surrogates.hpp"
#include "mfcomp/synthetic.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using mfcomp::ConfigError;
using mfcomp::InputError;
using mfcomp::NumericError;

struct GlobalOpts {
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    bool ci = false;
    std::string emit = "both";
    std::string invocation;
};

struct AnalysisOpts {
    double q_max = 4.0;
    double q_step = 0.25;
    std::size_t scale_count = 30;
    std::optional<std::size_t> scale_min;
    std::optional<std::size_t> scale_max;
    std::string sampling = "random";
    double coverage = 2.0;
    std::optional<std::size_t> fit_min;
    std::optional<std::size_t> fit_max;
};

struct InputOpts {
    std::string path;
    std::string column = "0";
    std::string kind = "volatility";
};

void add_global(CLI::App* cmd, GlobalOpts& g) {
    cmd->add_option("--out", g.out_dir, "Output directory")->required();
    cmd->add_option("--seed", g.seed, "Master seed; derived per-task streams are documented");
    cmd->add_flag("--ci", g.ci, "Reproducibility mode; requires --seed");
    cmd->add_option("--emit", g.emit, "Artifacts to write: json, csv or both")
        ->check(CLI::IsMember({"json", "csv", "both"}))
        ->capture_default_str();
}

void add_analysis(CLI::App* cmd, AnalysisOpts& a) {
    cmd->add_option("--q-max", a.q_max, "Largest |q| of the moment grid")->capture_default_str();
    cmd->add_option("--q-step", a.q_step, "Moment grid spacing")->capture_default_str();
    cmd->add_option("--scale-count", a.scale_count, "Number of box sizes")->capture_default_str();
    cmd->add_option("--scale-min", a.scale_min, "Smallest box size (default n/60)");
    cmd->add_option("--scale-max", a.scale_max, "Largest box size (default n/3)");
    cmd->add_option("--sampling", a.sampling, "Window sampling: random, exhaustive or aligned")
        ->check(CLI::IsMember({"random", "exhaustive", "aligned"}))
        ->capture_default_str();
    cmd->add_option("--coverage", a.coverage, "Window count multiple of n/scale")
        ->capture_default_str();
    cmd->add_option("--fit-min", a.fit_min, "Smallest box size used in the tau fit");
    cmd->add_option("--fit-max", a.fit_max, "Largest box size used in the tau fit");
}

void add_input(CLI::App* cmd, InputOpts& in, bool require = true) {
    auto* opt = cmd->add_option("--input", in.path, "Input CSV file");
    if (require)
        opt->required();
    cmd->add_option("--column", in.column, "CSV column, 0-based index or header name")
        ->capture_default_str();
    cmd->add_option("--kind", in.kind, "Input interpretation")
        ->check(CLI::IsMember({"price", "volatility", "generic_positive"}))
        ->capture_default_str();
}

mfcomp::AnalysisConfig build_config(const AnalysisOpts& a, std::size_t n, std::uint64_t seed) {
    mfcomp::AnalysisConfig cfg;
    cfg.q_grid = mfcomp::AnalysisConfig::make_q_grid(a.q_max, a.q_step);
    if (a.scale_min && a.scale_max) {
        if (!(*a.scale_min < *a.scale_max))
            throw ConfigError("--scale-min must be smaller than --scale-max");
        cfg.scale_grid = mfcomp::AnalysisConfig::make_scale_grid(
            n, a.scale_count, static_cast<double>(*a.scale_min) / static_cast<double>(n),
            static_cast<double>(*a.scale_max) / static_cast<double>(n));
    } else if (a.scale_min || a.scale_max) {
        throw ConfigError("--scale-min and --scale-max must be given together");
    } else {
        cfg.scale_grid =
            mfcomp::AnalysisConfig::make_scale_grid(n, a.scale_count, 1.0 / 60.0, 1.0 / 3.0);
    }
    cfg.sampling = mfcomp::sampling_mode_from_string(a.sampling);
    cfg.window_coverage = a.coverage;
    if (a.fit_min && a.fit_max)
        cfg.fit_range = std::make_pair(*a.fit_min, *a.fit_max);
    else if (a.fit_min || a.fit_max)
        throw ConfigError("--fit-min and --fit-max must be given together");
    cfg.seed = seed;
    cfg.validate(n);
    return cfg;
}

// Loads the input and reduces it to the series the measure is built on:
// prices pass through log-returns to volatility.
mfcomp::Series load_input(const InputOpts& in) {
    const mfcomp::SeriesKind kind = mfcomp::series_kind_from_string(in.kind);
    if (kind == mfcomp::SeriesKind::price) {
        const mfcomp::Series prices = mfcomp::load_price_csv(in.path, in.column);
        return mfcomp::volatility(mfcomp::log_returns(prices));
    }
    return mfcomp::load_series_csv(in.path, in.column, kind);
}

std::uint64_t resolve_seed(const GlobalOpts& g) {
    if (g.seed)
        return *g.seed;
    if (g.ci)
        throw ConfigError("--ci requires an explicit --seed");
    std::random_device rd;
    const std::uint64_t seed =
        (static_cast<std::uint64_t>(rd()) << 32) ^ static_cast<std::uint64_t>(rd());
    std::cerr << "master seed: " << seed << "\n";
    return seed;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            out.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw ConfigError("cannot parse number '" + tok + "' in list");
        }
    }
    if (out.empty())
        throw ConfigError("empty list");
    return out;
}

std::vector<std::size_t> parse_size_list(const std::string& text) {
    std::vector<std::size_t> out;
    for (double v : parse_double_list(text)) {
        if (v < 1.0)
            throw ConfigError("list entries must be positive integers");
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

// "start:stop:step" inclusive.
std::vector<double> parse_range(const std::string& text) {
    double start = 0.0;
    double stop = 0.0;
    double step = 0.0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &start, &stop, &step) != 3 || !(step > 0.0))
        throw ConfigError("range must be start:stop:step with positive step");
    std::vector<double> out;
    for (int i = 0;; ++i) {
        const double v = start + step * i;
        if (v > stop + 1e-9 * step)
            break;
        out.push_back(v);
    }
    if (out.empty())
        throw ConfigError("empty range");
    return out;
}

struct Emitter {
    std::filesystem::path dir;
    std::string emit;

    void json(const std::string& name, const nlohmann::json& j) const {
        if (emit == "csv")
            return;
        mfcomp::write_text_atomic(dir / name, j.dump(2) + "\n");
    }
    void csv(const std::string& name, const std::string& content) const {
        if (emit == "json")
            return;
        mfcomp::write_text_atomic(dir / name, content);
    }
    void always_json(const std::string& name, const nlohmann::json& j) const {
        mfcomp::write_text_atomic(dir / name, j.dump(2) + "\n");
    }
};

struct ManifestClock {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    void finish(mfcomp::RunManifest& manifest, const Emitter& emitter) const {
        manifest.version = kVersion;
        manifest.threads = mfcomp::resolve_thread_count();
        manifest.duration_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        manifest.created_utc = mfcomp::iso_utc_now();
        emitter.always_json("run_manifest.json", mfcomp::manifest_json(manifest));
    }
};

mfcomp::DistributionSpec build_distribution(const std::string& family, double mu, double sigma,
                                            double gamma, double beta,
                                            const std::string& reference_path,
                                            const std::string& reference_column) {
    using DS = mfcomp::DistributionSpec;
    const DS::Family fam = mfcomp::distribution_family_from_string(family);
    switch (fam) {
    case DS::Family::gaussian_abs:
        return DS::gaussian_abs(mu, sigma);
    case DS::Family::student_abs:
        return DS::student_abs(gamma);
    case DS::Family::weibull:
        return DS::weibull(beta);
    case DS::Family::empirical: {
        if (reference_path.empty())
            throw ConfigError("empirical distribution requires --reference");
        mfcomp::Series ref = mfcomp::load_series_csv(reference_path, reference_column,
                                                     mfcomp::SeriesKind::generic_positive);
        return DS::empirical(std::move(ref));
    }
    }
    throw ConfigError("unknown distribution family");
}

int run_cli(int argc, char** argv) {
    CLI::App app{"Multifractal width measurement and finite-size decomposition"};
    app.set_version_flag("--version", std::string("mfcomp ") + kVersion);
    app.require_subcommand(1);

    std::string invocation;
    for (int i = 0; i < argc; ++i) {
        if (i)
            invocation += ' ';
        invocation += argv[i];
    }

    // ---- analyze ----
    auto* analyze_cmd = app.add_subcommand("analyze", "Singularity spectrum of one series");
    GlobalOpts an_g;
    AnalysisOpts an_a;
    InputOpts an_in;
    add_global(analyze_cmd, an_g);
    add_analysis(analyze_cmd, an_a);
    add_input(analyze_cmd, an_in);

    analyze_cmd->callback([&]() {
        ManifestClock clock;
        const std::uint64_t seed = resolve_seed(an_g);
        const mfcomp::Series series = load_input(an_in);
        const mfcomp::AnalysisConfig cfg = build_config(an_a, series.size(), seed);
        const mfcomp::AnalysisResult result = mfcomp::analyze(series, cfg);

        Emitter emitter{an_g.out_dir, an_g.emit};
        nlohmann::json spectrum = mfcomp::spectrum_json(result.spectrum);
        spectrum["config"] = mfcomp::config_json(cfg);
        spectrum["input_label"] = series.label;
        spectrum["n"] = series.size();
        emitter.json("spectrum.json", spectrum);
        emitter.csv("spectrum.csv", mfcomp::spectrum_csv(result.spectrum));
        emitter.csv("partition.csv", mfcomp::partition_csv(result.table));

        mfcomp::RunManifest manifest;
        manifest.command = "analyze";
        manifest.invocation = invocation;
        manifest.master_seed = seed;
        manifest.ci_mode = an_g.ci;
        manifest.config = mfcomp::config_json(cfg);
        manifest.config["input"] = an_in.path;
        manifest.config["column"] = an_in.column;
        manifest.config["kind"] = an_in.kind;
        manifest.inputs.emplace_back(an_in.path, mfcomp::sha256_hex_file(an_in.path));
        clock.finish(manifest, emitter);
    });

    // ---- surrogate ----
    auto* surrogate_cmd = app.add_subcommand("surrogate", "Surrogate series generation");
    GlobalOpts su_g;
    InputOpts su_in;
    std::string su_method = "iaaft";
    std::size_t su_count = 1;
    std::size_t su_max_iter = 1000;
    std::string su_family = "gaussian_abs";
    double su_mu = 0.0;
    double su_sigma = 0.0;
    double su_gamma = 3.0;
    double su_beta = 1.0;
    bool su_moments = false;
    add_global(surrogate_cmd, su_g);
    add_input(surrogate_cmd, su_in);
    surrogate_cmd
        ->add_option("--method", su_method,
                     "shuffle, iaaft (linear-memory surrogate) or remap (marginal replacement)")
        ->check(CLI::IsMember({"shuffle", "iaaft", "remap"}))
        ->capture_default_str();
    surrogate_cmd->add_option("--count", su_count, "Number of members")->capture_default_str();
    surrogate_cmd->add_option("--max-iter", su_max_iter, "Iteration cap per member")
        ->capture_default_str();
    surrogate_cmd->add_option("--family", su_family, "remap: replacement marginal")
        ->check(CLI::IsMember({"gaussian_abs", "student_abs", "weibull"}))
        ->capture_default_str();
    surrogate_cmd->add_option("--mu", su_mu, "gaussian_abs location");
    surrogate_cmd->add_option("--sigma", su_sigma, "gaussian_abs scale");
    surrogate_cmd->add_option("--gamma", su_gamma, "student_abs tail exponent")
        ->capture_default_str();
    surrogate_cmd->add_option("--beta", su_beta, "weibull shape")->capture_default_str();
    surrogate_cmd->add_flag("--moments", su_moments,
                            "remap: take gaussian_abs mu/sigma from the input sample");

    surrogate_cmd->callback([&]() {
        ManifestClock clock;
        const std::uint64_t seed = resolve_seed(su_g);
        const mfcomp::Series series = load_input(su_in);
        if (su_count < 1)
            throw ConfigError("--count must be at least 1");

        Emitter emitter{su_g.out_dir, su_g.emit};
        nlohmann::json members = nlohmann::json::array();
        for (std::size_t i = 0; i < su_count; ++i) {
            mfcomp::Rng rng = mfcomp::make_rng(mfcomp::derive_seed(seed, i));
            mfcomp::Series member;
            nlohmann::json meta;
            meta["member"] = i;
            if (su_method == "shuffle") {
                member = mfcomp::shuffle(series, rng);
            } else if (su_method == "iaaft") {
                auto [surrogate, report] =
                    mfcomp::linear_memory_surrogate(series, rng, su_max_iter);
                member = std::move(surrogate);
                meta["iaaft"] = mfcomp::iaaft_report_json(report);
            } else {
                double mu = su_mu;
                double sigma = su_sigma;
                if (su_moments || (su_family == "gaussian_abs" && !(sigma > 0.0))) {
                    mu = mfcomp::mean(series.values);
                    sigma = mfcomp::sample_stddev(series.values);
                }
                const mfcomp::DistributionSpec spec =
                    build_distribution(su_family, mu, sigma, su_gamma, su_beta, "", "");
                member = mfcomp::rank_remap(series, spec, rng);
                meta["family"] = spec.describe();
            }
            meta["label"] = member.label;
            meta["seed"] = mfcomp::derive_seed(seed, i);
            members.push_back(meta);

            std::array<char, 32> name{};
            std::snprintf(name.data(), name.size(), "surrogate_%03zu.csv", i);
            emitter.csv(name.data(), mfcomp::series_csv(member));
        }
        emitter.json("members.json", nlohmann::json{{"method", su_method},
                                                    {"count", su_count},
                                                    {"members", members}});

        mfcomp::RunManifest manifest;
        manifest.command = "surrogate";
        manifest.invocation = invocation;
        manifest.master_seed = seed;
        manifest.ci_mode = su_g.ci;
        manifest.config = {{"method", su_method},
                           {"count", su_count},
                           {"max_iter", su_max_iter},
                           {"input", su_in.path},
                           {"column", su_in.column},
                           {"kind", su_in.kind}};
        manifest.inputs.emplace_back(su_in.path, mfcomp::sha256_hex_file(su_in.path));
        clock.finish(manifest, emitter);
    });

    // ---- synth ----
    auto* synth_cmd = app.add_subcommand("synth", "Synthetic reference series");
    GlobalOpts sy_g;
    std::string sy_model = "fgn";
    double sy_hurst = 0.5;
    std::size_t sy_length = 65536;
    double sy_p = 0.3;
    std::size_t sy_depth = 16;
    bool sy_fixed = false;
    add_global(synth_cmd, sy_g);
    synth_cmd->add_option("--model", sy_model, "fgn or cascade")
        ->check(CLI::IsMember({"fgn", "cascade"}))
        ->capture_default_str();
    synth_cmd->add_option("--hurst", sy_hurst, "fgn: Hurst exponent")->capture_default_str();
    synth_cmd->add_option("--length", sy_length, "fgn: series length")->capture_default_str();
    synth_cmd->add_option("--p", sy_p, "cascade: multiplier in (0, 0.5]")->capture_default_str();
    synth_cmd->add_option("--depth", sy_depth, "cascade: splits, length = 2^depth")
        ->capture_default_str();
    synth_cmd->add_flag("--fixed", sy_fixed, "cascade: keep (p, 1-p) order at every node");

    synth_cmd->callback([&]() {
        ManifestClock clock;
        const std::uint64_t seed = resolve_seed(sy_g);
        mfcomp::Rng rng = mfcomp::make_rng(mfcomp::derive_seed(seed, 0));

        Emitter emitter{sy_g.out_dir, sy_g.emit};
        nlohmann::json meta;
        mfcomp::Series series;
        if (sy_model == "fgn") {
            const mfcomp::FgnOutput output = mfcomp::generate_fgn({sy_hurst, sy_length}, rng);
            series = output.series;
            meta["method"] = mfcomp::to_string(output.method);
            meta["hurst"] = sy_hurst;
            meta["length"] = sy_length;
        } else {
            series = mfcomp::binomial_cascade({sy_p, sy_depth, !sy_fixed}, rng);
            meta["p"] = sy_p;
            meta["depth"] = sy_depth;
            meta["tau_examples"] = {{"q2", mfcomp::cascade_tau(sy_p, 2.0)},
                                    {"q-2", mfcomp::cascade_tau(sy_p, -2.0)}};
        }
        meta["model"] = sy_model;
        meta["label"] = series.label;
        emitter.csv("series.csv", mfcomp::series_csv(series));
        emitter.json("series.json", meta);

        mfcomp::RunManifest manifest;
        manifest.command = "synth";
        manifest.invocation = invocation;
        manifest.master_seed = seed;
        manifest.ci_mode = sy_g.ci;
        manifest.config = meta;
        clock.finish(manifest, emitter);
    });

    // ---- fse-calibrate ----
    auto* fse_cmd = app.add_subcommand("fse-calibrate",
                                       "Finite-size width scan over (H, L) and its laws");
    GlobalOpts fs_g;
    std::string fs_pdf = "gaussian_abs";
    double fs_mu = 0.0;
    double fs_sigma = 1.0;
    double fs_gamma = 3.0;
    double fs_beta = 1.0;
    std::string fs_reference;
    std::string fs_reference_column = "0";
    std::string fs_hurst_list = "0.2,0.35,0.5,0.65,0.8";
    std::string fs_length_list = "1024,4096,16384,65536,131072";
    std::size_t fs_ensemble = 20;
    std::size_t fs_max_iter = 300;
    std::string fs_window = "1000:138950";
    std::vector<std::string> fs_predict;
    std::string fs_table;
    add_global(fse_cmd, fs_g);
    fse_cmd->add_option("--pdf", fs_pdf, "Marginal the members are drawn from")
        ->check(CLI::IsMember({"gaussian_abs", "student_abs", "weibull", "empirical"}))
        ->capture_default_str();
    fse_cmd->add_option("--mu", fs_mu, "gaussian_abs location")->capture_default_str();
    fse_cmd->add_option("--sigma", fs_sigma, "gaussian_abs scale")->capture_default_str();
    fse_cmd->add_option("--gamma", fs_gamma, "student_abs tail exponent")->capture_default_str();
    fse_cmd->add_option("--beta", fs_beta, "weibull shape")->capture_default_str();
    fse_cmd->add_option("--reference", fs_reference, "empirical: reference CSV");
    fse_cmd->add_option("--reference-column", fs_reference_column, "empirical: CSV column")
        ->capture_default_str();
    fse_cmd->add_option("--hurst-list", fs_hurst_list, "Comma-separated H grid")
        ->capture_default_str();
    fse_cmd->add_option("--length-list", fs_length_list, "Comma-separated L grid")
        ->capture_default_str();
    fse_cmd->add_option("--ensemble", fs_ensemble, "Members per (H, L) cell")
        ->capture_default_str();
    fse_cmd->add_option("--max-iter", fs_max_iter, "Iteration cap per member")
        ->capture_default_str();
    fse_cmd->add_option("--window", fs_window, "Scaling window lo:hi for the power-law fits")
        ->capture_default_str();
    fse_cmd->add_option("--predict", fs_predict, "H:L queries answered from the table")
        ->expected(-1);
    fse_cmd->add_option("--table", fs_table, "Skip the scan, load this fse_table.json");

    fse_cmd->callback([&]() {
        ManifestClock clock;
        const std::uint64_t seed = resolve_seed(fs_g);
        Emitter emitter{fs_g.out_dir, fs_g.emit};

        double win_lo = 0.0;
        double win_hi = 0.0;
        if (std::sscanf(fs_window.c_str(), "%lf:%lf", &win_lo, &win_hi) != 2 ||
            !(win_lo < win_hi))
            throw ConfigError("--window must be lo:hi with lo < hi");

        mfcomp::FseTable table;
        if (!fs_table.empty()) {
            std::ifstream in(fs_table);
            if (!in)
                throw InputError("cannot open table: " + fs_table);
            nlohmann::json j;
            try {
                in >> j;
            } catch (const std::exception& e) {
                throw InputError("cannot parse table " + fs_table + ": " + e.what());
            }
            table = mfcomp::fse_table_from_json(j);
            table.scaling_window = {win_lo, win_hi};
        } else {
            const mfcomp::DistributionSpec pdf = build_distribution(
                fs_pdf, fs_mu, fs_sigma, fs_gamma, fs_beta, fs_reference, fs_reference_column);
            mfcomp::FseScanOptions options;
            options.ensemble = fs_ensemble;
            options.seed = seed;
            options.iaaft_max_iter = fs_max_iter;
            options.scaling_window = {win_lo, win_hi};
            options.threads = mfcomp::resolve_thread_count();
            table = mfcomp::fse_scan(pdf, parse_double_list(fs_hurst_list),
                                     parse_size_list(fs_length_list), options);
        }

        emitter.json("fse_table.json", mfcomp::fse_table_json(table));
        emitter.csv("fse_table.csv", mfcomp::fse_csv(table));

        // The power-law fits need several lengths inside the scaling window; a
        // deliberately small scan still yields a usable table, so a fit failure
        // only skips the diagnostic output.
        try {
            const std::vector<mfcomp::PowerLawFit> exponents = mfcomp::fit_power_exponent(table);
            const mfcomp::FseFit fit = mfcomp::fit_linear_laws(table, exponents);
            emitter.json("fse_fit.json", mfcomp::fse_fit_json(fit));
        } catch (const NumericError& err) {
            std::cerr << "warning: skipping power-law fits: " << err.what() << "\n";
        }

        if (!fs_predict.empty()) {
            nlohmann::json predictions = nlohmann::json::array();
            for (const std::string& query : fs_predict) {
                double h = 0.0;
                double l = 0.0;
                if (std::sscanf(query.c_str(), "%lf:%lf", &h, &l) != 2)
                    throw ConfigError("--predict expects H:L, got '" + query + "'");
                const mfcomp::FsePrediction p = mfcomp::fse_predict(h, l, table);
                predictions.push_back({{"hurst", h},
                                       {"length", l},
                                       {"width", p.width},
                                       {"from_table", p.from_table}});
            }
            emitter.json("predictions.json", predictions);
        }

        mfcomp::RunManifest manifest;
        manifest.command = "fse-calibrate";
        manifest.invocation = invocation;
        manifest.master_seed = seed;
        manifest.ci_mode = fs_g.ci;
        manifest.config = {{"pdf", table.pdf},
                           {"hurst_list", fs_hurst_list},
                           {"length_list", fs_length_list},
                           {"ensemble", fs_ensemble},
                           {"max_iter", fs_max_iter},
                           {"window", fs_window}};
        if (!fs_table.empty())
            manifest.inputs.emplace_back(fs_table, mfcomp::sha256_hex_file(fs_table));
        if (!fs_reference.empty())
            manifest.inputs.emplace_back(fs_reference, mfcomp::sha256_hex_file(fs_reference));
        clock.finish(manifest, emitter);
    });

    // ---- decompose ----
    auto* decompose_cmd =
        app.add_subcommand("decompose", "Width components of one volatility series");
    GlobalOpts de_g;
    AnalysisOpts de_a;
    InputOpts de_in;
    std::size_t de_ensemble = 100;
    std::size_t de_max_iter = 1000;
    std::optional<double> de_mu;
    std::optional<double> de_sigma;
    add_global(decompose_cmd, de_g);
    add_analysis(decompose_cmd, de_a);
    add_input(decompose_cmd, de_in);
    decompose_cmd->add_option("--ensemble", de_ensemble, "Surrogates per leg")
        ->capture_default_str();
    decompose_cmd->add_option("--max-iter", de_max_iter, "Iteration cap per surrogate")
        ->capture_default_str();
    decompose_cmd->add_option("--mu", de_mu, "Gaussian reference location (default: sample)");
    decompose_cmd->add_option("--sigma", de_sigma, "Gaussian reference scale (default: sample)");

    decompose_cmd->callback([&]() {
        ManifestClock clock;
        const std::uint64_t seed = resolve_seed(de_g);
        const mfcomp::Series series = load_input(de_in);
        const mfcomp::AnalysisConfig cfg =
            build_config(de_a, series.size(), mfcomp::derive_seed(seed, 0));

        mfcomp::DecomposeOptions options;
        options.ensemble = de_ensemble;
        options.seed = seed;
        options.iaaft_max_iter = de_max_iter;
        options.threads = mfcomp::resolve_thread_count();
        if (de_mu && de_sigma)
            options.gaussian_params = std::make_pair(*de_mu, *de_sigma);
        else if (de_mu || de_sigma)
            throw ConfigError("--mu and --sigma must be given together");

        const mfcomp::ComponentReport report = mfcomp::decompose(series, cfg, options);

        Emitter emitter{de_g.out_dir, de_g.emit};
        nlohmann::json j = mfcomp::component_report_json(report);
        j["config"] = mfcomp::config_json(cfg);
        j["input_label"] = series.label;
        emitter.json("components.json", j);
        emitter.csv("leg_spectra.csv", mfcomp::leg_spectra_csv(report.spectra));

        mfcomp::RunManifest manifest;
        manifest.command = "decompose";
        manifest.invocation = invocation;
        manifest.master_seed = seed;
        manifest.ci_mode = de_g.ci;
        manifest.config = mfcomp::config_json(cfg);
        manifest.config["ensemble"] = de_ensemble;
        manifest.config["max_iter"] = de_max_iter;
        manifest.config["input"] = de_in.path;
        manifest.config["column"] = de_in.column;
        manifest.config["kind"] = de_in.kind;
        manifest.inputs.emplace_back(de_in.path, mfcomp::sha256_hex_file(de_in.path));
        clock.finish(manifest, emitter);
    });

    // ---- sweep ----
    auto* sweep_cmd =
        app.add_subcommand("sweep", "Width components across a family of marginals");
    GlobalOpts sw_g;
    AnalysisOpts sw_a;
    InputOpts sw_in;
    std::string sw_family = "student_abs";
    std::string sw_grid;
    std::string sw_grid_range;
    std::size_t sw_ensemble = 100;
    std::size_t sw_max_iter = 1000;
    add_global(sweep_cmd, sw_g);
    add_analysis(sweep_cmd, sw_a);
    add_input(sweep_cmd, sw_in);
    sweep_cmd->add_option("--family", sw_family, "student_abs or weibull")
        ->check(CLI::IsMember({"student_abs", "weibull"}))
        ->capture_default_str();
    sweep_cmd->add_option("--grid", sw_grid, "Comma-separated tail parameters");
    sweep_cmd->add_option("--grid-range", sw_grid_range, "start:stop:step tail parameters");
    sweep_cmd->add_option("--ensemble", sw_ensemble, "Members per grid point")
        ->capture_default_str();
    sweep_cmd->add_option("--max-iter", sw_max_iter, "Iteration cap per surrogate")
        ->capture_default_str();

    sweep_cmd->callback([&]() {
        ManifestClock clock;
        const std::uint64_t seed = resolve_seed(sw_g);
        const mfcomp::Series series = load_input(sw_in);
        const mfcomp::AnalysisConfig cfg =
            build_config(sw_a, series.size(), mfcomp::derive_seed(seed, 0));

        std::vector<double> grid;
        if (!sw_grid.empty() && !sw_grid_range.empty())
            throw ConfigError("give either --grid or --grid-range, not both");
        if (!sw_grid.empty())
            grid = parse_double_list(sw_grid);
        else if (!sw_grid_range.empty())
            grid = parse_range(sw_grid_range);
        else
            grid = sw_family == "student_abs" ? parse_range("3:10:0.5") : parse_range("0.4:1:0.1");

        mfcomp::DecomposeOptions options;
        options.ensemble = sw_ensemble;
        options.seed = seed;
        options.iaaft_max_iter = sw_max_iter;
        options.threads = mfcomp::resolve_thread_count();

        const mfcomp::SweepTable table = mfcomp::family_sweep(
            series, mfcomp::distribution_family_from_string(sw_family), grid, cfg, options);

        Emitter emitter{sw_g.out_dir, sw_g.emit};
        nlohmann::json j = mfcomp::sweep_json(table);
        j["config"] = mfcomp::config_json(cfg);
        j["input_label"] = series.label;
        emitter.json("sweep.json", j);
        emitter.csv("sweep.csv", mfcomp::sweep_csv(table));

        mfcomp::RunManifest manifest;
        manifest.command = "sweep";
        manifest.invocation = invocation;
        manifest.master_seed = seed;
        manifest.ci_mode = sw_g.ci;
        manifest.config = mfcomp::config_json(cfg);
        manifest.config["family"] = sw_family;
        manifest.config["grid"] = grid;
        manifest.config["ensemble"] = sw_ensemble;
        manifest.config["input"] = sw_in.path;
        manifest.inputs.emplace_back(sw_in.path, mfcomp::sha256_hex_file(sw_in.path));
        clock.finish(manifest, emitter);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return mfcomp::kExitBadArgs;
    }
    return mfcomp::kExitOk;
}

nlohmann::json error_json(const char* type, int exit_code, const std::string& message) {
    return nlohmann::json{
        {"error", {{"type", type}, {"exit_code", exit_code}, {"message", message}}}};
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const ConfigError& e) {
        std::cerr << error_json("config", mfcomp::kExitBadArgs, e.what()).dump() << "\n";
        return mfcomp::kExitBadArgs;
    } catch (const InputError& e) {
        std::cerr << error_json("input", mfcomp::kExitInputError, e.what()).dump() << "\n";
        return mfcomp::kExitInputError;
    } catch (const NumericError& e) {
        std::cerr << error_json("numeric", mfcomp::kExitNumericError, e.what()).dump() << "\n";
        return mfcomp::kExitNumericError;
    } catch (const std::exception& e) {
        std::cerr << error_json("internal", 1, e.what()).dump() << "\n";
        return 1;
    }
}
