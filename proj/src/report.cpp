#include "mfcomp/report.hpp"

#include <openssl/evp.h>
#include <unistd.h>

#include <array>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <sstream>

#include "mfcomp/errors.hpp"

namespace mfcomp {

std::string format_double(double value) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{})
        throw NumericError("format_double: conversion failed");
    return std::string(buf.data(), ptr);
}

nlohmann::json config_json(const AnalysisConfig& cfg) {
    nlohmann::json j;
    j["q_grid"] = cfg.q_grid;
    j["scale_grid"] = cfg.scale_grid;
    j["sampling"] = to_string(cfg.sampling);
    j["window_coverage"] = cfg.window_coverage;
    j["min_windows"] = cfg.min_windows;
    if (cfg.fit_range)
        j["fit_range"] = {cfg.fit_range->first, cfg.fit_range->second};
    else
        j["fit_range"] = nullptr;
    j["seed"] = cfg.seed;
    return j;
}

nlohmann::json spectrum_json(const SingularitySpectrum& spectrum) {
    nlohmann::json j;
    j["q"] = spectrum.q;
    j["tau"] = spectrum.tau;
    j["tau_stderr"] = spectrum.tau_stderr;
    j["alpha"] = spectrum.alpha;
    j["f"] = spectrum.f;
    j["alpha_min"] = spectrum.alpha_min;
    j["alpha_max"] = spectrum.alpha_max;
    j["delta_alpha"] = spectrum.delta_alpha;
    j["warnings"] = spectrum.warnings;
    return j;
}

nlohmann::json iaaft_report_json(const IaaftReport& report) {
    return nlohmann::json{{"iterations", report.iterations},
                          {"spectrum_mismatch", report.spectrum_mismatch},
                          {"converged", report.converged}};
}

nlohmann::json ensemble_stat_json(const EnsembleStat& stat) {
    return nlohmann::json{{"mean", stat.mean},
                          {"stddev", stat.stddev},
                          {"count", stat.count},
                          {"failures", stat.failures}};
}

nlohmann::json component_report_json(const ComponentReport& report) {
    nlohmann::json j;
    j["width"] = report.width;
    j["fse"] = ensemble_stat_json(report.fse);
    j["shuffled"] = ensemble_stat_json(report.shuffled);
    j["norm"] = ensemble_stat_json(report.norm);
    j["norm_fse"] = ensemble_stat_json(report.norm_fse);
    j["norm_shuffled"] = ensemble_stat_json(report.norm_shuffled);
    j["eff"] = report.eff;
    j["eff_std"] = report.eff_std;
    j["nl"] = report.nl;
    j["nl_std"] = report.nl_std;
    j["pdf"] = report.pdf;
    j["pdf_std"] = report.pdf_std;
    j["gaussian_mu"] = report.gaussian_mu;
    j["gaussian_sigma"] = report.gaussian_sigma;
    j["ensemble"] = report.ensemble;
    j["seed"] = report.seed;
    j["notes"] = report.notes;
    return j;
}

nlohmann::json sweep_json(const SweepTable& table) {
    nlohmann::json pts = nlohmann::json::array();
    for (const SweepPoint& p : table.points) {
        pts.push_back({{"parameter", p.parameter},
                       {"width", ensemble_stat_json(p.width)},
                       {"fse", ensemble_stat_json(p.fse)},
                       {"shuffled", ensemble_stat_json(p.shuffled)},
                       {"eff", p.eff},
                       {"eff_std", p.eff_std},
                       {"pdf", p.pdf},
                       {"pdf_std", p.pdf_std}});
    }
    nlohmann::json j;
    j["family"] = to_string(table.family);
    j["points"] = pts;
    j["nl"] = table.nl;
    j["nl_std"] = table.nl_std;
    j["norm"] = ensemble_stat_json(table.norm);
    j["norm_fse"] = ensemble_stat_json(table.norm_fse);
    j["seed"] = table.seed;
    j["notes"] = table.notes;
    return j;
}

nlohmann::json fse_table_json(const FseTable& table) {
    nlohmann::json cells = nlohmann::json::array();
    for (const FseCell& c : table.cells) {
        cells.push_back({{"hurst", c.hurst},
                         {"length", c.length},
                         {"mean_width", c.mean_width},
                         {"std_width", c.std_width},
                         {"ensemble", c.ensemble},
                         {"failures", c.failures}});
    }
    nlohmann::json j;
    j["cells"] = cells;
    j["pdf"] = table.pdf;
    j["scaling_window"] = {table.scaling_window.first, table.scaling_window.second};
    return j;
}

FseTable fse_table_from_json(const nlohmann::json& j) {
    FseTable table;
    table.pdf = j.value("pdf", std::string{});
    if (j.contains("scaling_window")) {
        table.scaling_window.first = j["scaling_window"].at(0).get<double>();
        table.scaling_window.second = j["scaling_window"].at(1).get<double>();
    }
    for (const auto& c : j.at("cells")) {
        FseCell cell;
        cell.hurst = c.at("hurst").get<double>();
        cell.length = c.at("length").get<std::size_t>();
        cell.mean_width = c.at("mean_width").is_null()
                              ? std::numeric_limits<double>::quiet_NaN()
                              : c.at("mean_width").get<double>();
        cell.std_width = c.at("std_width").is_null()
                             ? std::numeric_limits<double>::quiet_NaN()
                             : c.at("std_width").get<double>();
        cell.ensemble = c.at("ensemble").get<std::size_t>();
        cell.failures = c.value("failures", std::size_t{0});
        table.cells.push_back(cell);
    }
    return table;
}

nlohmann::json fse_fit_json(const FseFit& fit) {
    nlohmann::json exps = nlohmann::json::array();
    for (const PowerLawFit& p : fit.exponents) {
        exps.push_back({{"hurst", p.hurst},
                        {"exponent", p.exponent},
                        {"stderr", p.stderr_},
                        {"points", p.points}});
    }
    auto line = [](const LinearFit& f) {
        return nlohmann::json{{"slope", f.slope},
                              {"intercept", f.intercept},
                              {"slope_stderr", f.slope_stderr},
                              {"intercept_stderr", f.intercept_stderr},
                              {"n", f.n}};
    };
    nlohmann::json j;
    j["exponents"] = exps;
    j["a_vs_h"] = line(fit.a_vs_h);
    j["g_h"] = fit.g_h;
    j["g_mean"] = fit.g_mean;
    j["ln_g_vs_h"] = line(fit.ln_g_vs_h);
    return j;
}

nlohmann::json manifest_json(const RunManifest& manifest) {
    nlohmann::json inputs = nlohmann::json::array();
    for (const auto& [path, digest] : manifest.inputs)
        inputs.push_back({{"path", path}, {"sha256", digest}});
    nlohmann::json j;
    j["command"] = manifest.command;
    j["invocation"] = manifest.invocation;
    j["version"] = manifest.version;
    j["master_seed"] = manifest.master_seed;
    j["ci_mode"] = manifest.ci_mode;
    j["config"] = manifest.config;
    j["inputs"] = inputs;
    j["threads"] = manifest.threads;
    j["duration_seconds"] = manifest.duration_seconds;
    j["created_utc"] = manifest.created_utc;
    return j;
}

namespace {

void append_row(std::string& out, std::initializer_list<std::string> fields) {
    bool first = true;
    for (const std::string& f : fields) {
        if (!first)
            out += ',';
        out += f;
        first = false;
    }
    out += '\n';
}

std::string fmt_size(std::size_t v) { return std::to_string(v); }

} // namespace

std::string series_csv(const Series& series) {
    std::string out = "value\n";
    for (double v : series.values) {
        out += format_double(v);
        out += '\n';
    }
    return out;
}

std::string partition_csv(const PartitionTable& table) {
    std::string out = "q,scale,windows,partition\n";
    for (std::size_t qi = 0; qi < table.q.size(); ++qi)
        for (std::size_t si = 0; si < table.scales.size(); ++si)
            append_row(out, {format_double(table.q[qi]), fmt_size(table.scales[si]),
                             fmt_size(table.windows_used[si]),
                             format_double(table.at(qi, si))});
    return out;
}

std::string spectrum_csv(const SingularitySpectrum& spectrum) {
    std::string out = "q,tau,tau_stderr,alpha,f\n";
    for (std::size_t i = 0; i < spectrum.q.size(); ++i)
        append_row(out, {format_double(spectrum.q[i]), format_double(spectrum.tau[i]),
                         format_double(spectrum.tau_stderr[i]), format_double(spectrum.alpha[i]),
                         format_double(spectrum.f[i])});
    return out;
}

std::string fse_csv(const FseTable& table) {
    std::string out = "hurst,length,mean_width,std_width,ensemble,failures\n";
    for (const FseCell& c : table.cells)
        append_row(out, {format_double(c.hurst), fmt_size(c.length),
                         format_double(c.mean_width), format_double(c.std_width),
                         fmt_size(c.ensemble), fmt_size(c.failures)});
    return out;
}

std::string sweep_csv(const SweepTable& table) {
    std::string out =
        "parameter,width_mean,width_std,fse_mean,fse_std,shuffled_mean,shuffled_std,"
        "eff,eff_std,pdf,pdf_std,nl,nl_std\n";
    for (const SweepPoint& p : table.points)
        append_row(out, {format_double(p.parameter), format_double(p.width.mean),
                         format_double(p.width.stddev), format_double(p.fse.mean),
                         format_double(p.fse.stddev), format_double(p.shuffled.mean),
                         format_double(p.shuffled.stddev), format_double(p.eff),
                         format_double(p.eff_std), format_double(p.pdf),
                         format_double(p.pdf_std), format_double(table.nl),
                         format_double(table.nl_std)});
    return out;
}

std::string leg_spectra_csv(const LegSpectra& spectra) {
    std::string out = "q,alpha_original,f_original,alpha_linear,f_linear,alpha_shuffled,"
                      "f_shuffled,alpha_gaussian,f_gaussian\n";
    auto get = [](const std::vector<double>& v, std::size_t i) {
        return i < v.size() ? format_double(v[i]) : std::string{};
    };
    for (std::size_t i = 0; i < spectra.q.size(); ++i)
        append_row(out, {format_double(spectra.q[i]), get(spectra.alpha_original, i),
                         get(spectra.f_original, i), get(spectra.alpha_linear, i),
                         get(spectra.f_linear, i), get(spectra.alpha_shuffled, i),
                         get(spectra.f_shuffled, i), get(spectra.alpha_gaussian, i),
                         get(spectra.f_gaussian, i)});
    return out;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path parent = path.parent_path();
    if (!parent.empty())
        std::filesystem::create_directories(parent);
    std::filesystem::path tmp = path;
    tmp += ".tmp" + std::to_string(static_cast<unsigned long>(::getpid()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw InputError("cannot open for writing: " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out)
            throw InputError("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string sha256_hex_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot open for hashing: " + path.string());

    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (!ctx)
        throw NumericError("sha256: context allocation failed");
    if (EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
        EVP_MD_CTX_free(ctx);
        throw NumericError("sha256: init failed");
    }
    std::array<char, 65536> buf{};
    while (in) {
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        const std::streamsize got = in.gcount();
        if (got > 0 && EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(got)) != 1) {
            EVP_MD_CTX_free(ctx);
            throw NumericError("sha256: update failed");
        }
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx, digest.data(), &len) != 1) {
        EVP_MD_CTX_free(ctx);
        throw NumericError("sha256: final failed");
    }
    EVP_MD_CTX_free(ctx);

    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xF];
    }
    return out;
}

std::string iso_utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::array<char, 32> buf{};
    std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return std::string(buf.data());
}

} // namespace mfcomp
