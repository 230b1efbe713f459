#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mfcomp/analysis.hpp"
#include "mfcomp/decompose.hpp"
#include "mfcomp/fse.hpp"
#include "mfcomp/series.hpp"
#include "mfcomp/surrogates.hpp"

namespace mfcomp {

// Everything needed to reproduce a run: the exact invocation, the resolved
// configuration, the master seed and digests of the inputs. Written next to
// the outputs as run_manifest.json. Timing fields are the only part that
// varies between identical runs.
struct RunManifest {
    std::string command;
    std::string invocation;
    std::string version;
    std::uint64_t master_seed = 0;
    bool ci_mode = false;
    nlohmann::json config;
    std::vector<std::pair<std::string, std::string>> inputs; // (path, sha256)
    std::size_t threads = 1;
    double duration_seconds = 0.0;
    std::string created_utc;
};

std::string format_double(double value); // shortest lossless decimal

nlohmann::json config_json(const AnalysisConfig& cfg);
nlohmann::json spectrum_json(const SingularitySpectrum& spectrum);
nlohmann::json iaaft_report_json(const IaaftReport& report);
nlohmann::json ensemble_stat_json(const EnsembleStat& stat);
nlohmann::json component_report_json(const ComponentReport& report);
nlohmann::json sweep_json(const SweepTable& table);
nlohmann::json fse_table_json(const FseTable& table);
nlohmann::json fse_fit_json(const FseFit& fit);
nlohmann::json manifest_json(const RunManifest& manifest);

FseTable fse_table_from_json(const nlohmann::json& j);

std::string series_csv(const Series& series);
std::string partition_csv(const PartitionTable& table);
std::string spectrum_csv(const SingularitySpectrum& spectrum);
std::string fse_csv(const FseTable& table);
std::string sweep_csv(const SweepTable& table);
std::string leg_spectra_csv(const LegSpectra& spectra);

// Writes via a temporary file in the same directory plus an atomic rename,
// so a crash never leaves a half-written artifact. Parent directories are
// created as needed.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

std::string sha256_hex_file(const std::filesystem::path& path);

std::string iso_utc_now();

} // namespace mfcomp
