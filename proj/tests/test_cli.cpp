#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <json.hpp>

#include "helpers.hpp"

using testutil::make_temp_dir;
using testutil::read_file;
using testutil::write_file;

namespace {

namespace fs = std::filesystem;

std::string binary() {
    const char* bin = std::getenv("MFCOMP_BIN");
    REQUIRE_MESSAGE(bin != nullptr, "MFCOMP_BIN must point at the mfcomp executable");
    return bin;
}

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

RunResult run(const std::string& args) {
    const auto dir = make_temp_dir("cli_io");
    const auto out_path = dir / "stdout.txt";
    const auto err_path = dir / "stderr.txt";
    const std::string cmd =
        binary() + " " + args + " >" + out_path.string() + " 2>" + err_path.string();
    const int status = std::system(cmd.c_str());
    RunResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = read_file(out_path);
    result.err = read_file(err_path);
    return result;
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("synth and analyze round trip") {
    const auto dir = make_temp_dir("cli");
    const auto synth_dir = dir / "synth";
    const RunResult synth = run("synth --model cascade --p 0.3 --depth 12 --seed 12 --out " +
                                synth_dir.string());
    CHECK(synth.exit_code == 0);
    CHECK(fs::exists(synth_dir / "series.csv"));
    CHECK(fs::exists(synth_dir / "run_manifest.json"));

    const auto out_dir = dir / "analysis";
    const RunResult analyze = run(
        "analyze --input " + (synth_dir / "series.csv").string() +
        " --column value --kind generic_positive --sampling aligned --scale-min 4 "
        "--scale-max 256 --scale-count 7 --seed 13 --out " +
        out_dir.string());
    CHECK(analyze.exit_code == 0);
    REQUIRE(fs::exists(out_dir / "spectrum.json"));
    CHECK(fs::exists(out_dir / "spectrum.csv"));
    CHECK(fs::exists(out_dir / "partition.csv"));
    CHECK(fs::exists(out_dir / "run_manifest.json"));

    const nlohmann::json spectrum = nlohmann::json::parse(read_file(out_dir / "spectrum.json"));
    CHECK(spectrum.at("delta_alpha").get<double>() > 0.1);
    CHECK(spectrum.at("q").size() == 33);

    const nlohmann::json manifest =
        nlohmann::json::parse(read_file(out_dir / "run_manifest.json"));
    CHECK(manifest.at("command") == "analyze");
    CHECK(manifest.at("master_seed") == 13);
    CHECK(manifest.at("inputs").size() == 1);
}

TEST_CASE("same seed gives byte-identical artifacts") {
    const auto dir = make_temp_dir("cli");
    const std::string common = "surrogate --method shuffle --count 2 --seed 99 ";

    // Seed the input with a tiny synth run.
    const auto input_dir = dir / "input";
    REQUIRE(run("synth --model cascade --depth 10 --seed 3 --out " + input_dir.string())
                .exit_code == 0);
    const std::string input_args = "--input " + (input_dir / "series.csv").string() +
                                   " --column value --kind generic_positive ";

    const auto a = dir / "a";
    const auto b = dir / "b";
    CHECK(run(common + input_args + "--out " + a.string()).exit_code == 0);
    CHECK(run(common + input_args + "--out " + b.string()).exit_code == 0);
    CHECK(read_file(a / "surrogate_000.csv") == read_file(b / "surrogate_000.csv"));
    CHECK(read_file(a / "surrogate_001.csv") == read_file(b / "surrogate_001.csv"));
    CHECK(read_file(a / "members.json") == read_file(b / "members.json"));

    const auto c = dir / "c";
    CHECK(run("surrogate --method shuffle --count 2 --seed 100 " + input_args + "--out " +
              c.string())
              .exit_code == 0);
    CHECK(read_file(a / "surrogate_000.csv") != read_file(c / "surrogate_000.csv"));
}

TEST_CASE("argument errors exit with code 2") {
    CHECK(run("frobnicate --out /tmp/x").exit_code == 2);
    CHECK(run("synth --model cascade --depth 10 --seed 1").exit_code == 2); // no --out
    const auto dir = make_temp_dir("cli");
    CHECK(run("synth --model cascade --depth 10 --ci --out " + (dir / "x").string())
              .exit_code == 2); // --ci needs an explicit seed
    const RunResult bad_sampling =
        run("analyze --input nowhere.csv --sampling sideways --seed 1 --out " +
            (dir / "y").string());
    CHECK(bad_sampling.exit_code == 2);
}

TEST_CASE("missing input exits with code 3 and a structured error") {
    const auto dir = make_temp_dir("cli");
    const RunResult result =
        run("analyze --input " + (dir / "absent.csv").string() + " --seed 1 --out " +
            (dir / "out").string());
    CHECK(result.exit_code == 3);
    const nlohmann::json err = nlohmann::json::parse(result.err);
    CHECK(err.at("error").at("type") == "input");
    CHECK(err.at("error").at("exit_code") == 3);
}

TEST_CASE("numeric failures exit with code 4") {
    const auto dir = make_temp_dir("cli");
    std::string csv = "value\n";
    for (int i = 0; i < 600; ++i)
        csv += "0\n";
    for (int i = 0; i < 600; ++i)
        csv += "1\n";
    const auto input = dir / "zeros.csv";
    write_file(input, csv);

    const RunResult result = run("analyze --input " + input.string() +
                                 " --column value --kind volatility --sampling exhaustive "
                                 "--seed 1 --out " +
                                 (dir / "out").string());
    CHECK(result.exit_code == 4);
    const nlohmann::json err = nlohmann::json::parse(result.err);
    CHECK(err.at("error").at("type") == "numeric");
}

TEST_CASE("emit filter selects artifact formats") {
    const auto dir = make_temp_dir("cli");
    const auto input_dir = dir / "input";
    REQUIRE(run("synth --model cascade --depth 10 --seed 5 --out " + input_dir.string())
                .exit_code == 0);
    const std::string input_args = "--input " + (input_dir / "series.csv").string() +
                                   " --column value --kind generic_positive ";

    const auto csv_only = dir / "csv_only";
    CHECK(run("analyze " + input_args + "--emit csv --seed 6 --out " + csv_only.string())
              .exit_code == 0);
    CHECK(fs::exists(csv_only / "spectrum.csv"));
    CHECK(!fs::exists(csv_only / "spectrum.json"));
    CHECK(fs::exists(csv_only / "run_manifest.json")); // always written

    const auto json_only = dir / "json_only";
    CHECK(run("analyze " + input_args + "--emit json --seed 6 --out " + json_only.string())
              .exit_code == 0);
    CHECK(fs::exists(json_only / "spectrum.json"));
    CHECK(!fs::exists(json_only / "spectrum.csv"));
}

TEST_CASE("version flag") {
    const RunResult result = run("--version");
    CHECK(result.exit_code == 0);
    CHECK(result.out.find("mfcomp") != std::string::npos);
}

TEST_CASE("fse table reload reproduces predictions byte for byte") {
    const auto dir = make_temp_dir("cli");
    const auto scan_dir = dir / "scan";
    const RunResult scan =
        run("fse-calibrate --pdf weibull --beta 1.0 --hurst-list 0.5 --length-list 1024 "
            "--ensemble 2 --max-iter 80 --seed 21 --predict 0.5:1024 --predict 0.45:900 "
            "--out " +
            scan_dir.string());
    CHECK(scan.exit_code == 0);
    REQUIRE(fs::exists(scan_dir / "fse_table.json"));
    REQUIRE(fs::exists(scan_dir / "predictions.json"));

    const auto reload_dir = dir / "reload";
    const RunResult reload =
        run("fse-calibrate --table " + (scan_dir / "fse_table.json").string() +
            " --predict 0.5:1024 --predict 0.45:900 --seed 21 --out " + reload_dir.string());
    CHECK(reload.exit_code == 0);
    CHECK(read_file(reload_dir / "predictions.json") ==
          read_file(scan_dir / "predictions.json"));
}

TEST_CASE("decompose emits a self-consistent component report") {
    const auto dir = make_temp_dir("cli");
    const auto input_dir = dir / "input";
    REQUIRE(run("synth --model cascade --p 0.35 --depth 11 --seed 8 --out " +
                input_dir.string())
                .exit_code == 0);

    const auto out_dir = dir / "components";
    const RunResult result = run(
        "decompose --input " + (input_dir / "series.csv").string() +
        " --column value --kind generic_positive --ensemble 2 --max-iter 60 --seed 9 --out " +
        out_dir.string());
    CHECK(result.exit_code == 0);
    REQUIRE(fs::exists(out_dir / "components.json"));
    CHECK(fs::exists(out_dir / "leg_spectra.csv"));

    const nlohmann::json report =
        nlohmann::json::parse(read_file(out_dir / "components.json"));
    const double width = report.at("width").get<double>();
    const double fse = report.at("fse").at("mean").get<double>();
    const double nl = report.at("nl").get<double>();
    const double pdf = report.at("pdf").get<double>();
    // Shortest-round-trip doubles survive the JSON hop, so the identity stays
    // exact even after parsing.
    CHECK((width - fse) - nl == pdf);
}

} // TEST_SUITE
