#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "mfcomp/errors.hpp"
#include "mfcomp/report.hpp"
#include "mfcomp/series.hpp"

using namespace mfcomp;
using testutil::make_temp_dir;
using testutil::write_file;

TEST_SUITE("series") {

TEST_CASE("headerless csv loads by column index") {
    const auto dir = make_temp_dir("series");
    const auto path = dir / "plain.csv";
    write_file(path, "1.5\n2.5\n3.5\n");
    const Series s = load_series_csv(path.string(), "0", SeriesKind::generic_positive);
    CHECK(s.values == std::vector<double>{1.5, 2.5, 3.5});
    CHECK(s.kind == SeriesKind::generic_positive);
}

TEST_CASE("header row is detected and columns resolve by name") {
    const auto dir = make_temp_dir("series");
    const auto path = dir / "prices.csv";
    write_file(path, "date,Close\n2020-01-02,100\n2020-01-03,110\n2020-01-06,121\n");
    const Series s = load_series_csv(path.string(), "Close", SeriesKind::price);
    CHECK(s.values == std::vector<double>{100.0, 110.0, 121.0});

    // Index addressing skips the detected header too.
    const Series byidx = load_series_csv(path.string(), "1", SeriesKind::price);
    CHECK(byidx.values == s.values);
}

TEST_CASE("csv error paths") {
    const auto dir = make_temp_dir("series");

    CHECK_THROWS_AS(load_series_csv((dir / "absent.csv").string(), "0", SeriesKind::price),
                    InputError);

    const auto bad = dir / "bad.csv";
    write_file(bad, "10\nnope\n30\n");
    CHECK_THROWS_WITH_AS(load_series_csv(bad.string(), "0", SeriesKind::price),
                         doctest::Contains("row 2"), InputError);

    const auto neg = dir / "neg.csv";
    write_file(neg, "10\n-3\n");
    CHECK_THROWS_WITH_AS(load_series_csv(neg.string(), "0", SeriesKind::price),
                         doctest::Contains("non-positive price"), InputError);

    const auto headerless = dir / "nums.csv";
    write_file(headerless, "1,2\n3,4\n");
    CHECK_THROWS_AS(load_series_csv(headerless.string(), "Close", SeriesKind::price),
                    InputError); // name addressing needs a header
    CHECK_THROWS_AS(load_series_csv(headerless.string(), "5", SeriesKind::price),
                    InputError); // index out of range

    const auto empty = dir / "empty.csv";
    write_file(empty, "");
    CHECK_THROWS_AS(load_series_csv(empty.string(), "0", SeriesKind::price), InputError);
}

TEST_CASE("log returns and volatility") {
    Series prices;
    prices.kind = SeriesKind::price;
    prices.values = {100.0, 110.0, 121.0, 108.9};
    const Series r = log_returns(prices);
    REQUIRE(r.size() == 3);
    CHECK(r.values[0] == doctest::Approx(std::log(1.1)).epsilon(1e-15));
    CHECK(r.values[1] == doctest::Approx(std::log(1.1)).epsilon(1e-15));
    CHECK(r.values[2] == doctest::Approx(std::log(0.9)).epsilon(1e-14));
    CHECK(r.kind == SeriesKind::log_return);

    const Series v = volatility(r);
    CHECK(v.values[2] == doctest::Approx(-std::log(0.9)).epsilon(1e-14));
    CHECK(v.kind == SeriesKind::volatility);

    Series wrong = prices;
    wrong.kind = SeriesKind::generic_positive;
    CHECK_THROWS_AS(log_returns(wrong), ConfigError);
    CHECK_THROWS_AS(volatility(prices), ConfigError);
}

TEST_CASE("load_price_csv needs two rows") {
    const auto dir = make_temp_dir("series");
    const auto path = dir / "single.csv";
    write_file(path, "42.0\n");
    CHECK_THROWS_AS(load_price_csv(path.string(), "0"), InputError);
}

TEST_CASE("csv writer round-trips awkward doubles bit for bit") {
    Series s;
    s.kind = SeriesKind::generic_positive;
    s.values = {0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, 12345.678901234567};
    const auto dir = make_temp_dir("series");
    const auto path = dir / "roundtrip.csv";
    write_file(path, series_csv(s));
    const Series back = load_series_csv(path.string(), "value", SeriesKind::generic_positive);
    REQUIRE(back.size() == s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
        CHECK(back.values[i] == s.values[i]);
}

TEST_CASE("kind names round-trip") {
    for (auto kind : {SeriesKind::price, SeriesKind::log_return, SeriesKind::volatility,
                      SeriesKind::generic_positive})
        CHECK(series_kind_from_string(to_string(kind)) == kind);
    CHECK_THROWS_AS(series_kind_from_string("bogus"), ConfigError);
}

} // TEST_SUITE
