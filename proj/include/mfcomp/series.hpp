#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mfcomp {

enum class SeriesKind { price, log_return, volatility, generic_positive };

std::string to_string(SeriesKind kind);
SeriesKind series_kind_from_string(const std::string& name);

// Where a generated series came from: the RNG seed (when known to the caller)
// and a short human-readable recipe.
struct SeedProvenance {
    std::optional<std::uint64_t> seed;
    std::string recipe;
};

struct Series {
    std::vector<double> values;
    SeriesKind kind = SeriesKind::generic_positive;
    std::string label;
    std::optional<SeedProvenance> provenance;

    std::size_t size() const { return values.size(); }
    bool empty() const { return values.empty(); }
};

// Loads one numeric column from a CSV file. `column` is either a 0-based
// index ("0", "3") or a header name ("Close"). A header row is detected by
// attempting to parse the first row; when the column is addressed by name a
// header row is required. Values must be finite and satisfy the domain of
// `kind` (prices strictly positive, volatilities non-negative).
Series load_series_csv(const std::string& path, const std::string& column, SeriesKind kind);

// load_series_csv specialized to daily closing prices; requires at least two
// rows so that returns exist.
Series load_price_csv(const std::string& path, const std::string& column);

// r_t = ln P_t - ln P_{t-1}; the result is one element shorter.
Series log_returns(const Series& prices);

// Magnitude of the log-returns, the volatility proxy used throughout.
Series volatility(const Series& returns);

} // namespace mfcomp
