#include "mfcomp/series.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mfcomp/errors.hpp"

namespace mfcomp {

std::string to_string(SeriesKind kind) {
    switch (kind) {
    case SeriesKind::price: return "price";
    case SeriesKind::log_return: return "log_return";
    case SeriesKind::volatility: return "volatility";
    case SeriesKind::generic_positive: return "generic_positive";
    }
    return "unknown";
}

SeriesKind series_kind_from_string(const std::string& name) {
    if (name == "price") return SeriesKind::price;
    if (name == "log_return") return SeriesKind::log_return;
    if (name == "volatility") return SeriesKind::volatility;
    if (name == "generic_positive") return SeriesKind::generic_positive;
    throw ConfigError("unknown series kind: " + name);
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
        --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ','))
        fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',')
        fields.emplace_back();
    return fields;
}

bool parse_double(const std::string& token, double& out) {
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last && !token.empty();
}

bool parse_index(const std::string& token, std::size_t& out) {
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last && !token.empty();
}

void check_domain(double value, SeriesKind kind, std::size_t row, const std::string& path) {
    if (!std::isfinite(value))
        throw InputError(path + ": non-finite value at row " + std::to_string(row));
    switch (kind) {
    case SeriesKind::price:
        if (value <= 0.0)
            throw InputError(path + ": non-positive price at row " + std::to_string(row));
        break;
    case SeriesKind::volatility:
    case SeriesKind::generic_positive:
        if (value < 0.0)
            throw InputError(path + ": negative value at row " + std::to_string(row));
        break;
    case SeriesKind::log_return:
        break;
    }
}

} // namespace

Series load_series_csv(const std::string& path, const std::string& column, SeriesKind kind) {
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open input file: " + path);

    std::size_t column_index = 0;
    const bool by_index = parse_index(column, column_index);

    Series series;
    series.kind = kind;
    series.label = path + ":" + column;

    std::string line;
    std::size_t row = 0;
    bool header_checked = false;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (trim(line).empty())
            continue;
        const std::vector<std::string> fields = split_csv_row(line);

        if (!header_checked) {
            header_checked = true;
            if (by_index) {
                if (column_index >= fields.size())
                    throw InputError(path + ": row 1 has " + std::to_string(fields.size()) +
                                     " columns, need index " + column);
                double probe = 0.0;
                if (!parse_double(fields[column_index], probe))
                    continue; // header row
            } else {
                bool found = false;
                for (std::size_t i = 0; i < fields.size(); ++i) {
                    if (fields[i] == column) {
                        column_index = i;
                        found = true;
                        break;
                    }
                }
                if (!found)
                    throw InputError(path + ": column '" + column + "' not found in header");
                continue;
            }
        }

        if (column_index >= fields.size())
            throw InputError(path + ": row " + std::to_string(row) + " has only " +
                             std::to_string(fields.size()) + " columns");
        double value = 0.0;
        if (!parse_double(fields[column_index], value))
            throw InputError(path + ": non-numeric value '" + fields[column_index] +
                             "' at row " + std::to_string(row));
        check_domain(value, kind, row, path);
        series.values.push_back(value);
    }

    if (series.values.empty())
        throw InputError(path + ": no data rows");
    return series;
}

Series load_price_csv(const std::string& path, const std::string& column) {
    Series series = load_series_csv(path, column, SeriesKind::price);
    if (series.size() < 2)
        throw InputError(path + ": need at least 2 prices to form returns");
    return series;
}

Series log_returns(const Series& prices) {
    if (prices.kind != SeriesKind::price)
        throw ConfigError("log_returns: input must be a price series");
    if (prices.size() < 2)
        throw ConfigError("log_returns: need at least 2 prices");

    Series out;
    out.kind = SeriesKind::log_return;
    out.label = "log_returns(" + prices.label + ")";
    out.values.resize(prices.size() - 1);
    for (std::size_t t = 1; t < prices.size(); ++t) {
        const double p0 = prices.values[t - 1];
        const double p1 = prices.values[t];
        if (p0 <= 0.0 || p1 <= 0.0)
            throw InputError("log_returns: non-positive price encountered");
        out.values[t - 1] = std::log(p1) - std::log(p0);
    }
    return out;
}

Series volatility(const Series& returns) {
    if (returns.kind != SeriesKind::log_return)
        throw ConfigError("volatility: input must be a log-return series");
    Series out;
    out.kind = SeriesKind::volatility;
    out.label = "volatility(" + returns.label + ")";
    out.values.resize(returns.size());
    for (std::size_t i = 0; i < returns.size(); ++i)
        out.values[i] = std::fabs(returns.values[i]);
    return out;
}

} // namespace mfcomp
