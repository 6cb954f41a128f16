#include "vbpbb/series.hpp"

#include "vbpbb/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <string_view>

#include <fmt/format.h>

namespace vbpbb {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::invalid_period: return "invalid-period";
        case ErrorKind::invalid_parameter: return "invalid-parameter";
        case ErrorKind::parse: return "parse";
        case ErrorKind::non_contiguous_time: return "non-contiguous-time";
        case ErrorKind::series_too_short: return "series-too-short";
        case ErrorKind::insufficient_data: return "insufficient-data";
        case ErrorKind::invalid_comparison: return "invalid-comparison";
        case ErrorKind::undefined_correlation: return "undefined-correlation";
        case ErrorKind::invalid_aggregation: return "invalid-aggregation";
        case ErrorKind::scenario_infeasible: return "scenario-infeasible";
    }
    return "unknown";
}

TimeSeries::TimeSeries(TimePoint t0, std::vector<double> values)
    : t0_(t0), values_(std::move(values)) {
    if (values_.empty()) {
        throw Error(ErrorKind::insufficient_data, "time series must hold at least one observation");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw Error(ErrorKind::parse,
                        fmt::format("non-finite value at t={}", t0_ + static_cast<TimePoint>(i)));
        }
    }
}

ComplexSeries::ComplexSeries(TimePoint t0, std::vector<std::complex<double>> values)
    : t0_(t0), values_(std::move(values)) {
    if (values_.empty()) {
        throw Error(ErrorKind::insufficient_data, "complex series must hold at least one observation");
    }
    for (const auto& z : values_) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw Error(ErrorKind::parse, "non-finite complex value");
        }
    }
}

PeriodicProfile::PeriodicProfile(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) {
        throw Error(ErrorKind::invalid_period, "periodic profile needs period >= 1");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) {
            throw Error(ErrorKind::parse, "non-finite value in periodic profile");
        }
    }
}

std::size_t phase_of(TimePoint t, std::size_t period) {
    if (period == 0) {
        throw Error(ErrorKind::invalid_period, "period must be >= 1");
    }
    const auto p = static_cast<TimePoint>(period);
    TimePoint r = (t - 1) % p;
    if (r < 0) {
        r += p;
    }
    return static_cast<std::size_t>(r) + 1;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

template <typename T>
T parse_number(std::string_view field, std::size_t line_no, const char* what) {
    field = trim(field);
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    T value{};
    const auto* first = field.data();
    const auto* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || field.empty()) {
        throw Error(ErrorKind::parse,
                    fmt::format("line {}: cannot parse {} '{}'", line_no, what, field));
    }
    return value;
}

}  // namespace

TimeSeries read_series(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    TimePoint t0 = 0;
    TimePoint expected = 0;
    std::vector<double> values;

    while (std::getline(in, line)) {
        ++line_no;
        const auto text = trim(line);
        if (text.empty() || text.front() == '#') {
            continue;
        }
        if (!have_header) {
            if (text != "t,value") {
                throw Error(ErrorKind::parse,
                            fmt::format("line {}: expected header 't,value'", line_no));
            }
            have_header = true;
            continue;
        }
        const auto comma = text.find(',');
        if (comma == std::string_view::npos || text.find(',', comma + 1) != std::string_view::npos) {
            throw Error(ErrorKind::parse, fmt::format("line {}: expected two fields", line_no));
        }
        const auto t = parse_number<TimePoint>(text.substr(0, comma), line_no, "time");
        const auto v = parse_number<double>(text.substr(comma + 1), line_no, "value");
        if (!std::isfinite(v)) {
            throw Error(ErrorKind::parse, fmt::format("line {}: non-finite value", line_no));
        }
        if (values.empty()) {
            t0 = t;
        } else if (t != expected) {
            throw Error(ErrorKind::non_contiguous_time,
                        fmt::format("line {}: expected t={} but found t={}", line_no, expected, t));
        }
        expected = t + 1;
        values.push_back(v);
    }
    if (!have_header) {
        throw Error(ErrorKind::parse, "missing 't,value' header");
    }
    if (values.empty()) {
        throw Error(ErrorKind::insufficient_data, "series has no observations");
    }
    return TimeSeries(t0, std::move(values));
}

TimeSeries read_series_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::parse, fmt::format("cannot open '{}'", path));
    }
    return read_series(in);
}

std::string format_real(double value) {
    return fmt::format("{}", value);
}

std::string format_series(const TimeSeries& series) {
    std::string out = "t,value\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        out += fmt::format("{},{}\n", series.time_at(i), format_real(series[i]));
    }
    return out;
}

void write_series(std::ostream& out, const TimeSeries& series) {
    out << format_series(series);
}

}  // namespace vbpbb
