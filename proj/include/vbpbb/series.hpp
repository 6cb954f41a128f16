#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace vbpbb {

/// Signed integer time coordinate. Phase arithmetic depends on absolute time,
/// so every series carries the time of its first observation.
using TimePoint = std::int64_t;

/**
 * Real-valued series observed at consecutive integer times t0, t0+1, ...
 *
 * Construction validates that the series is nonempty and every value is
 * finite; instances are immutable afterwards.
 */
class TimeSeries {
public:
    TimeSeries(TimePoint t0, std::vector<double> values);

    [[nodiscard]] TimePoint t0() const noexcept { return t0_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] double operator[](std::size_t i) const noexcept { return values_[i]; }
    /// Time coordinate of observation i (0-based).
    [[nodiscard]] TimePoint time_at(std::size_t i) const noexcept {
        return t0_ + static_cast<TimePoint>(i);
    }

    friend bool operator==(const TimeSeries&, const TimeSeries&) = default;

private:
    TimePoint t0_;
    std::vector<double> values_;
};

/// Complex-valued counterpart of TimeSeries, produced by the KZFT filter.
class ComplexSeries {
public:
    ComplexSeries(TimePoint t0, std::vector<std::complex<double>> values);

    [[nodiscard]] TimePoint t0() const noexcept { return t0_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] std::span<const std::complex<double>> values() const noexcept { return values_; }
    [[nodiscard]] std::complex<double> operator[](std::size_t i) const noexcept { return values_[i]; }

    friend bool operator==(const ComplexSeries&, const ComplexSeries&) = default;

private:
    TimePoint t0_;
    std::vector<std::complex<double>> values_;
};

/// One value per phase 1..p. Index with phase - 1.
class PeriodicProfile {
public:
    explicit PeriodicProfile(std::vector<double> values);

    [[nodiscard]] std::size_t period() const noexcept { return values_.size(); }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    /// Value at phase j in 1..period().
    [[nodiscard]] double at_phase(std::size_t phase) const { return values_.at(phase - 1); }

    friend bool operator==(const PeriodicProfile&, const PeriodicProfile&) = default;

private:
    std::vector<double> values_;
};

/// Phase of time t for period p: ((t - 1) mod p) + 1, so t = 1 is phase 1.
/// Throws Error(invalid_period) when p == 0.
[[nodiscard]] std::size_t phase_of(TimePoint t, std::size_t period);

/// Parses the `t,value` CSV form. Lines starting with '#' are metadata and skipped.
[[nodiscard]] TimeSeries read_series(std::istream& in);
[[nodiscard]] TimeSeries read_series_file(const std::string& path);

/// Writes the `t,value` CSV form with 17 significant digits (lossless for doubles).
void write_series(std::ostream& out, const TimeSeries& series);
[[nodiscard]] std::string format_series(const TimeSeries& series);

/// Shortest text that reads back to the same double; shared by every CSV writer.
[[nodiscard]] std::string format_real(double value);

}  // namespace vbpbb
