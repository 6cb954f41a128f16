#pragma once

#include "vbpbb/bootstrap.hpp"
#include "vbpbb/series.hpp"

#include <optional>
#include <span>

namespace vbpbb {

/// One repetition's scores for the plain (PBB) and filtered (VBPBB) bands.
struct ComparisonRecord {
    double width_pbb = 0.0;
    double width_vbpbb = 0.0;
    double outside_pbb = 0.0;
    double outside_vbpbb = 0.0;
    std::optional<double> rsq_pbb;  ///< absent when there is no true component
    std::optional<double> rsq_vbpbb;

    /// width_pbb / width_vbpbb. Two zero widths give 1; a zero VBPBB width
    /// against a positive PBB width gives +infinity.
    [[nodiscard]] double width_ratio() const noexcept;

    friend bool operator==(const ComparisonRecord&, const ComparisonRecord&) = default;
};

/// Medians across repetitions of one scenario.
struct ScenarioSummary {
    std::size_t repetitions = 0;
    double width_ratio = 0.0;
    double median_width_pbb = 0.0;
    double median_width_vbpbb = 0.0;
    /// Median of (rsq_vbpbb - rsq_pbb) * 100, in percentage points.
    std::optional<double> rsq_difference;
    /// Median of outside_vbpbb - outside_pbb.
    double outside_difference = 0.0;

    friend bool operator==(const ScenarioSummary&, const ScenarioSummary&) = default;
};

/// Mean over phases of upper - lower.
[[nodiscard]] double band_width(const BootstrapBand& band);

/// Share of phases whose true value lies strictly outside [lower, upper].
[[nodiscard]] double fraction_outside(const PeriodicProfile& truth, const BootstrapBand& band);

/// Squared Pearson correlation. Throws Error(undefined_correlation) if either
/// profile has zero variance.
[[nodiscard]] double r_squared(const PeriodicProfile& a, const PeriodicProfile& b);

/// Pass std::nullopt as truth for null-component scenarios.
[[nodiscard]] ComparisonRecord compare(const std::optional<PeriodicProfile>& truth,
                                       const BootstrapBand& band_pbb,
                                       const BootstrapBand& band_vbpbb);

[[nodiscard]] ScenarioSummary aggregate(std::span<const ComparisonRecord> records);

/// Median by linear order-statistic interpolation; copies and sorts.
[[nodiscard]] double median(std::span<const double> values);

}  // namespace vbpbb
