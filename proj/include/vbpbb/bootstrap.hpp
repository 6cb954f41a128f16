#pragma once

#include "vbpbb/rng.hpp"
#include "vbpbb/series.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace vbpbb {

/// The p exclusive and exhaustive phase subsets of a series.
class PhasePartition {
public:
    [[nodiscard]] std::size_t period() const noexcept { return subsets_.size(); }
    /// Ascending 0-based positions whose time coordinate has phase j (1..p).
    [[nodiscard]] std::span<const std::size_t> subset(std::size_t phase) const {
        return subsets_.at(phase - 1);
    }

private:
    friend PhasePartition phase_partition(const TimeSeries& series, std::size_t period);
    explicit PhasePartition(std::vector<std::vector<std::size_t>> subsets)
        : subsets_(std::move(subsets)) {}

    std::vector<std::vector<std::size_t>> subsets_;
};

/// How a resample is assembled.
///  - phasewise: every output position draws one observation of its own phase.
///  - season_block: whole cycles of p consecutive observations, aligned on phase 1.
enum class ResampleMode { phasewise, season_block };

[[nodiscard]] std::string_view to_string(ResampleMode mode) noexcept;
/// Accepts "phasewise" and "season-block"; nullopt otherwise.
[[nodiscard]] std::optional<ResampleMode> parse_resample_mode(std::string_view text) noexcept;

/// Throws Error(invalid_period) for p == 0, Error(insufficient_data) for p > n.
[[nodiscard]] PhasePartition phase_partition(const TimeSeries& series, std::size_t period);

/// One bootstrap resample with the same t0 and length as `series`.
/// season_block throws Error(insufficient_data) if the source has no complete cycle.
[[nodiscard]] TimeSeries resample(const TimeSeries& series, const PhasePartition& partition,
                                  ResampleMode mode, Rng& rng);

/// Per-phase arithmetic mean; requires n >= p.
[[nodiscard]] PeriodicProfile periodic_mean(const TimeSeries& series, std::size_t period);

/// Sample quantile by linear interpolation between order statistics at rank
/// (n - 1) q + 1 (Hyndman-Fan type 7). `sorted` must be ascending and nonempty.
[[nodiscard]] double quantile_sorted(std::span<const double> sorted, double q);

struct BootstrapBand {
    PeriodicProfile point;  ///< per-phase median of resample means
    PeriodicProfile lower;
    PeriodicProfile upper;
    double level;
    std::size_t resamples;

    [[nodiscard]] std::size_t period() const noexcept { return point.period(); }
};

struct BootstrapOptions {
    std::size_t period = 1;
    std::size_t resamples = 1000;
    double level = 0.95;
    ResampleMode mode = ResampleMode::phasewise;
    Seed seed = 0;
    std::size_t threads = 1;
};

/**
 * Periodic-mean confidence band over B resamples.
 *
 * Resample r draws from Rng(seed, r), so the band does not depend on the
 * thread count. Only the B x p matrix of resample means is kept in memory.
 */
[[nodiscard]] BootstrapBand bootstrap_band(const TimeSeries& series, const BootstrapOptions& options);

/// `phase,point,lower,upper` CSV.
[[nodiscard]] std::string format_band(const BootstrapBand& band);

}  // namespace vbpbb
