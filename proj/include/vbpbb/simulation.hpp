#pragma once

#include "vbpbb/bootstrap.hpp"
#include "vbpbb/kz_filter.hpp"
#include "vbpbb/metrics.hpp"
#include "vbpbb/rng.hpp"
#include "vbpbb/series.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace vbpbb {

/**
 * One cell of the simulation study: a unit sine of period p (or nothing, for
 * the null component) plus iid Gaussian noise, scored by PBB and VBPBB.
 *
 * Defaults are the desk scale (B = 500, R = 100). The full study uses
 * B = R = 1000.
 */
struct Scenario {
    std::size_t period = 50;
    double noise_variance = 10.0;
    std::size_t length = 1000;
    std::size_t resamples = 500;
    std::size_t repetitions = 100;
    std::size_t kzft_m = 11;
    std::size_t kzft_k = 1;
    double level = 0.95;
    ResampleMode mode = ResampleMode::phasewise;
    bool null_component = false;
    /// Divide the reconstructed VBPBB series by its gain at the center frequency.
    bool unit_gain = false;
    Seed master_seed = 0;

    [[nodiscard]] BandSpec band() const noexcept {
        return BandSpec{1.0 / static_cast<double>(period), kzft_m, kzft_k};
    }

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Short human-readable identity, e.g. "p=50 var=10 m=11 k=1 phasewise".
[[nodiscard]] std::string describe(const Scenario& scenario);

/// Throws Error(invalid_parameter) for malformed fields and
/// Error(scenario_infeasible) when the filtered series is shorter than one period.
void validate(const Scenario& scenario);

struct ScenarioReport {
    Scenario scenario;
    ScenarioSummary summary;
    std::vector<ComparisonRecord> records;  ///< indexed by repetition
};

/// sin(2 pi j / p) for phases j = 1..p.
[[nodiscard]] PeriodicProfile true_profile(std::size_t period);

/// X(t) = s(t) + sigma Z(t), t = 1..n, with Z drawn from a stream keyed by
/// (master_seed, repetition).
[[nodiscard]] TimeSeries simulate_series(const Scenario& scenario, std::size_t repetition);

/// KZFT at nu = 1/p, truncated edges, real reconstruction.
[[nodiscard]] TimeSeries separate_component(const TimeSeries& series, const Scenario& scenario);

struct RepetitionBands {
    TimeSeries series;
    BootstrapBand pbb;
    BootstrapBand vbpbb;
};

/// Both arms of one repetition over one simulated series.
[[nodiscard]] RepetitionBands repetition_bands(const Scenario& scenario, std::size_t repetition);

[[nodiscard]] ComparisonRecord run_repetition(const Scenario& scenario, std::size_t repetition);

/// Runs repetitions 0..R-1 on up to `threads` workers; the report does not
/// depend on the thread count.
[[nodiscard]] ScenarioReport run_scenario(const Scenario& scenario, std::size_t threads = 1);

/// Reports in grid order.
[[nodiscard]] std::vector<ScenarioReport> run_study(std::span<const Scenario> grid,
                                                    std::size_t threads = 1);

enum class StudyScale { desk, full };

/// Five periods x three noise variances x {component, null}, at m = 11, k = 1.
/// With `m5_reruns`, adds the m = 5 reruns of the component scenarios at
/// periods 10, 100 and 250.
[[nodiscard]] std::vector<Scenario> paper_grid(StudyScale scale, Seed seed, bool m5_reruns = false);

}  // namespace vbpbb
