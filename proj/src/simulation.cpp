#include "vbpbb/simulation.hpp"

#include "vbpbb/error.hpp"
#include "vbpbb/parallel.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace vbpbb {

namespace {

// Key-path tags separating the random streams of one repetition.
constexpr std::uint64_t kNoiseStream = 1;
constexpr std::uint64_t kPbbStream = 2;
constexpr std::uint64_t kVbpbbStream = 3;

BootstrapOptions bootstrap_options(const Scenario& s, Seed seed) {
    BootstrapOptions options;
    options.period = s.period;
    options.resamples = s.resamples;
    options.level = s.level;
    options.mode = s.mode;
    options.seed = seed;
    options.threads = 1;
    return options;
}

}  // namespace

std::string describe(const Scenario& s) {
    return fmt::format("p={} var={} m={} k={} {}{}{}", s.period, s.noise_variance, s.kzft_m,
                       s.kzft_k, to_string(s.mode), s.null_component ? " null" : "",
                       s.unit_gain ? " unit-gain" : "");
}

void validate(const Scenario& s) {
    auto bad = [&](const std::string& what) {
        throw Error(ErrorKind::invalid_parameter, fmt::format("scenario {}: {}", describe(s), what));
    };
    if (s.period == 0) bad("period must be >= 1");
    if (!(std::isfinite(s.noise_variance) && s.noise_variance >= 0.0)) bad("noise variance must be >= 0");
    if (s.length == 0) bad("length must be >= 1");
    if (s.resamples < 2) bad("resamples must be >= 2");
    if (s.repetitions == 0) bad("repetitions must be >= 1");
    if (s.kzft_m == 0 || s.kzft_m % 2 == 0) bad("kzft_m must be a positive odd integer");
    if (s.kzft_k == 0) bad("kzft_k must be >= 1");
    if (!(s.level > 0.0 && s.level < 1.0)) bad("level must lie in (0, 1)");

    const std::size_t h = s.kzft_k * (s.kzft_m - 1) / 2;
    if (s.length <= 2 * h || s.length - 2 * h < s.period) {
        throw Error(ErrorKind::scenario_infeasible,
                    fmt::format("scenario {}: {} observations leave fewer than one period after "
                                "dropping {} filter edge points",
                                describe(s), s.length, 2 * h));
    }
}

PeriodicProfile true_profile(std::size_t period) {
    if (period == 0) {
        throw Error(ErrorKind::invalid_period, "period must be >= 1");
    }
    std::vector<double> values(period);
    const double p = static_cast<double>(period);
    for (std::size_t j = 1; j <= period; ++j) {
        values[j - 1] = std::sin(2.0 * std::numbers::pi * static_cast<double>(j) / p);
    }
    return PeriodicProfile(std::move(values));
}

TimeSeries simulate_series(const Scenario& s, std::size_t repetition) {
    Rng rng(derive_seed(s.master_seed, {kNoiseStream, repetition}), 0);
    const double sigma = std::sqrt(s.noise_variance);
    const double p = static_cast<double>(s.period);
    std::vector<double> values(s.length);
    for (std::size_t i = 0; i < s.length; ++i) {
        const double t = static_cast<double>(i + 1);
        const double signal = s.null_component ? 0.0 : std::sin(2.0 * std::numbers::pi * t / p);
        values[i] = signal + sigma * rng.standard_normal();
    }
    return TimeSeries(1, std::move(values));
}

TimeSeries separate_component(const TimeSeries& series, const Scenario& s) {
    const auto band = s.band();
    const auto z = kzft_filter(series, band, EdgePolicy::truncate);
    return s.unit_gain ? bandpass_reconstruct_unit_gain(z, band) : bandpass_reconstruct(z);
}

RepetitionBands repetition_bands(const Scenario& s, std::size_t repetition) {
    validate(s);
    // One simulated series feeds both arms.
    auto series = simulate_series(s, repetition);
    auto pbb = bootstrap_band(series, bootstrap_options(s, derive_seed(s.master_seed, {kPbbStream, repetition})));
    const auto filtered = separate_component(series, s);
    auto vbpbb = bootstrap_band(filtered,
                                bootstrap_options(s, derive_seed(s.master_seed, {kVbpbbStream, repetition})));
    return RepetitionBands{std::move(series), std::move(pbb), std::move(vbpbb)};
}

ComparisonRecord run_repetition(const Scenario& s, std::size_t repetition) {
    const auto bands = repetition_bands(s, repetition);
    std::optional<PeriodicProfile> truth;
    if (!s.null_component) truth = true_profile(s.period);
    return compare(truth, bands.pbb, bands.vbpbb);
}

ScenarioReport run_scenario(const Scenario& s, std::size_t threads) {
    validate(s);
    std::vector<ComparisonRecord> records(s.repetitions);
    parallel_for(s.repetitions, threads,
                 [&](std::size_t rep) { records[rep] = run_repetition(s, rep); });
    auto summary = aggregate(records);
    return ScenarioReport{s, summary, std::move(records)};
}

std::vector<ScenarioReport> run_study(std::span<const Scenario> grid, std::size_t threads) {
    if (grid.empty()) {
        throw Error(ErrorKind::invalid_parameter, "study grid is empty");
    }
    for (const auto& s : grid) validate(s);
    std::vector<ScenarioReport> reports;
    reports.reserve(grid.size());
    for (const auto& s : grid) reports.push_back(run_scenario(s, threads));
    return reports;
}

std::vector<Scenario> paper_grid(StudyScale scale, Seed seed, bool m5_reruns) {
    auto make = [&](std::size_t period, double variance, bool null_component, std::size_t m) {
        Scenario s;
        s.period = period;
        s.noise_variance = variance;
        s.null_component = null_component;
        s.kzft_m = m;
        s.master_seed = seed;
        if (scale == StudyScale::full) {
            s.resamples = 1000;
            s.repetitions = 1000;
        }
        return s;
    };
    std::vector<Scenario> grid;
    for (bool null_component : {false, true}) {
        for (std::size_t period : {10, 25, 50, 100, 250}) {
            for (double variance : {2.0, 5.0, 10.0}) {
                grid.push_back(make(period, variance, null_component, 11));
            }
        }
    }
    if (m5_reruns) {
        for (std::size_t period : {10, 100, 250}) {
            for (double variance : {2.0, 5.0, 10.0}) {
                grid.push_back(make(period, variance, false, 5));
            }
        }
    }
    return grid;
}

}  // namespace vbpbb
