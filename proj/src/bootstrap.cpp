#include "vbpbb/bootstrap.hpp"

#include "vbpbb/error.hpp"
#include "vbpbb/parallel.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace vbpbb {

std::string_view to_string(ResampleMode mode) noexcept {
    return mode == ResampleMode::phasewise ? "phasewise" : "season-block";
}

std::optional<ResampleMode> parse_resample_mode(std::string_view text) noexcept {
    if (text == "phasewise") return ResampleMode::phasewise;
    if (text == "season-block") return ResampleMode::season_block;
    return std::nullopt;
}

namespace {

void check_period(std::size_t n, std::size_t period) {
    if (period == 0) {
        throw Error(ErrorKind::invalid_period, "period must be >= 1");
    }
    if (period > n) {
        throw Error(ErrorKind::insufficient_data,
                    fmt::format("period {} exceeds series length {}", period, n));
    }
}

/// 0-based phase index of the first observation.
std::size_t first_phase_index(const TimeSeries& series, std::size_t period) {
    return phase_of(series.t0(), period) - 1;
}

/// Phase-1 positions that start a complete cycle inside the series.
std::vector<std::size_t> cycle_starts(const PhasePartition& partition, std::size_t n) {
    std::vector<std::size_t> starts;
    const std::size_t p = partition.period();
    for (std::size_t s : partition.subset(1)) {
        if (s + p <= n) starts.push_back(s);
    }
    return starts;
}

void resample_into(const TimeSeries& series, const PhasePartition& partition, ResampleMode mode,
                   std::span<const std::size_t> starts, Rng& rng, std::span<double> out) {
    const auto x = series.values();
    const std::size_t n = x.size();
    const std::size_t p = partition.period();

    if (mode == ResampleMode::phasewise) {
        std::size_t phase = first_phase_index(series, p);
        for (std::size_t i = 0; i < n; ++i) {
            const auto subset = partition.subset(phase + 1);
            out[i] = x[subset[rng.uniform_below(subset.size())]];
            if (++phase == p) phase = 0;
        }
        return;
    }

    // Output positions before the first phase-1 position take the tail of a
    // drawn cycle, so every copied value keeps its phase.
    const std::size_t lead = (p - first_phase_index(series, p)) % p;
    std::size_t i = 0;
    if (lead > 0) {
        const std::size_t s = starts[rng.uniform_below(starts.size())];
        for (; i < std::min(lead, n); ++i) {
            out[i] = x[s + p - lead + i];
        }
    }
    while (i < n) {
        const std::size_t s = starts[rng.uniform_below(starts.size())];
        const std::size_t len = std::min(p, n - i);
        std::copy_n(x.begin() + static_cast<std::ptrdiff_t>(s), len,
                    out.begin() + static_cast<std::ptrdiff_t>(i));
        i += len;
    }
}

std::vector<std::size_t> checked_cycle_starts(const PhasePartition& partition, std::size_t n,
                                              ResampleMode mode) {
    if (mode != ResampleMode::season_block) return {};
    auto starts = cycle_starts(partition, n);
    if (starts.empty()) {
        throw Error(ErrorKind::insufficient_data,
                    fmt::format("season-block resampling needs a complete cycle of {} observations "
                                "starting at phase 1",
                                partition.period()));
    }
    return starts;
}

}  // namespace

PhasePartition phase_partition(const TimeSeries& series, std::size_t period) {
    check_period(series.size(), period);
    std::vector<std::vector<std::size_t>> subsets(period);
    for (auto& s : subsets) s.reserve(series.size() / period + 1);
    std::size_t phase = first_phase_index(series, period);
    for (std::size_t i = 0; i < series.size(); ++i) {
        subsets[phase].push_back(i);
        if (++phase == period) phase = 0;
    }
    return PhasePartition(std::move(subsets));
}

TimeSeries resample(const TimeSeries& series, const PhasePartition& partition, ResampleMode mode,
                    Rng& rng) {
    const auto starts = checked_cycle_starts(partition, series.size(), mode);
    std::vector<double> out(series.size());
    resample_into(series, partition, mode, starts, rng, out);
    return TimeSeries(series.t0(), std::move(out));
}

PeriodicProfile periodic_mean(const TimeSeries& series, std::size_t period) {
    check_period(series.size(), period);
    std::vector<double> sum(period, 0.0);
    std::vector<std::size_t> count(period, 0);
    std::size_t phase = first_phase_index(series, period);
    for (double v : series.values()) {
        sum[phase] += v;
        ++count[phase];
        if (++phase == period) phase = 0;
    }
    for (std::size_t j = 0; j < period; ++j) {
        sum[j] /= static_cast<double>(count[j]);
    }
    return PeriodicProfile(std::move(sum));
}

double quantile_sorted(std::span<const double> sorted, double q) {
    if (sorted.empty()) {
        throw Error(ErrorKind::insufficient_data, "quantile of an empty sample");
    }
    if (!(q >= 0.0 && q <= 1.0)) {
        throw Error(ErrorKind::invalid_parameter, fmt::format("quantile level {} outside [0, 1]", q));
    }
    const double pos = static_cast<double>(sorted.size() - 1) * q;
    const auto below = static_cast<std::size_t>(std::floor(pos));
    const double frac = pos - static_cast<double>(below);
    if (frac == 0.0 || below + 1 >= sorted.size() || sorted[below] == sorted[below + 1]) {
        return sorted[below];
    }
    return sorted[below] + frac * (sorted[below + 1] - sorted[below]);
}

BootstrapBand bootstrap_band(const TimeSeries& series, const BootstrapOptions& options) {
    const std::size_t p = options.period;
    const std::size_t n = series.size();
    const std::size_t b = options.resamples;
    if (b < 2) {
        throw Error(ErrorKind::invalid_parameter, "bootstrap needs at least 2 resamples");
    }
    if (!(options.level > 0.0 && options.level < 1.0)) {
        throw Error(ErrorKind::invalid_parameter,
                    fmt::format("confidence level must lie in (0, 1), got {}", options.level));
    }
    const auto partition = phase_partition(series, p);
    const auto starts = checked_cycle_starts(partition, n, options.mode);

    std::vector<double> inv_count(p);
    for (std::size_t j = 0; j < p; ++j) {
        inv_count[j] = 1.0 / static_cast<double>(partition.subset(j + 1).size());
    }
    const std::size_t phase0 = first_phase_index(series, p);

    // means[j * b + r]: mean of phase j + 1 in resample r.
    std::vector<double> means(p * b);
    parallel_for(b, options.threads, [&](std::size_t r) {
        Rng rng(options.seed, r);
        std::vector<double> draw(n);
        resample_into(series, partition, options.mode, starts, rng, draw);
        std::vector<double> sum(p, 0.0);
        std::size_t phase = phase0;
        for (double v : draw) {
            sum[phase] += v;
            if (++phase == p) phase = 0;
        }
        for (std::size_t j = 0; j < p; ++j) {
            means[j * b + r] = sum[j] * inv_count[j];
        }
    });

    const double q_lo = (1.0 - options.level) / 2.0;
    const double q_hi = (1.0 + options.level) / 2.0;
    std::vector<double> point(p), lower(p), upper(p);
    for (std::size_t j = 0; j < p; ++j) {
        std::span<double> column(means.data() + j * b, b);
        std::sort(column.begin(), column.end());
        point[j] = quantile_sorted(column, 0.5);
        lower[j] = quantile_sorted(column, q_lo);
        upper[j] = quantile_sorted(column, q_hi);
    }
    return BootstrapBand{PeriodicProfile(std::move(point)), PeriodicProfile(std::move(lower)),
                         PeriodicProfile(std::move(upper)), options.level, b};
}

std::string format_band(const BootstrapBand& band) {
    std::string out = "phase,point,lower,upper\n";
    for (std::size_t j = 1; j <= band.period(); ++j) {
        out += fmt::format("{},{},{},{}\n", j, format_real(band.point.at_phase(j)),
                           format_real(band.lower.at_phase(j)), format_real(band.upper.at_phase(j)));
    }
    return out;
}

}  // namespace vbpbb
