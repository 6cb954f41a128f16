#include "vbpbb/kz_filter.hpp"

#include "vbpbb/error.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>

#include <fmt/format.h>

namespace vbpbb {

namespace {

void check_window(std::size_t m, std::size_t k) {
    if (m == 0 || m % 2 == 0) {
        throw Error(ErrorKind::invalid_parameter,
                    fmt::format("window length m must be a positive odd integer, got {}", m));
    }
    if (k == 0) {
        throw Error(ErrorKind::invalid_parameter, "iteration count k must be >= 1");
    }
}

void check_band(const BandSpec& band) {
    check_window(band.m, band.k);
    if (!(band.nu >= 0.0 && band.nu <= 0.5)) {
        throw Error(ErrorKind::invalid_parameter,
                    fmt::format("center frequency nu must lie in [0, 1/2], got {}", band.nu));
    }
}

/// Coefficients of (1 + z + ... + z^(m-1))^k, or nullopt on uint64 overflow.
std::optional<std::vector<std::uint64_t>> window_polynomial(std::size_t m, std::size_t k) {
    std::vector<std::uint64_t> coef{1};
    for (std::size_t iter = 0; iter < k; ++iter) {
        std::vector<std::uint64_t> next(coef.size() + m - 1, 0);
        // Each output is a sliding sum of m consecutive input coefficients.
        std::uint64_t running = 0;
        for (std::size_t r = 0; r < next.size(); ++r) {
            if (r < coef.size() && __builtin_add_overflow(running, coef[r], &running)) {
                return std::nullopt;
            }
            if (r >= m) {
                running -= coef[r - m];
            }
            next[r] = running;
        }
        coef = std::move(next);
    }
    return coef;
}

std::optional<std::uint64_t> checked_power(std::uint64_t base, std::size_t exponent) {
    std::uint64_t result = 1;
    for (std::size_t i = 0; i < exponent; ++i) {
        if (__builtin_mul_overflow(result, base, &result)) {
            return std::nullopt;
        }
    }
    return result;
}

/// Floating-point fallback for kernels whose integer coefficients exceed 64 bits.
std::vector<double> iterated_uniform(std::size_t m, std::size_t k) {
    std::vector<double> w{1.0};
    const double inv_m = 1.0 / static_cast<double>(m);
    for (std::size_t iter = 0; iter < k; ++iter) {
        std::vector<double> next(w.size() + m - 1, 0.0);
        for (std::size_t i = 0; i < w.size(); ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                next[i + j] += w[i] * inv_m;
            }
        }
        w = std::move(next);
    }
    return w;
}

template <typename Weight, typename Out>
std::vector<Out> convolve(std::span<const double> x, std::span<const Weight> w,
                          std::span<const double> mass, EdgePolicy edge) {
    const std::size_t n = x.size();
    const std::size_t span = w.size();
    const std::size_t h = (span - 1) / 2;
    std::vector<Out> out;
    if (edge == EdgePolicy::truncate) {
        out.resize(n - 2 * h);
        for (std::size_t j = 0; j < out.size(); ++j) {
            Out acc{};
            for (std::size_t q = 0; q < span; ++q) {
                acc += w[q] * x[j + q];
            }
            out[j] = acc;
        }
        return out;
    }
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        // Input index for weight q is i - h + q; clip q to keep it inside [0, n).
        const std::size_t q_lo = i < h ? h - i : 0;
        const std::size_t q_hi = std::min(span, n + h - i);
        Out acc{};
        double total = 0.0;
        for (std::size_t q = q_lo; q < q_hi; ++q) {
            acc += w[q] * x[i + q - h];
            total += mass[q];
        }
        out[i] = acc / total;
    }
    return out;
}

void check_length(std::size_t n, std::size_t h, EdgePolicy edge) {
    if (edge == EdgePolicy::truncate && n <= 2 * h) {
        throw Error(ErrorKind::series_too_short,
                    fmt::format("series of length {} is too short for a filter of half support {}; "
                                "need at least {} observations",
                                n, h, 2 * h + 1));
    }
}

}  // namespace

FilterKernel kz_kernel(std::size_t m, std::size_t k) {
    check_window(m, k);
    const auto coef = window_polynomial(m, k);
    const auto denom = checked_power(m, k);
    if (!coef || !denom) {
        return FilterKernel(m, k, iterated_uniform(m, k));
    }
    std::vector<double> weights(coef->size());
    const auto d = static_cast<double>(*denom);
    for (std::size_t i = 0; i < weights.size(); ++i) {
        weights[i] = static_cast<double>((*coef)[i]) / d;
    }
    return FilterKernel(m, k, std::move(weights));
}

TimeSeries kz_filter(const TimeSeries& series, const FilterKernel& kernel, EdgePolicy edge) {
    const std::size_t h = kernel.half_support();
    check_length(series.size(), h, edge);
    auto out = convolve<double, double>(series.values(), kernel.weights(), kernel.weights(), edge);
    const TimePoint t0 = edge == EdgePolicy::truncate ? series.t0() + static_cast<TimePoint>(h)
                                                      : series.t0();
    return TimeSeries(t0, std::move(out));
}

ComplexSeries kzft_filter(const TimeSeries& series, const BandSpec& band, EdgePolicy edge) {
    check_band(band);
    const auto kernel = kz_kernel(band.m, band.k);
    const std::size_t h = kernel.half_support();
    check_length(series.size(), h, edge);

    const auto w = kernel.weights();
    std::vector<std::complex<double>> modulated(w.size());
    for (std::size_t q = 0; q < w.size(); ++q) {
        const double u = static_cast<double>(q) - static_cast<double>(h);
        modulated[q] = w[q] * std::polar(1.0, -2.0 * std::numbers::pi * band.nu * u);
    }
    auto out = convolve<std::complex<double>, std::complex<double>>(
        series.values(), std::span<const std::complex<double>>(modulated), w, edge);
    const TimePoint t0 = edge == EdgePolicy::truncate ? series.t0() + static_cast<TimePoint>(h)
                                                      : series.t0();
    return ComplexSeries(t0, std::move(out));
}

TimeSeries bandpass_reconstruct(const ComplexSeries& z) {
    std::vector<double> out(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        out[i] = 2.0 * z[i].real();
    }
    return TimeSeries(z.t0(), std::move(out));
}

double center_gain(const BandSpec& band) {
    check_band(band);
    return 1.0 + amplitude_response_kz(2.0 * band.nu, band.m, band.k);
}

TimeSeries bandpass_reconstruct_unit_gain(const ComplexSeries& z, const BandSpec& band) {
    const double gain = center_gain(band);
    std::vector<double> out(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        out[i] = 2.0 * z[i].real() / gain;
    }
    return TimeSeries(z.t0(), std::move(out));
}

double amplitude_response_kz(double lambda, std::size_t m, std::size_t k) {
    if (m == 0 || k == 0) {
        throw Error(ErrorKind::invalid_parameter, "m and k must be >= 1");
    }
    const double pi = std::numbers::pi;
    const double md = static_cast<double>(m);
    const double s = std::sin(pi * lambda);
    double ratio;
    if (std::abs(s) < 1e-12) {
        // L'Hopital at integer lambda: cos(pi m lambda) / cos(pi lambda).
        ratio = std::cos(pi * md * lambda) / std::cos(pi * lambda);
    } else {
        ratio = std::sin(pi * md * lambda) / (md * s);
    }
    double out = 1.0;
    for (std::size_t i = 0; i < k; ++i) out *= ratio;
    return out;
}

double energy_transfer_kz(double lambda, std::size_t m, std::size_t k) {
    if (m == 0 || k == 0) {
        throw Error(ErrorKind::invalid_parameter, "m and k must be >= 1");
    }
    if (std::abs(std::sin(std::numbers::pi * lambda)) < 1e-12) {
        return 1.0;
    }
    const double a = amplitude_response_kz(lambda, m, k);
    return a * a;
}

double energy_transfer_kzft(double lambda, const BandSpec& band) {
    return energy_transfer_kz(lambda - band.nu, band.m, band.k);
}

double cutoff_frequency(std::size_t m, std::size_t k, double alpha, CutoffMethod method) {
    check_window(m, k);
    if (m < 3) {
        throw Error(ErrorKind::invalid_parameter, "cutoff frequency needs m >= 3");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw Error(ErrorKind::invalid_parameter,
                    fmt::format("power ratio alpha must lie in (0, 1), got {}", alpha));
    }
    const double md = static_cast<double>(m);
    if (method == CutoffMethod::closed_form) {
        const double root = std::pow(alpha, 1.0 / (2.0 * static_cast<double>(k)));
        return std::sqrt(6.0) / std::numbers::pi * std::sqrt((1.0 - root) / (md * md - root));
    }
    // Energy falls monotonically from 1 at 0 to 0 at the first null 1/m.
    double lo = 0.0;
    double hi = 1.0 / md;
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (energy_transfer_kz(mid, m, k) > alpha) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::vector<TransferPoint> transfer_curve(const BandSpec& band, std::size_t grid) {
    check_band(band);
    if (grid < 2) {
        throw Error(ErrorKind::invalid_parameter, "transfer curve needs at least 2 grid points");
    }
    std::vector<TransferPoint> curve(grid);
    const double step = 0.5 / static_cast<double>(grid - 1);
    for (std::size_t i = 0; i < grid; ++i) {
        const double lambda = i + 1 == grid ? 0.5 : static_cast<double>(i) * step;
        curve[i] = {lambda, energy_transfer_kzft(lambda, band)};
    }
    return curve;
}

}  // namespace vbpbb
