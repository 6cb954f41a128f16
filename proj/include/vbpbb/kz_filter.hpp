#pragma once

#include "vbpbb/series.hpp"

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace vbpbb {

/**
 * Normalized Kolmogorov-Zurbenko kernel: the k-fold self-convolution of the
 * length-m uniform window. The weight at offset u in [-h, h] is a_u / m^k,
 * where a_u are the coefficients of (1 + z + ... + z^(m-1))^k and
 * h = k(m-1)/2 is the half support.
 */
class FilterKernel {
public:
    [[nodiscard]] std::size_t window() const noexcept { return window_; }
    [[nodiscard]] std::size_t iterations() const noexcept { return iterations_; }
    [[nodiscard]] std::size_t half_support() const noexcept { return (weights_.size() - 1) / 2; }
    /// Weights ordered from offset -h to +h.
    [[nodiscard]] std::span<const double> weights() const noexcept { return weights_; }
    /// Weight at signed offset u; requires |u| <= h.
    [[nodiscard]] double weight(std::ptrdiff_t offset) const {
        return weights_.at(static_cast<std::size_t>(offset + static_cast<std::ptrdiff_t>(half_support())));
    }

private:
    friend FilterKernel kz_kernel(std::size_t m, std::size_t k);
    FilterKernel(std::size_t m, std::size_t k, std::vector<double> weights)
        : window_(m), iterations_(k), weights_(std::move(weights)) {}

    std::size_t window_;
    std::size_t iterations_;
    std::vector<double> weights_;
};

/// Center frequency (cycles per time unit, in [0, 1/2]) plus the KZ window parameters.
struct BandSpec {
    double nu = 0.0;
    std::size_t m = 11;
    std::size_t k = 1;
};

/// What to do at the ends of the series where the kernel overhangs the data.
enum class EdgePolicy {
    truncate,     ///< drop h points at each end; output keeps its original time coordinates
    renormalize,  ///< keep full length; rescale the available weights to unit mass
};

/// Builds the KZ kernel by exact integer polynomial expansion followed by one
/// division by m^k. Requires m odd and >= 1, k >= 1.
[[nodiscard]] FilterKernel kz_kernel(std::size_t m, std::size_t k);

/// Low-pass KZ filter. Under truncate the output starts at t0 + h and has n - 2h
/// values; throws Error(series_too_short) when n <= 2h.
[[nodiscard]] TimeSeries kz_filter(const TimeSeries& series, const FilterKernel& kernel,
                                   EdgePolicy edge = EdgePolicy::truncate);

/// Complex KZFT bandpass filter centered at band.nu:
/// z(t) = sum_u w_u exp(-i 2 pi nu u) X(t + u).
[[nodiscard]] ComplexSeries kzft_filter(const TimeSeries& series, const BandSpec& band,
                                        EdgePolicy edge = EdgePolicy::truncate);

/// Real signal from KZFT output: 2 Re z(t).
[[nodiscard]] TimeSeries bandpass_reconstruct(const ComplexSeries& z);

/// Amplitude gain of the 2 Re(KZFT) pipeline for a sinusoid at the center
/// frequency: 1 + B(2 nu), where B is the KZ amplitude response. Equals 2 at
/// nu = 0 and approaches 1 only once 2 nu clears the main lobe.
[[nodiscard]] double center_gain(const BandSpec& band);

/// bandpass_reconstruct divided by center_gain(band): unit gain at nu.
[[nodiscard]] TimeSeries bandpass_reconstruct_unit_gain(const ComplexSeries& z, const BandSpec& band);

/// KZ amplitude response sin(pi m lambda) / (m sin(pi lambda)) raised to k.
[[nodiscard]] double amplitude_response_kz(double lambda, std::size_t m, std::size_t k);

/// Energy transfer (sin(pi m lambda) / (m sin(pi lambda)))^(2k); 1 at the removable
/// singularities where |sin(pi lambda)| < 1e-12.
[[nodiscard]] double energy_transfer_kz(double lambda, std::size_t m, std::size_t k);

/// KZ energy transfer shifted to center band.nu.
[[nodiscard]] double energy_transfer_kzft(double lambda, const BandSpec& band);

enum class CutoffMethod { closed_form, numeric };

/// Offset |lambda0 - nu| where the energy transfer drops to alpha. The closed
/// form is the usual approximation; numeric bisects the exact transfer on (0, 1/m).
[[nodiscard]] double cutoff_frequency(std::size_t m, std::size_t k, double alpha,
                                      CutoffMethod method = CutoffMethod::closed_form);

struct TransferPoint {
    double lambda;
    double energy;
};

/// Energy transfer sampled at `grid` evenly spaced frequencies covering [0, 1/2].
[[nodiscard]] std::vector<TransferPoint> transfer_curve(const BandSpec& band, std::size_t grid);

}  // namespace vbpbb
