#include "vbpbb/metrics.hpp"

#include "vbpbb/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <fmt/format.h>

namespace vbpbb {

double ComparisonRecord::width_ratio() const noexcept {
    if (width_vbpbb == 0.0) {
        return width_pbb == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    }
    return width_pbb / width_vbpbb;
}

double band_width(const BootstrapBand& band) {
    double total = 0.0;
    for (std::size_t j = 1; j <= band.period(); ++j) {
        total += band.upper.at_phase(j) - band.lower.at_phase(j);
    }
    return total / static_cast<double>(band.period());
}

double fraction_outside(const PeriodicProfile& truth, const BootstrapBand& band) {
    if (truth.period() != band.period()) {
        throw Error(ErrorKind::invalid_comparison,
                    fmt::format("truth has period {} but band has period {}", truth.period(),
                                band.period()));
    }
    std::size_t outside = 0;
    for (std::size_t j = 1; j <= band.period(); ++j) {
        const double v = truth.at_phase(j);
        if (v < band.lower.at_phase(j) || v > band.upper.at_phase(j)) ++outside;
    }
    return static_cast<double>(outside) / static_cast<double>(band.period());
}

double r_squared(const PeriodicProfile& a, const PeriodicProfile& b) {
    if (a.period() != b.period()) {
        throw Error(ErrorKind::invalid_comparison, "profiles have different periods");
    }
    const auto x = a.values();
    const auto y = b.values();
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw Error(ErrorKind::undefined_correlation, "correlation undefined for a constant profile");
    }
    return std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
}

ComparisonRecord compare(const std::optional<PeriodicProfile>& truth, const BootstrapBand& band_pbb,
                         const BootstrapBand& band_vbpbb) {
    if (band_pbb.period() != band_vbpbb.period()) {
        throw Error(ErrorKind::invalid_comparison, "bands have different periods");
    }
    ComparisonRecord record;
    record.width_pbb = band_width(band_pbb);
    record.width_vbpbb = band_width(band_vbpbb);
    if (truth) {
        record.outside_pbb = fraction_outside(*truth, band_pbb);
        record.outside_vbpbb = fraction_outside(*truth, band_vbpbb);
        record.rsq_pbb = r_squared(*truth, band_pbb.point);
        record.rsq_vbpbb = r_squared(*truth, band_vbpbb.point);
    } else {
        // The null component is identically zero.
        const PeriodicProfile zero(std::vector<double>(band_pbb.period(), 0.0));
        record.outside_pbb = fraction_outside(zero, band_pbb);
        record.outside_vbpbb = fraction_outside(zero, band_vbpbb);
    }
    return record;
}

double median(std::span<const double> values) {
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    return quantile_sorted(sorted, 0.5);
}

ScenarioSummary aggregate(std::span<const ComparisonRecord> records) {
    if (records.empty()) {
        throw Error(ErrorKind::invalid_aggregation, "cannot aggregate zero records");
    }
    const bool with_rsq = records.front().rsq_pbb.has_value();
    std::vector<double> ratio, w_pbb, w_vbpbb, rsq, outside;
    for (const auto& r : records) {
        if (r.rsq_pbb.has_value() != with_rsq || r.rsq_vbpbb.has_value() != with_rsq) {
            throw Error(ErrorKind::invalid_aggregation,
                        "records mix null and non-null scenarios");
        }
        ratio.push_back(r.width_ratio());
        w_pbb.push_back(r.width_pbb);
        w_vbpbb.push_back(r.width_vbpbb);
        outside.push_back(r.outside_vbpbb - r.outside_pbb);
        if (with_rsq) rsq.push_back((*r.rsq_vbpbb - *r.rsq_pbb) * 100.0);
    }
    ScenarioSummary summary;
    summary.repetitions = records.size();
    summary.width_ratio = median(ratio);
    summary.median_width_pbb = median(w_pbb);
    summary.median_width_vbpbb = median(w_vbpbb);
    summary.outside_difference = median(outside);
    if (with_rsq) summary.rsq_difference = median(rsq);
    return summary;
}

}  // namespace vbpbb
