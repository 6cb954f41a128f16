// Acceptance suite. Prints one [PASS]/[FAIL] line per criterion.
//
//   vbpbb_acceptance        run every criterion
//   vbpbb_acceptance N      run criterion N only
//
// Exit status is 0 only if every selected criterion passes.

#include "cli.hpp"
#include "oracles.hpp"
#include "vbpbb/bootstrap.hpp"
#include "vbpbb/kz_filter.hpp"
#include "vbpbb/metrics.hpp"
#include "vbpbb/simulation.hpp"

#include <fmt/format.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace vbpbb;
namespace fs = std::filesystem;

namespace {

constexpr Seed kMasterSeed = 20240601;

struct Outcome {
    bool pass;
    std::string detail;
};

Scenario desk(std::size_t period, double variance) {
    Scenario s;
    s.period = period;
    s.noise_variance = variance;
    s.length = 1000;
    s.resamples = 500;
    s.repetitions = 100;
    s.mode = ResampleMode::phasewise;
    s.master_seed = kMasterSeed;
    return s;
}

std::size_t worker_threads() {
    const auto n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : n;
}

ScenarioSummary run_desk(const Scenario& s) { return run_scenario(s, worker_threads()).summary; }

bool within(double v, double lo, double hi) { return v >= lo && v <= hi; }

Outcome kernel_oracle() {
    double worst = 0.0;
    for (std::size_t m : {3, 5, 7, 11, 21}) {
        for (std::size_t k = 1; k <= 5; ++k) {
            const auto kernel = kz_kernel(m, k);
            const auto coef = oracle::window_polynomial(static_cast<int>(m), static_cast<int>(k));
            const double denom = static_cast<double>(oracle::ipow(static_cast<std::int64_t>(m), static_cast<int>(k)));
            if (kernel.weights().size() != coef.size()) return {false, fmt::format("length mismatch at m={} k={}", m, k)};
            for (std::size_t i = 0; i < coef.size(); ++i) {
                worst = std::max(worst, std::abs(kernel.weights()[i] - static_cast<double>(coef[i]) / denom));
            }
        }
    }
    return {worst <= 1e-14, fmt::format("max |kernel - oracle| = {:.3g}", worst)};
}

Outcome transfer_analytics() {
    const double at_zero = energy_transfer_kz(0.0, 11, 1);
    double worst_zero = 0.0;
    for (std::size_t m : {5, 11, 41}) {
        for (std::size_t j = 1; 2 * j <= m; ++j) {
            for (std::size_t k = 1; k <= 3; ++k) {
                worst_zero = std::max(worst_zero, energy_transfer_kz(static_cast<double>(j) / static_cast<double>(m), m, k));
            }
        }
    }
    std::mt19937_64 gen(3);
    std::normal_distribution<double> normal;
    std::vector<double> v(300);
    for (auto& x : v) x = normal(gen);
    const TimeSeries series(1, v);
    double worst_iter = 0.0;
    for (std::size_t m : {5, 11, 41}) {
        const auto once = kz_filter(kz_filter(series, kz_kernel(m, 1), EdgePolicy::truncate), kz_kernel(m, 1),
                                    EdgePolicy::truncate);
        const auto twice = kz_filter(series, kz_kernel(m, 2), EdgePolicy::truncate);
        if (once.t0() != twice.t0() || once.size() != twice.size()) return {false, "iterated support mismatch"};
        for (std::size_t i = 0; i < once.size(); ++i) worst_iter = std::max(worst_iter, std::abs(once[i] - twice[i]));
    }
    const bool pass = at_zero == 1.0 && worst_zero < 1e-12 && worst_iter <= 1e-12;
    return {pass, fmt::format("E(0) = {}, max E(j/m) = {:.3g}, max |(m,1)x2 - (m,2)| = {:.3g}", at_zero, worst_zero,
                              worst_iter)};
}

Outcome cutoff_consistency() {
    double worst = 0.0;
    for (std::size_t m : {5, 11, 21}) {
        for (std::size_t k = 1; k <= 3; ++k) {
            const double closed = cutoff_frequency(m, k, 0.5, CutoffMethod::closed_form);
            const double exact = oracle::cutoff_by_bisection(static_cast<int>(m), static_cast<int>(k), 0.5);
            worst = std::max(worst, std::abs(closed - exact));
        }
    }
    return {worst < 5e-3, fmt::format("max |closed form - bisection| = {:.4g}", worst)};
}

Outcome sinusoid_recovery() {
    std::vector<double> v(1000);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::sin(2.0 * std::numbers::pi * static_cast<double>(i + 1) / 50.0);
    const TimeSeries x(1, v);
    const BandSpec band{0.02, 11, 1};
    const auto rec = bandpass_reconstruct(kzft_filter(x, band, EdgePolicy::truncate));

    // Least-squares fit a sin + b cos at the known frequency.
    double ss = 0, cc = 0, sc = 0, ys = 0, yc = 0;
    std::vector<double> truth(rec.size()), got(rec.size());
    for (std::size_t i = 0; i < rec.size(); ++i) {
        const double w = 2.0 * std::numbers::pi * static_cast<double>(rec.time_at(i)) / 50.0;
        const double s = std::sin(w), c = std::cos(w);
        ss += s * s;
        cc += c * c;
        sc += s * c;
        ys += rec[i] * s;
        yc += rec[i] * c;
        truth[i] = s;
        got[i] = rec[i];
    }
    const double det = ss * cc - sc * sc;
    const double a = (ys * cc - yc * sc) / det;
    const double b = (yc * ss - ys * sc) / det;
    const double amplitude = std::hypot(a, b);
    const double r2 = oracle::pearson_r2(truth, got);
    const bool pass = r2 > 0.99 && std::abs(amplitude - 1.0) <= 0.05;
    return {pass, fmt::format("r2 = {:.6f}, amplitude = {:.4f} (gain at nu: {:.4f})", r2, amplitude,
                              center_gain(band))};
}

Outcome table1() {
    const auto p50 = run_desk(desk(50, 10.0));
    bool pass = within(p50.width_ratio, 1.55, 1.85);
    std::string detail = fmt::format("p=50 var=10 ratio {:.3f} in [1.55, 1.85]", p50.width_ratio);
    for (double variance : {2.0, 5.0, 10.0}) {
        const auto p10 = run_desk(desk(10, variance));
        pass = pass && within(p10.width_ratio, 2.05, 2.40);
        detail += fmt::format("; p=10 var={} ratio {:.3f} in [2.05, 2.40]", variance, p10.width_ratio);
    }
    return {pass, detail};
}

Outcome table4() {
    auto s = desk(50, 10.0);
    s.null_component = true;
    const auto summary = run_desk(s);
    return {within(summary.width_ratio, 1.55, 1.85),
            fmt::format("null p=50 var=10 ratio {:.3f} in [1.55, 1.85]", summary.width_ratio)};
}

Outcome table2() {
    const auto p50 = run_desk(desk(50, 10.0));
    const auto p100 = run_desk(desk(100, 2.0));
    const double d50 = p50.rsq_difference.value_or(NAN);
    const double d100 = p100.rsq_difference.value_or(NAN);
    return {d50 > 20.0 && d100 > 0.0,
            fmt::format("p=50 var=10 rsq gain {:.2f} pp (> 20); p=100 var=2 rsq gain {:.2f} pp (> 0)", d50, d100)};
}

Outcome table3() {
    bool pass = true;
    std::string detail;
    for (std::size_t p : {10, 25, 50}) {
        for (double variance : {2.0, 5.0, 10.0}) {
            const double d = run_desk(desk(p, variance)).outside_difference;
            pass = pass && d < 0.01;
            detail += fmt::format("{}p={} var={} diff {:.3f}", detail.empty() ? "" : "; ", p, variance, d);
        }
    }
    return {pass, detail + " (each must be < 0.01)"};
}

Outcome m5_rerun() {
    auto s = desk(10, 10.0);
    s.kzft_m = 5;
    const auto summary = run_desk(s);
    return {within(summary.width_ratio, 1.45, 1.75),
            fmt::format("p=10 var=10 m=5 ratio {:.3f} in [1.45, 1.75]", summary.width_ratio)};
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

Outcome determinism() {
    const auto root = fs::temp_directory_path() / "vbpbb_acceptance_determinism";
    fs::remove_all(root);
    fs::create_directories(root);
    const auto grid = root / "grid.json";
    std::ofstream(grid) << R"([{"period": 50, "noise_variance": 10}, {"period": 10, "noise_variance": 2,
                               "null_component": true}])";
    std::ostringstream out, err;
    for (const char* threads : {"1", "8"}) {
        const int code = cli::run({"simulate", "--grid", grid.string(), "--seed", std::to_string(kMasterSeed),
                                   "--threads", threads, "--out-dir", (root / threads).string()},
                                  out, err);
        if (code != 0) return {false, fmt::format("simulate --threads {} exited {}: {}", threads, code, err.str())};
    }
    std::size_t files = 0;
    for (const auto& entry : fs::directory_iterator(root / "1")) {
        const auto name = entry.path().filename();
        if (slurp(entry.path()) != slurp(root / "8" / name)) {
            return {false, fmt::format("{} differs between 1 and 8 threads", name.string())};
        }
        ++files;
    }
    fs::remove_all(root);
    return {files == 7, fmt::format("{} output files byte-identical for --threads 1 and 8", files)};
}

Outcome degenerate() {
    std::vector<std::string> failures;
    const TimeSeries constant(1, std::vector<double>(200, 3.5));
    for (auto mode : {ResampleMode::phasewise, ResampleMode::season_block}) {
        BootstrapOptions o;
        o.period = 10;
        o.resamples = 200;
        o.mode = mode;
        o.seed = 1;
        const auto band = bootstrap_band(constant, o);
        if (band_width(band) != 0.0) failures.push_back("constant width");
        if (fraction_outside(PeriodicProfile(std::vector<double>(10, 3.5)), band) != 0.0) failures.push_back("constant outside");
        Rng rng(2, 0);
        if (!(resample(constant, phase_partition(constant, 10), mode, rng) == constant)) failures.push_back("constant resample");
    }

    std::vector<double> v(1000);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::sin(2.0 * std::numbers::pi * static_cast<double>(i + 1) / 50.0);
    const TimeSeries sine(1, v);
    const auto part = phase_partition(sine, 50);
    Rng rng(3, 0);
    for (int r = 0; r < 20; ++r) {
        const auto out = resample(sine, part, ResampleMode::phasewise, rng);
        for (std::size_t i = 0; i < out.size(); ++i) {
            // Same phase means the same sine argument modulo 2 pi; only rounding in sin() can differ.
            if (std::abs(out[i] - sine[i]) > 1e-12) {
                failures.push_back("sine resample");
                break;
            }
        }
    }

    const TimeSeries short_series(7, {4, 8, 15, 16, 23, 42});
    Rng rng2(4, 0);
    if (!(resample(short_series, phase_partition(short_series, 6), ResampleMode::phasewise, rng2) == short_series)) {
        failures.push_back("p = n resample");
    }

    std::string detail = "constant bands zero width and zero outside; sine and p = n resamples reproduce the input";
    if (!failures.empty()) {
        detail = "failed:";
        for (const auto& f : failures) detail += " " + f + ";";
    }
    return {failures.empty(), detail};
}

struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> check;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria{
        {1, "kernel oracle equivalence", kernel_oracle},
        {2, "transfer function analytics", transfer_analytics},
        {3, "cutoff consistency", cutoff_consistency},
        {4, "sinusoid recovery", sinusoid_recovery},
        {5, "table 1 desk-scale width ratio", table1},
        {6, "table 4 null-case width ratio", table4},
        {7, "table 2 r-squared direction", table2},
        {8, "table 3 coverage parity", table3},
        {9, "m = 5 sensitivity rerun", m5_rerun},
        {10, "determinism across thread counts", determinism},
        {11, "degenerate inputs", degenerate},
    };

    int only = 0;
    if (argc > 1) {
        only = std::atoi(argv[1]);
        if (only < 1 || only > static_cast<int>(criteria.size())) {
            fmt::print(stderr, "usage: {} [criterion 1-{}]\n", argv[0], criteria.size());
            return 2;
        }
    }

    bool all = true;
    for (const auto& c : criteria) {
        if (only != 0 && c.id != only) continue;
        Outcome outcome;
        try {
            outcome = c.check();
        } catch (const std::exception& e) {
            outcome = {false, fmt::format("threw: {}", e.what())};
        }
        all = all && outcome.pass;
        fmt::print("[{}] {} {}: {}\n", outcome.pass ? "PASS" : "FAIL", c.id, c.name, outcome.detail);
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
