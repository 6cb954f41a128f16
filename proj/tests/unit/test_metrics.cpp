#include <catch_amalgamated.hpp>

#include "oracles.hpp"
#include "vbpbb/error.hpp"
#include "vbpbb/metrics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

using namespace vbpbb;
using Catch::Approx;

namespace {

BootstrapBand make_band(std::vector<double> lower, std::vector<double> upper) {
    std::vector<double> point(lower.size());
    for (std::size_t i = 0; i < lower.size(); ++i) point[i] = 0.5 * (lower[i] + upper[i]);
    return BootstrapBand{PeriodicProfile(point), PeriodicProfile(std::move(lower)),
                         PeriodicProfile(std::move(upper)), 0.95, 100};
}

std::vector<double> random_vector(std::mt19937_64& gen, std::size_t n) {
    std::normal_distribution<double> normal;
    std::vector<double> v(n);
    for (auto& x : v) x = normal(gen);
    return v;
}

}  // namespace

TEST_CASE("band_width examples") {
    CHECK(band_width(make_band({0, 0}, {1, 3})) == 2.0);
    CHECK(band_width(make_band({1, 1, 1}, {1, 1, 1})) == 0.0);
}

TEST_CASE("band_width is translation invariant and scales linearly") {
    std::mt19937_64 gen(4);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t p = 1 + gen() % 40;
        auto lower = random_vector(gen, p);
        auto upper = lower;
        for (auto& u : upper) u += std::abs(random_vector(gen, 1)[0]);
        const double w = band_width(make_band(lower, upper));
        REQUIRE(w >= 0.0);

        auto shifted_lower = lower, shifted_upper = upper;
        for (auto& v : shifted_lower) v += 3.25;
        for (auto& v : shifted_upper) v += 3.25;
        REQUIRE(band_width(make_band(shifted_lower, shifted_upper)) == Approx(w).margin(1e-12));

        auto scaled_lower = lower, scaled_upper = upper;
        for (auto& v : scaled_lower) v *= 2.5;
        for (auto& v : scaled_upper) v *= 2.5;
        REQUIRE(band_width(make_band(scaled_lower, scaled_upper)) == Approx(2.5 * w).epsilon(1e-12));
    }
}

TEST_CASE("fraction_outside examples") {
    const auto band = make_band({0, 0}, {1, 1});
    CHECK(fraction_outside(PeriodicProfile({0.5, 2.0}), band) == 0.5);
    CHECK(fraction_outside(PeriodicProfile({0.0, 1.0}), band) == 0.0);  // closed interval
    CHECK(fraction_outside(PeriodicProfile({-1.0, 1.5}), band) == 1.0);
    CHECK_THROWS_AS(fraction_outside(PeriodicProfile({0.0}), band), Error);
}

TEST_CASE("fraction_outside takes values k / p") {
    std::mt19937_64 gen(5);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t p = 1 + gen() % 30;
        auto lower = random_vector(gen, p);
        auto upper = lower;
        for (auto& u : upper) u += 1.0;
        const double f = fraction_outside(PeriodicProfile(random_vector(gen, p)), make_band(lower, upper));
        REQUIRE(f >= 0.0);
        REQUIRE(f <= 1.0);
        const double scaled = f * static_cast<double>(p);
        REQUIRE(scaled == Approx(std::round(scaled)).margin(1e-9));
    }
}

TEST_CASE("r_squared examples") {
    CHECK(r_squared(PeriodicProfile({1, 2, 3}), PeriodicProfile({2, 4, 6})) == Approx(1.0));
    CHECK(r_squared(PeriodicProfile({1, 2, 3}), PeriodicProfile({3, 2, 1})) == Approx(1.0));
    // sin and cos at p = 4 are orthogonal.
    CHECK(r_squared(PeriodicProfile({1, 0, -1, 0}), PeriodicProfile({0, -1, 0, 1})) ==
          Approx(0.0).margin(1e-15));
    try {
        (void)r_squared(PeriodicProfile({1, 1, 1}), PeriodicProfile({1, 2, 3}));
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::undefined_correlation);
    }
    CHECK_THROWS_AS(r_squared(PeriodicProfile({1, 2}), PeriodicProfile({1, 2, 3})), Error);
}

TEST_CASE("r_squared matches a direct Pearson computation and is affine invariant") {
    std::mt19937_64 gen(6);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t p = 3 + gen() % 50;
        const auto a = random_vector(gen, p);
        const auto b = random_vector(gen, p);
        const double r2 = r_squared(PeriodicProfile(a), PeriodicProfile(b));
        REQUIRE(r2 >= 0.0);
        REQUIRE(r2 <= 1.0);
        REQUIRE(r2 == Approx(oracle::pearson_r2(a, b)).margin(1e-12));
        REQUIRE(r2 == Approx(r_squared(PeriodicProfile(b), PeriodicProfile(a))).margin(1e-15));
        auto transformed = a;
        for (auto& v : transformed) v = -3.0 * v + 7.0;
        REQUIRE(r_squared(PeriodicProfile(transformed), PeriodicProfile(b)) == Approx(r2).margin(1e-12));
    }
}

TEST_CASE("width_ratio edge cases") {
    ComparisonRecord r;
    r.width_pbb = 2.0;
    r.width_vbpbb = 1.0;
    CHECK(r.width_ratio() == 2.0);
    r.width_pbb = 0.0;
    r.width_vbpbb = 0.0;
    CHECK(r.width_ratio() == 1.0);
    r.width_pbb = 1.0;
    CHECK(std::isinf(r.width_ratio()));
}

TEST_CASE("compare scores both arms") {
    const PeriodicProfile truth({0.0, 1.0, 0.0, -1.0});
    const auto pbb = make_band({-1, -0.5, -1, -1.5}, {1, 1.5, 1, 0.5});
    const auto vbpbb = make_band({-0.5, 0.5, -0.5, -0.5}, {0.5, 1.5, 0.5, 0.5});
    const auto rec = compare(truth, pbb, vbpbb);
    CHECK(rec.width_pbb == 2.0);
    CHECK(rec.width_vbpbb == 1.0);
    CHECK(rec.outside_pbb == 0.0);
    CHECK(rec.outside_vbpbb == 0.25);
    REQUIRE(rec.rsq_pbb.has_value());
    REQUIRE(rec.rsq_vbpbb.has_value());
    CHECK(*rec.rsq_pbb == Approx(1.0));
    CHECK(*rec.rsq_vbpbb == Approx(2.0 / 3.0));

    const auto null_rec = compare(std::nullopt, pbb, vbpbb);
    CHECK_FALSE(null_rec.rsq_pbb.has_value());
    CHECK_FALSE(null_rec.rsq_vbpbb.has_value());
    CHECK(null_rec.outside_pbb == 0.0);
    CHECK(null_rec.outside_vbpbb == 0.25);  // zero is outside [0.5, 1.5]
}

TEST_CASE("aggregate takes medians") {
    std::vector<ComparisonRecord> records;
    for (int i = 1; i <= 3; ++i) {
        ComparisonRecord r;
        r.width_pbb = 2.0 * i;
        r.width_vbpbb = 1.0;
        r.outside_pbb = 0.1 * i;
        r.outside_vbpbb = 0.0;
        r.rsq_pbb = 0.5;
        r.rsq_vbpbb = 0.5 + 0.1 * i;
        records.push_back(r);
    }
    const auto s = aggregate(records);
    CHECK(s.repetitions == 3);
    CHECK(s.width_ratio == 4.0);
    CHECK(s.median_width_pbb == 4.0);
    CHECK(s.median_width_vbpbb == 1.0);
    REQUIRE(s.rsq_difference.has_value());
    CHECK(*s.rsq_difference == Approx(20.0));
    CHECK(s.outside_difference == Approx(-0.2));

    std::vector<ComparisonRecord> copies(5, records[1]);
    const auto c = aggregate(copies);
    CHECK(c.width_ratio == records[1].width_ratio());
    CHECK(*c.rsq_difference == Approx((*records[1].rsq_vbpbb - *records[1].rsq_pbb) * 100.0));

    CHECK_THROWS_AS(aggregate(std::vector<ComparisonRecord>{}), Error);
    auto mixed = records;
    mixed[0].rsq_pbb.reset();
    mixed[0].rsq_vbpbb.reset();
    CHECK_THROWS_AS(aggregate(mixed), Error);
}

TEST_CASE("median") {
    CHECK(median(std::vector<double>{3, 1, 2}) == 2.0);
    CHECK(median(std::vector<double>{4, 1, 2, 3}) == 2.5);
    CHECK(median(std::vector<double>{1, std::numeric_limits<double>::infinity(),
                                     std::numeric_limits<double>::infinity()}) ==
          std::numeric_limits<double>::infinity());
}
