#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "mcudi/rng.hpp"
#include "mcudi/stats.hpp"
#include "test_util.hpp"

using namespace mcudi;

TEST_CASE("ks: identical samples give statistic 0 and p exactly 1") {
    const std::vector<double> a = {0.3, 1.7, -2.2, 0.3, 5.0};
    const auto r = ks_two_sample(a, a);
    CHECK(r.statistic == 0.0);
    CHECK(r.p_value == 1.0);
    CHECK(r.n_a == 5);
}

TEST_CASE("ks: disjoint supports give statistic 1") {
    const std::vector<double> a = {0.1, 0.5, 0.9};
    const std::vector<double> b = {2.1, 2.5, 2.9};
    CHECK(ks_two_sample(a, b).statistic == 1.0);
}

TEST_CASE("ks: overlapping example peaks at 0.5") {
    // ECDF difference over the union {1..6} peaks on [2, 3).
    const std::vector<double> a = {1, 2, 3, 4};
    const std::vector<double> b = {3, 4, 5, 6};
    const auto r = ks_two_sample(a, b);
    CHECK(r.statistic == 0.5);
}

TEST_CASE("ks: statistic matches the brute-force oracle bit-for-bit") {
    Rng rng(914);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t na = 1 + rng.index(200);
        const std::size_t nb = 1 + rng.index(200);
        std::vector<double> a(na), b(nb);
        // Mix continuous values with a coarse grid so ties occur both within
        // and across samples.
        for (auto& v : a)
            v = trial % 3 == 0 ? std::floor(rng.normal() * 4.0) / 4.0 : rng.normal();
        for (auto& v : b)
            v = trial % 2 == 0 ? std::floor(rng.normal() * 4.0) / 4.0 : rng.normal() + 0.3;
        const auto r = ks_two_sample(a, b);
        CHECK(r.statistic == testutil::brute_force_ks(a, b));
    }
}

TEST_CASE("ks: symmetric in its arguments") {
    Rng rng(11);
    std::vector<double> a(40), b(70);
    for (auto& v : a) v = rng.normal();
    for (auto& v : b) v = rng.normal() + 0.5;
    const auto r1 = ks_two_sample(a, b);
    const auto r2 = ks_two_sample(b, a);
    CHECK(r1.statistic == r2.statistic);
    CHECK(r1.p_value == r2.p_value);
}

TEST_CASE("ks: invariant under a common strictly increasing transform") {
    Rng rng(12);
    std::vector<double> a(60), b(60);
    for (auto& v : a) v = rng.normal();
    for (auto& v : b) v = rng.normal() + 0.4;
    const double before = ks_two_sample(a, b).statistic;
    auto monotone = [](double x) { return std::exp(x / 2.0) + 3.0 * x; };
    for (auto& v : a) v = monotone(v);
    for (auto& v : b) v = monotone(v);
    CHECK(ks_two_sample(a, b).statistic == before);
}

TEST_CASE("ks: rejects empty and non-finite input") {
    const std::vector<double> ok = {1.0};
    CHECK_THROWS_AS(ks_two_sample({}, ok), DataError);
    CHECK_THROWS_AS(ks_two_sample(ok, {}), DataError);
    const std::vector<double> bad = {std::nan("")};
    CHECK_THROWS_AS(ks_two_sample(ok, bad), DataError);
}

TEST_CASE("kolmogorov_sf: boundary values and monotonicity") {
    CHECK(kolmogorov_sf(0.0) == 1.0);
    CHECK(kolmogorov_sf(-1.0) == 1.0);
    CHECK(kolmogorov_sf(10.0) < 1e-12);
    double prev = 1.0;
    for (double t = 0.05; t < 3.0; t += 0.01) {
        const double p = kolmogorov_sf(t);
        CHECK(p <= prev + 1e-15);
        prev = p;
    }
}

TEST_CASE("z-test: equal error rates mean no evidence") {
    const auto r = z_test_two_proportion(0.1, 0.1, 500, 700);
    CHECK(r.z == 0.0);
    CHECK(r.p_value == doctest::Approx(1.0));
    CHECK_FALSE(r.drift);
}

TEST_CASE("z-test: worked example 0.10 vs 0.20 at n=1000/1000") {
    const auto r = z_test_two_proportion(0.10, 0.20, 1000, 1000);
    CHECK(r.pooled_error == doctest::Approx(0.15));
    CHECK(r.z == doctest::Approx(6.262242910851494).epsilon(1e-9));
    CHECK(r.p_value < 0.001);
    CHECK(r.drift);
    REQUIRE(r.severity.has_value());
    CHECK(*r.severity == doctest::Approx(1.0));
}

TEST_CASE("z-test: degenerate pooled error is flagged, not divided by") {
    const auto r = z_test_two_proportion(0.0, 0.0, 100, 100);
    CHECK(r.degenerate);
    CHECK(r.z == 0.0);
    CHECK(r.p_value == 1.0);
    CHECK_FALSE(r.drift);
    const auto r1 = z_test_two_proportion(1.0, 1.0, 50, 50);
    CHECK(r1.degenerate);
}

TEST_CASE("z-test: sign follows the direction of the error change") {
    Rng rng(77);
    for (int i = 0; i < 200; ++i) {
        const double e0 = 0.05 + 0.9 * rng.uniform01();
        const double e1 = 0.05 + 0.9 * rng.uniform01();
        const auto r = z_test_two_proportion(e0, e1, 200, 300);
        if (r.degenerate) continue;
        if (e1 > e0) CHECK(r.z > 0.0);
        if (e1 < e0) CHECK(r.z < 0.0);
    }
}

TEST_CASE("z-test: a significant improvement is not drift") {
    const auto r = z_test_two_proportion(0.20, 0.10, 1000, 1000);
    CHECK(r.p_value < 0.001);
    CHECK_FALSE(r.drift);
    CHECK(*r.severity == doctest::Approx(-0.5));
}

TEST_CASE("z-test: rejects out-of-range input") {
    CHECK_THROWS_AS(z_test_two_proportion(-0.1, 0.5, 10, 10), DataError);
    CHECK_THROWS_AS(z_test_two_proportion(0.1, 1.5, 10, 10), DataError);
    CHECK_THROWS_AS(z_test_two_proportion(0.1, 0.5, 0, 10), DataError);
}

TEST_CASE("drift severity: relative change with an undefined sentinel at 0") {
    CHECK(*drift_severity(0.1, 0.2) == doctest::Approx(1.0));
    CHECK(*drift_severity(0.2, 0.1) == doctest::Approx(-0.5));
    CHECK(*drift_severity(0.04, 0.05) == doctest::Approx(0.25));
    CHECK_FALSE(drift_severity(0.0, 0.3).has_value());
}
