#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "hydro/scenarios.hpp"

using namespace hydro;

TEST_CASE("outflow bias formula") {
    CHECK(bias(1000.0) == doctest::Approx(40.0));
    CHECK(bias(0.0) == doctest::Approx(10.0));
    CHECK(bias(500.0) == doctest::Approx(25.0));
    CHECK_THROWS_AS(bias(-1.0), std::invalid_argument);
}

TEST_CASE("bias is affine increasing in the inflow") {
    const double b0 = bias(0.0), b1 = bias(400.0), b2 = bias(800.0);
    CHECK(b1 > b0);
    CHECK(b2 > b1);
    CHECK(b2 - b1 == doctest::Approx(b1 - b0));  // constant slope
    CHECK((b1 - b0) / 400.0 == doctest::Approx(0.03));
}

TEST_CASE("lock flush pulse bookkeeping") {
    const LockFlush pulses[] = {{3600.0, 100.0, 900.0}, {4000.0, 100.0, 900.0}};
    CHECK(lock_flush_signal(pulses, 100.0) == 0.0);
    CHECK(lock_flush_signal(pulses, 3700.0) == 100.0);
    CHECK(lock_flush_signal(pulses, 4100.0) == 200.0);  // overlap adds
    CHECK(lock_flush_volume(pulses) == doctest::Approx(2.0 * 100.0 * 900.0));
}

TEST_CASE("a grid-aligned 900 s flush touches exactly 7 samples at T_s = 120 s") {
    const LockFlush pulse[] = {{1200.0, 100.0, 900.0}};
    int touched = 0;
    for (int k = 0; k < 50; ++k)
        if (lock_flush_signal(pulse, k * 120.0) > 0.0) ++touched;
    CHECK(touched == 7);
}

TEST_CASE("scenarios are deterministic under a fixed seed") {
    const Scenario a = build_scenario(1, 120.0, 42);
    const Scenario b = build_scenario(1, 120.0, 42);
    CHECK(a.q_e_profile.values == b.q_e_profile.values);
    REQUIRE(a.flushes.size() == b.flushes.size());
    for (std::size_t i = 0; i < a.flushes.size(); ++i)
        CHECK(a.flushes[i].start == b.flushes[i].start);

    const Scenario c = build_scenario(1, 120.0, 43);
    bool any_diff = false;
    for (std::size_t i = 0; i < std::min(a.flushes.size(), c.flushes.size()); ++i)
        any_diff = any_diff || a.flushes[i].start != c.flushes[i].start;
    CHECK(any_diff);
}

TEST_CASE("scenario shapes and durations") {
    for (int n : {1, 2}) {
        const Scenario sc = build_scenario(n, 120.0, 7);
        CHECK(sc.duration == doctest::Approx(345600.0));
        CHECK(sc.flushes.size() == 8);
        CHECK(sc.bias_enabled);
        CHECK(sc.q_e_profile.size() == 2881);  // 2880 controller steps + endpoint
    }
    const Scenario s1 = build_scenario(1, 120.0, 7);
    CHECK(s1.q_e_profile.values.front() > s1.q_e_profile.values.back());  // flood recession

    const Scenario s3 = build_scenario(3, 120.0, 7);
    CHECK(s3.duration == doctest::Approx(86400.0));
    double peak = 0.0;
    for (double q : s3.q_e_profile.values) peak = std::max(peak, q);
    CHECK(peak + bias(peak) > 1400.0);  // engineered to pin the default actuator

    CHECK_THROWS_AS(build_scenario(0, 120.0, 7), std::invalid_argument);
    CHECK_THROWS_AS(build_scenario(4, 120.0, 7), std::invalid_argument);
}

TEST_CASE("band evaluation: inside, offset, and misalignment") {
    TimeSeries z(0.0, 120.0, std::vector<double>(100, 5.0), "m");
    TimeSeries zs(0.0, 120.0, std::vector<double>(100, 5.0), "m");
    auto rep = evaluate_band(z, zs, 0.10);
    CHECK(rep.within_band);
    CHECK(rep.max_over == 0.0);
    CHECK(rep.max_under == 0.0);
    CHECK(rep.violation_time == 0.0);

    for (auto& v : z.values) v = 5.12;
    rep = evaluate_band(z, zs, 0.10);
    CHECK_FALSE(rep.within_band);
    CHECK(rep.max_over == doctest::Approx(0.12));
    CHECK(rep.violation_time == doctest::Approx(100 * 120.0));

    TimeSeries other(0.0, 60.0, std::vector<double>(100, 5.0), "m");
    CHECK_THROWS_AS(evaluate_band(z, other, 0.10), std::invalid_argument);
}

TEST_CASE("transport delay from a synthetic step response") {
    // q_e steps at sample 50; z_r responds 15 samples (30 min) later.
    std::vector<double> q(500, 700.0), zr(500, 5.0), zs(500, 5.0);
    for (std::size_t k = 50; k < q.size(); ++k) q[k] = 800.0;
    for (std::size_t k = 65; k < zr.size(); ++k)
        zr[k] = 5.0 + 0.04 * (1.0 - std::exp(-static_cast<double>(k - 65) / 10.0));
    const TimeSeries qts(0.0, 120.0, q, "m3/s");
    const TimeSeries zrts(0.0, 120.0, zr, "m");
    const TimeSeries zsts(0.0, 120.0, zs, "m");
    const auto rep = evaluate_band(zrts, zsts, 0.10, &qts);
    CHECK(rep.measured_transport_delay == doctest::Approx(15.0 * 120.0).epsilon(0.15));
}
