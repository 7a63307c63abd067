#include "qa/error.hpp"
#include "qa/schedule.hpp"

#include <doctest.h>

#include <cmath>

using namespace qa;

namespace {

SpectrumStats stats_with_bandwidth(double bw) {
    SpectrumStats st;
    st.bandwidth = bw;
    st.mean_level_spacing = bw / 4096.0;
    return st;
}

}  // namespace

TEST_CASE("protocol 1 calibration") {
    const auto s = make_schedule(Protocol::parse("p1"), 4.0, stats_with_bandwidth(2.0), 12);
    CHECK(s.tau_I == 0.5);
    CHECK(s.tau_a == 2.0);
    CHECK(s.T == doctest::Approx(200.0).epsilon(1e-15));
    CHECK(s.t0 == doctest::Approx(0.02).epsilon(1e-15));
    CHECK(coupling_at(s, 2.0) == 2.0);
    CHECK(gap_scale(s, s.tau_a) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(gap_scale(s, s.tau_a / 2.0) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("protocol 3 calibration") {
    const auto s = make_schedule(Protocol::parse("p3"), 4.0, stats_with_bandwidth(2.0), 12);
    // a = bandwidth / g = 0.5, coupling = g / (a t^2)
    CHECK(coupling_at(s, 2.0) == doctest::Approx(4.0 / (0.5 * 4.0)).epsilon(1e-14));
    CHECK(gap_scale(s, s.tau_a) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("protocol 2 calibration") {
    const auto s = make_schedule(Protocol::parse("p2"), 4.0, stats_with_bandwidth(2.0), 12);
    CHECK(s.mixer() == Mixer::Transverse);
    CHECK(coupling_at(s, s.tau_a) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(gap_scale(s, s.tau_a) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("Table I protocols share tau_a") {
    const auto st = stats_with_bandwidth(3.7);
    const auto a = make_schedule(Protocol::parse("p1"), 2.5, st, 9);
    const auto b = make_schedule(Protocol::parse("p2"), 2.5, st, 9);
    const auto c = make_schedule(Protocol::parse("p3"), 2.5, st, 9);
    CHECK(a.tau_a == b.tau_a);
    CHECK(a.tau_a == c.tau_a);
    CHECK(a.T == c.T);
    CHECK(a.t0 == c.t0);
}

TEST_CASE("generic families cross the bandwidth at tau_a") {
    const auto st = stats_with_bandwidth(2.0);
    for (const char* p : {"power:2", "power:0.5", "power:1.5:transverse", "exp:1", "exp:3:transverse"}) {
        CAPTURE(p);
        const auto s = make_schedule(Protocol::parse(p), 3.0, st, 10);
        CHECK(gap_scale(s, s.tau_a) == doctest::Approx(2.0).epsilon(1e-9));
        CHECK(s.t0 < s.tau_a);
        CHECK(s.tau_a < s.T);
        double prev = coupling_at(s, s.t0);
        for (int i = 1; i <= 50; ++i) {
            const double t = s.t0 + (s.T - s.t0) * i / 50.0;
            const double c = coupling_at(s, t);
            CHECK(c > 0.0);
            CHECK(c <= prev);
            prev = c;
        }
    }
    const auto k = make_schedule(Protocol::parse("const:0.3"), 3.0, st, 10);
    CHECK(coupling_at(k, 0.1) == 0.3);
    CHECK(coupling_at(k, 100.0) == 0.3);
    CHECK(k.tau_a == 1.5);
}

TEST_CASE("time rescaling covariance") {
    const double lambda = 7.0;
    const auto a = make_schedule(Protocol::parse("p3"), 2.0, stats_with_bandwidth(1.0), 8);
    const auto b = make_schedule(Protocol::parse("p3"), 2.0, stats_with_bandwidth(1.0 / lambda), 8);
    CHECK(b.tau_a == doctest::Approx(lambda * a.tau_a).epsilon(1e-14));
    CHECK(b.T == doctest::Approx(lambda * a.T).epsilon(1e-14));
    CHECK(b.t0 == doctest::Approx(lambda * a.t0).epsilon(1e-14));
    for (double f : {0.01, 0.5, 1.0, 30.0}) {
        CHECK(coupling_at(b, f * b.tau_a) * b.tau_a ==
              doctest::Approx(coupling_at(a, f * a.tau_a) * a.tau_a).epsilon(1e-13));
    }
}

TEST_CASE("constant schedule for the Grover protocol") {
    const auto s = make_constant_schedule(16.0 / 14.0, Mixer::Projector, 2.0 * M_PI, 4);
    CHECK(s.t0 == 0.0);
    CHECK(s.T == 2.0 * M_PI);
    CHECK(coupling_at(s, 0.0) == 16.0 / 14.0);
    CHECK(coupling_at(s, 1.0) == 16.0 / 14.0);
    CHECK_FALSE(s.calibrated());
}

TEST_CASE("schedule errors") {
    const auto st = stats_with_bandwidth(1.0);
    CHECK_THROWS_AS(make_schedule(Protocol::parse("p1"), 0.0, st, 4), UsageError);
    CHECK_THROWS_AS(make_schedule(Protocol::parse("p1"), -1.0, st, 4), UsageError);
    CHECK_THROWS_AS(make_schedule(Protocol::parse("p1"), 1.0, stats_with_bandwidth(0.0), 4), UsageError);
    CHECK_THROWS_AS(make_schedule(Protocol::parse("p1"), 1.0, st, 4, {1.0, 100.0}), UsageError);
    const auto s = make_schedule(Protocol::parse("p1"), 1.0, st, 4);
    CHECK_THROWS_AS(coupling_at(s, 0.0), UsageError);
    CHECK_THROWS_AS(coupling_at(s, -1.0), UsageError);
    for (const char* bad : {"p4", "power:", "power:-1", "exp:0", "const:-2", "p1:sideways", ""}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(Protocol::parse(bad), UsageError);
    }
    CHECK(Protocol::parse("power:2:transverse").name() == "power:2:transverse");
    CHECK(Protocol::parse("p2").name() == "p2");
}
