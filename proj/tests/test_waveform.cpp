// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <cstring>

#include "ecusim/errors.hpp"
#include "ecusim/rng.hpp"
#include "ecusim/waveform.hpp"

using namespace ecusim;

TEST_CASE("dc sampling is exact") {
    const Waveform w = Waveform::dc(3.5);
    CHECK(w.sample(1.0) == 3.5);
    CHECK(w.sample(0.0) == 3.5);
    CHECK(w.edges_in(0.0, 1.0).empty());
}

TEST_CASE("pwm sampling hits the declared phases") {
    // 1 kHz, 60% duty: high for the first 600 us of each period
    const Waveform w = Waveform::pwm(0.0, 3.5, 1000.0, 0.6);
    CHECK(w.sample(0.0003) == 3.5);
    CHECK(w.sample(0.0007) == 0.0);
    CHECK(w.sample(0.0016) == 0.0);
    CHECK(w.sample(0.00105) == 3.5);
}

TEST_CASE("zero-amplitude sine returns its offset") {
    const Waveform w = Waveform::sine(0.0, 50.0, 1.25);
    CHECK(w.sample(0.123) == 1.25);
    CHECK(w.sample(7.0) == 1.25);
}

TEST_CASE("high-z cannot be sampled directly") {
    const Waveform w = Waveform::high_z();
    CHECK_THROWS_AS(w.sample(0.0), UnresolvedHighZ);
}

TEST_CASE("pwm edge positions are closed-form") {
    // rising at k/f, falling at (k+duty)/f
    const Waveform w = Waveform::pwm(0.0, 3.5, 1000.0, 0.6);
    const auto edges = w.edges_in(0.0, 0.001);
    REQUIRE(edges.size() == 2);
    CHECK(edges[0].time == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(edges[0].dir == EdgeDir::Rising);
    CHECK(edges[1].time == doctest::Approx(0.0006).epsilon(1e-12));
    CHECK(edges[1].dir == EdgeDir::Falling);
}

TEST_CASE("pulse train edges select the window subset") {
    const Waveform w = Waveform::pulses(0.0, 3.5, {0.001, 0.002});
    const auto edges = w.edges_in(0.0, 0.0015);
    REQUIRE(edges.size() == 1);
    CHECK(edges[0].time == 0.001);
    CHECK(edges[0].dir == EdgeDir::Rising);
    CHECK(w.sample(0.0015) == 3.5);
    CHECK(w.sample(0.0025) == 0.0);
}

TEST_CASE("degenerate pwm duty collapses to dc") {
    CHECK(Waveform::pwm(0.0, 3.5, 1000.0, 0.0).sample(0.1) == 0.0);
    CHECK(Waveform::pwm(0.0, 3.5, 1000.0, 1.0).sample(0.1) == 3.5);
    CHECK(Waveform::pwm(0.0, 3.5, 1000.0, 1.0).edges_in(0.0, 0.01).empty());
}

TEST_CASE("pulse edge times must increase") {
    CHECK_THROWS_AS(Waveform::pulses(0.0, 1.0, {0.002, 0.001}), std::invalid_argument);
    CHECK_THROWS_AS(Waveform::pulses(0.0, 1.0, {0.001, 0.001}), std::invalid_argument);
}

TEST_CASE("sampling is pure: identical calls give bit-identical values") {
    const Waveform w = Waveform::sine(2.0, 12345.0, 0.3, 0.7);
    SplitMix64 rng(42);
    for (int i = 0; i < 200; ++i) {
        const double t = rng.uniform(0.0, 1.0);
        const double a = w.sample(t);
        const double b = w.sample(t);
        CHECK(std::memcmp(&a, &b, sizeof a) == 0);
    }
}

TEST_CASE("pwm high time per period equals duty/frequency via edges") {
    SplitMix64 rng(7);
    for (int i = 0; i < 50; ++i) {
        const double f = rng.uniform(100.0, 20000.0);
        const double duty = rng.uniform(0.05, 0.95);
        const Waveform w = Waveform::pwm(0.0, 1.0, f, duty);
        const auto edges = w.edges_in(0.0, 1.0 / f);
        REQUIRE(edges.size() == 2);
        const double high_time = edges[1].time - edges[0].time;
        CHECK(high_time * f == doctest::Approx(duty).epsilon(1e-12));
    }
}

TEST_CASE("edge windows split cleanly: [a,b) + [b,c) = [a,c)") {
    SplitMix64 rng(11);
    for (int i = 0; i < 50; ++i) {
        const double f = rng.uniform(200.0, 5000.0);
        const Waveform w = Waveform::pwm(-1.0, 1.0, f, rng.uniform(0.1, 0.9));
        const double a = rng.uniform(0.0, 0.01);
        const double c = a + rng.uniform(0.001, 0.02);
        const double b = 0.5 * (a + c);
        auto left = w.edges_in(a, b);
        auto right = w.edges_in(b, c);
        auto whole = w.edges_in(a, c);
        REQUIRE(left.size() + right.size() == whole.size());
        std::size_t k = 0;
        for (const auto& e : left) {
            CHECK(e.time == whole[k].time);
            CHECK(e.dir == whole[k].dir);
            ++k;
        }
        for (const auto& e : right) {
            CHECK(e.time == whole[k].time);
            CHECK(e.dir == whole[k].dir);
            ++k;
        }
    }
}

TEST_CASE("sum composes a standing bias onto a line") {
    const Waveform w = Waveform::sum(Waveform::dc(0.0), Waveform::dc(0.5));
    CHECK(w.sample(0.0) == 0.5);
    CHECK(w.edges_in(0.0, 1.0).empty());
}

TEST_CASE("mean of pwm is exact") {
    const Waveform w = Waveform::pwm(0.0, 3.5, 1000.0, 0.6);
    CHECK(w.mean(0.0, 0.01) == doctest::Approx(2.1).epsilon(1e-12));
}

TEST_CASE("mean of a sine over whole periods vanishes around the offset") {
    const Waveform w = Waveform::sine(2.0, 100.0, 1.0);
    CHECK(w.mean(0.0, 0.01) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(w.mean(0.0, 0.1) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("scaled applies absolute gain") {
    const Waveform w = Waveform::pwm(0.0, 3.5, 1000.0, 0.6).scaled(0.5);
    CHECK(w.sample(0.0003) == doctest::Approx(1.75));
    CHECK(w.sample(0.0007) == 0.0);
    // identity drift changes nothing
    const Waveform id = Waveform::sine(2.0, 50.0, 0.25).scaled(1.0);
    CHECK(id.sample(0.003) == Waveform::sine(2.0, 50.0, 0.25).sample(0.003));
}

TEST_CASE("clipping caps samples and collapses edge levels") {
    const Waveform w = Waveform::pwm(-2.0, 5.0, 1000.0, 0.5).clipped(-0.64, 3.92);
    CHECK(w.sample(0.0001) == 3.92);
    CHECK(w.sample(0.0008) == -0.64);
    CHECK_FALSE(w.edges_in(0.0, 0.001).empty());
    // clipping both levels to the same rail leaves a constant
    const Waveform flat = Waveform::pwm(4.0, 5.0, 1000.0, 0.5).clipped(-1.0, 1.0);
    CHECK(flat.edges_in(0.0, 0.01).empty());
}
