// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "ecusim/analog.hpp"
#include "ecusim/errors.hpp"
#include "ecusim/measure.hpp"
#include "ecusim/rng.hpp"

using namespace ecusim;

namespace {
constexpr double kTwoPi = 6.283185307179586;
}

TEST_CASE("comparator stays quiet on identical inputs") {
    const ComparatorConfig cfg;
    const Waveform w = Waveform::dc(3.5);
    CHECK_FALSE(diff_compare(w, w, cfg, 0.0, 0.01));
}

TEST_CASE("comparator trips on an open digital-high line") {
    const ComparatorConfig cfg;
    CHECK(diff_compare(Waveform::dc(3.5), Waveform::dc(0.0), cfg, 0.0, 0.01));
}

TEST_CASE("analogue ground opens are undetectable") {
    const ComparatorConfig cfg;
    CHECK_FALSE(diff_compare(Waveform::dc(0.0), Waveform::dc(0.0), cfg, 0.0, 0.01));
}

TEST_CASE("2 us propagation skew is filtered out") {
    const ComparatorConfig cfg;
    const Waveform a = Waveform::pwm(0.0, 3.5, 1000.0, 0.6);
    // same signal lagged by 2 us
    const Waveform b = a.attenuated(1.0, 2e-6 * kTwoPi * 1000.0);
    CHECK_FALSE(diff_compare(a, b, cfg, 0.0, 0.01));
    // a 20 us skew is a real discrepancy and must trip
    const Waveform c = a.attenuated(1.0, 20e-6 * kTwoPi * 1000.0);
    CHECK(diff_compare(a, c, cfg, 0.0, 0.01));
}

TEST_CASE("comparator is symmetric") {
    const ComparatorConfig cfg;
    SplitMix64 rng(3);
    for (int i = 0; i < 20; ++i) {
        const Waveform a = Waveform::pwm(0.0, rng.uniform(0.2, 4.0), 1000.0, rng.uniform(0.1, 0.9));
        const Waveform b = Waveform::dc(rng.uniform(0.0, 4.0));
        CHECK(diff_compare(a, b, cfg, 0.0, 0.01) == diff_compare(b, a, cfg, 0.0, 0.01));
    }
}

TEST_CASE("threshold must clear the noise bound") {
    ComparatorConfig cfg;
    cfg.threshold = 0.005;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("dc measurement stays within +/-10 mV") {
    SplitMix64 seeds(99);
    for (int i = 0; i < 1000; ++i) {
        const double v = measure_dc(Waveform::dc(1.0), 0.0, kAdcCapture, seeds.next());
        CHECK(v >= 0.990);
        CHECK(v <= 1.010);
    }
    for (int i = 0; i < 1000; ++i) {
        const double v = measure_dc(Waveform::dc(0.0), 0.0, kAdcCapture, seeds.next());
        CHECK(v >= -0.010);
        CHECK(v <= 0.010);
    }
}

TEST_CASE("dc through the abm reads the clipped level") {
    const AbmTransferModel m;
    const Waveform w = abm_transfer(Waveform::dc(5.0), m);
    SplitMix64 seeds(7);
    for (int i = 0; i < 200; ++i) {
        const double v = measure_dc(w, 0.0, kAdcCapture, seeds.next());
        CHECK(v >= 3.910);
        CHECK(v <= 3.930);
    }
}

TEST_CASE("dc measurement rejects windows below one adc capture") {
    CHECK_THROWS_AS(measure_dc(Waveform::dc(1.0), 0.0, 1e-6, 1), std::invalid_argument);
}

TEST_CASE("duty measurement is exact on noiseless pwm") {
    const Waveform w = Waveform::pwm(0.0, 3.5, 1000.0, 0.6);
    CHECK(std::abs(measure_duty(w, 0.0, 0.01) - 0.6) <= 1e-9);
}

TEST_CASE("duty changes of 0.001 percentage points are distinguishable") {
    const double a = measure_duty(Waveform::pwm(0.0, 3.5, 1000.0, 0.60000), 0.0, 0.01);
    const double b = measure_duty(Waveform::pwm(0.0, 3.5, 1000.0, 0.60001), 0.0, 0.01);
    CHECK(a != b);
    CHECK(std::abs(b - a) == doctest::Approx(1e-5).epsilon(1e-3));
}

TEST_CASE("duty through the abm keeps its exactness") {
    const AbmTransferModel m;
    const Waveform w = abm_transfer(Waveform::pwm(0.0, 3.5, 1000.0, 0.6), m);
    CHECK(std::abs(measure_duty(w, 0.0, 0.01) - 0.6) <= 1e-9);
}

TEST_CASE("duty of a constant signal raises NoEdges") {
    CHECK_THROWS_AS(measure_duty(Waveform::dc(1.0), 0.0, 0.01), NoEdges);
}

TEST_CASE("spectrum: low-frequency sine pays the fourier budget") {
    const SpectrumResult r = measure_spectrum(Waveform::sine(1.0, 10.0), 0.0, 1.0);
    CHECK(r.fundamental == doctest::Approx(10.0));
    CHECK(r.cost >= 0.100);
    CHECK(r.cost == doctest::Approx(1.0));
}

TEST_CASE("spectrum: pwm fundamental and window-bound cost above 100 Hz") {
    const SpectrumResult r = measure_spectrum(Waveform::pwm(0.0, 3.5, 1000.0, 0.6), 0.0, 0.01);
    CHECK(r.fundamental == doctest::Approx(1000.0));
    CHECK(r.cost == doctest::Approx(0.01));
}

TEST_CASE("spectrum of dc raises NoSignal") {
    CHECK_THROWS_AS(measure_spectrum(Waveform::dc(2.0), 0.0, 1.0), NoSignal);
}

TEST_CASE("spectrum of a pulse train uses the mean edge spacing") {
    std::vector<double> edges;
    for (int i = 0; i < 40; ++i) {
        edges.push_back(i * 0.01);
        edges.push_back(i * 0.01 + 0.004);
    }
    const SpectrumResult r = measure_spectrum(Waveform::pulses(0.0, 3.5, edges), 0.0, 0.4);
    CHECK(r.fundamental == doctest::Approx(100.0).epsilon(0.01));
}

TEST_CASE("detectability classification folds window histories") {
    CHECK(classify_detectability({true, true, true}) == Detectability::Detectable);
    CHECK(classify_detectability({true, false, true}) == Detectability::Intermittent);
    CHECK(classify_detectability({false, false}) == Detectability::NotDetectable);
    CHECK_THROWS_AS(classify_detectability({}), std::invalid_argument);
}

TEST_CASE("no false positive on any healthy line class") {
    const ComparatorConfig cfg;
    const AbmTransferModel m;
    // both sides of an intact line carry the same post-abm waveform
    const Waveform classes[] = {
        Waveform::dc(3.5),
        Waveform::sum(Waveform::dc(0.0), Waveform::dc(0.5)),
        Waveform::pwm(0.0, 3.5, 5.0, 0.5),
        Waveform::pwm(0.0, 3.5, 1000.0, 0.6),
        Waveform::dc(0.0),
        Waveform::pulses(0.0, 3.5, {0.001, 0.002, 0.005, 0.006}),
    };
    for (const Waveform& w : classes) {
        const Waveform x = abm_transfer(w, m);
        CHECK_FALSE(diff_compare(x, x, cfg, 0.0, 0.01));
    }
}
