// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "ecusim/rng.hpp"
#include "ecusim/timing.hpp"

using namespace ecusim;

TEST_CASE("t_total sums configuration and measurement time exactly") {
    TimingParams p;
    p.mode = TimingParams::Mode::Worst;
    p.config_cycles_full = 80000.0; // 5 ms at 16 MHz
    const TimingReport r = t_total(p, TestKind::Dc);
    CHECK(r.t_con == doctest::Approx(0.005).epsilon(1e-12));
    CHECK(r.t_test == doctest::Approx(7e-6).epsilon(1e-12));
    CHECK(r.t_total == r.t_con + r.t_test);
    CHECK(r.t_total == doctest::Approx(0.005007).epsilon(1e-12));
}

TEST_CASE("best mode with zero setup reduces to the measurement time") {
    TimingParams p;
    p.mode = TimingParams::Mode::Best;
    p.config_cycles_initial = 0.0;
    const TimingReport r = t_total(p, TestKind::Dc);
    CHECK(r.t_total == doctest::Approx(p.adc_capture).epsilon(1e-12));
}

TEST_CASE("spectrum tests on slow signals cost at least the fourier budget") {
    TimingParams p;
    p.mode = TimingParams::Mode::Best;
    p.config_cycles_initial = 0.0;
    const TimingReport r = t_total(p, TestKind::Spectrum);
    CHECK(r.t_test >= 0.100);
}

TEST_CASE("calibrated best-mode loop rate reproduces 153 Hz") {
    TimingParams p;
    p.mode = TimingParams::Mode::Best;
    // oracle: invert the loop-rate formula algebraically for the target
    const double c = calibrate_initial_cycles(16e6, 10, 7e-6, 153.0);
    CHECK(c == doctest::Approx(103455.0).epsilon(0.001));
    p.config_cycles_initial = c;
    CHECK(loop_rate(p) == doctest::Approx(153.0).epsilon(1e-9));
    // the default parameter set sits within 1% of the same endpoint
    TimingParams def;
    def.mode = TimingParams::Mode::Best;
    CHECK(loop_rate(def) == doctest::Approx(153.0).epsilon(0.01));
}

TEST_CASE("calibrated worst-mode loop rate reproduces 0.949 Hz") {
    TimingParams p;
    p.mode = TimingParams::Mode::Worst;
    const double c = calibrate_full_cycles(16e6, 10, 0.100, 0.949);
    CHECK(c == doctest::Approx(85985.0).epsilon(0.001));
    p.config_cycles_full = c;
    CHECK(loop_rate(p) == doctest::Approx(0.949).epsilon(1e-9));
    TimingParams def;
    def.mode = TimingParams::Mode::Worst;
    CHECK(loop_rate(def) == doctest::Approx(0.949).epsilon(0.01));
}

TEST_CASE("degenerate single-node dc-only limit") {
    TimingParams p;
    p.mode = TimingParams::Mode::Best;
    p.n_nodes = 1;
    p.config_cycles_initial = 0.0;
    CHECK(loop_rate(p) == doctest::Approx(1.0 / 7e-6).epsilon(1e-9));
}

TEST_CASE("best rate dominates worst rate across random parameters") {
    SplitMix64 rng(31);
    for (int i = 0; i < 200; ++i) {
        TimingParams p;
        p.f_tck = rng.uniform(1e6, 50e6);
        p.n_nodes = 1 + rng.next() % 40;
        p.adc_capture = rng.uniform(1e-6, 1e-4);
        p.fourier_cost = rng.uniform(p.adc_capture, 0.5);
        const double c = rng.uniform(0.0, 1e6);
        p.config_cycles_initial = c;
        p.config_cycles_full = c;
        p.mode = TimingParams::Mode::Best;
        const double best = loop_rate(p);
        p.mode = TimingParams::Mode::Worst;
        const double worst = loop_rate(p);
        CHECK(best >= worst);
    }
}

TEST_CASE("loop rate strictly decreases in config cycles, nodes and test cost") {
    TimingParams p;
    p.mode = TimingParams::Mode::Worst;
    const double base = loop_rate(p);
    TimingParams more_cfg = p;
    more_cfg.config_cycles_full *= 2.0;
    CHECK(loop_rate(more_cfg) < base);
    TimingParams more_nodes = p;
    more_nodes.n_nodes *= 2;
    CHECK(loop_rate(more_nodes) < base);
    TimingParams more_cost = p;
    more_cost.fourier_cost *= 2.0;
    CHECK(loop_rate(more_cost) < base);
}

TEST_CASE("chain traffic: best configures once, worst per test") {
    std::vector<DeviceScanModel> chain{
        {.name = "a", .ir_length = 4, .boundary_cells = 16},
        {.name = "b", .ir_length = 8, .boundary_cells = 32},
    };
    const CycleCount best = cycles_vs_chain_length(chain, TimingParams::Mode::Best, 10);
    const CycleCount worst = cycles_vs_chain_length(chain, TimingParams::Mode::Worst, 10);
    CHECK(best == cycles_vs_chain_length(chain, TimingParams::Mode::Worst, 1));
    CHECK(worst.tck_cycles == 10 * best.tck_cycles);

    // longer chains strictly cost more in both modes
    std::vector<DeviceScanModel> longer = chain;
    longer[1].boundary_cells *= 2;
    CHECK(cycles_vs_chain_length(longer, TimingParams::Mode::Best, 10).tck_cycles >
          best.tck_cycles);
    CHECK(cycles_vs_chain_length(longer, TimingParams::Mode::Worst, 10).tck_cycles >
          worst.tck_cycles);
}
