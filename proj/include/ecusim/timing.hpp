// SPDX-License-Identifier: Apache-2.0
#ifndef ECUSIM_TIMING_HPP
#define ECUSIM_TIMING_HPP

#include <cstddef>

#include "ecusim/measure.hpp"
#include "ecusim/tap.hpp"

namespace ecusim {

/// Analytic test-loop timing: every test costs t_total = t_con + t_test,
/// where t_con is scan-chain configuration time and t_test the measurement
/// itself. Worst case reconfigures the whole chain before every test; best
/// case pays one initial configuration for the entire sweep.
struct TimingParams {
    enum class Mode { Best, Worst };

    double f_tck = 16e6;          // test master clock, Hz
    double adc_capture = 7e-6;    // seconds per DC capture
    double fourier_cost = 0.100;  // seconds for low-frequency spectral analysis
    std::size_t n_nodes = 10;     // monitored circuit nodes per sweep
    double config_cycles_full = 86080.0;     // TCK cycles, full per-test reconfiguration
    double config_cycles_initial = 103460.0; // TCK cycles, one-time sweep setup
    Mode mode = Mode::Worst;

    void validate() const;
};

struct TimingReport {
    double t_con = 0.0;
    double t_test = 0.0;
    double t_total = 0.0;  // t_con + t_test, exactly
    double loop_rate = 0.0; // full-sweep repetitions per second
};

/// Per-test report. In best mode the initial configuration is amortized over
/// the sweep's nodes; in worst mode every test pays the full reconfiguration.
/// `window` is the measurement window for duty/interconnect/spectrum tests.
TimingReport t_total(const TimingParams& p, TestKind kind, double window = 0.010);

/// Sweep repetition rate. Best: 1/(c_init/f + n*adc). Worst, with spectral
/// analysis on every node: 1/(n*(c_full/f + fourier)).
double loop_rate(const TimingParams& p);

/// Configuration cycle count that makes loop_rate hit a target in best mode:
/// solves 1/(c/f + n*adc) = target for c.
double calibrate_initial_cycles(double f_tck, std::size_t n_nodes, double adc_capture,
                                double target_hz);

/// Worst-mode counterpart: solves 1/(n*(c/f + fourier)) = target for c.
double calibrate_full_cycles(double f_tck, std::size_t n_nodes, double fourier_cost,
                             double target_hz);

/// Scan-chain traffic for a monitoring pass. Best case configures once; the
/// worst case reconfigures before each of the n_tests.
CycleCount cycles_vs_chain_length(const std::vector<DeviceScanModel>& chain,
                                  TimingParams::Mode mode, std::size_t n_tests);

} // namespace ecusim

#endif
