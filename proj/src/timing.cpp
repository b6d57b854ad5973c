// SPDX-License-Identifier: Apache-2.0
#include "ecusim/timing.hpp"

#include <algorithm>
#include <stdexcept>

namespace ecusim {

void TimingParams::validate() const {
    if (f_tck <= 0 || adc_capture <= 0 || fourier_cost <= 0)
        throw std::invalid_argument("timing parameters must be positive");
    if (n_nodes < 1) throw std::invalid_argument("need at least one monitored node");
    if (config_cycles_full < 0 || config_cycles_initial < 0)
        throw std::invalid_argument("configuration cycle counts must be >= 0");
}

TimingReport t_total(const TimingParams& p, TestKind kind, double window) {
    p.validate();
    TimingReport r;
    r.t_con = (p.mode == TimingParams::Mode::Worst)
                  ? p.config_cycles_full / p.f_tck
                  : p.config_cycles_initial / (p.f_tck * static_cast<double>(p.n_nodes));
    switch (kind) {
    case TestKind::Dc: r.t_test = p.adc_capture; break;
    case TestKind::Interconnect:
    case TestKind::Duty: r.t_test = window; break;
    case TestKind::Spectrum: r.t_test = std::max(window, p.fourier_cost); break;
    }
    r.t_total = r.t_con + r.t_test;
    r.loop_rate = 1.0 / (static_cast<double>(p.n_nodes) * r.t_total);
    return r;
}

double loop_rate(const TimingParams& p) {
    p.validate();
    const double n = static_cast<double>(p.n_nodes);
    if (p.mode == TimingParams::Mode::Best)
        return 1.0 / (p.config_cycles_initial / p.f_tck + n * p.adc_capture);
    return 1.0 / (n * (p.config_cycles_full / p.f_tck + p.fourier_cost));
}

double calibrate_initial_cycles(double f_tck, std::size_t n_nodes, double adc_capture,
                                double target_hz) {
    if (target_hz <= 0) throw std::invalid_argument("target rate must be positive");
    const double c = f_tck * (1.0 / target_hz - static_cast<double>(n_nodes) * adc_capture);
    if (c < 0) throw std::invalid_argument("target rate unreachable: measurement time dominates");
    return c;
}

double calibrate_full_cycles(double f_tck, std::size_t n_nodes, double fourier_cost,
                             double target_hz) {
    if (target_hz <= 0) throw std::invalid_argument("target rate must be positive");
    const double c =
        f_tck * (1.0 / (target_hz * static_cast<double>(n_nodes)) - fourier_cost);
    if (c < 0) throw std::invalid_argument("target rate unreachable: analysis time dominates");
    return c;
}

CycleCount cycles_vs_chain_length(const std::vector<DeviceScanModel>& chain,
                                  TimingParams::Mode mode, std::size_t n_tests) {
    if (chain.empty()) throw std::invalid_argument("empty scan chain");
    const CycleCount once = configure_cost(chain);
    if (mode == TimingParams::Mode::Best || n_tests <= 1) return once;
    return CycleCount{once.tck_cycles * n_tests};
}

} // namespace ecusim
