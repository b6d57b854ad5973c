// SPDX-License-Identifier: Apache-2.0
#ifndef ECUSIM_MEASURE_HPP
#define ECUSIM_MEASURE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ecusim/waveform.hpp"

namespace ecusim {

enum class TestKind { Dc, Interconnect, Duty, Spectrum };

const char* to_string(TestKind k);

struct MeasurementResult {
    std::string test_id;
    TestKind kind = TestKind::Dc;
    double value = 0.0;    // volts / duty fraction / Hz
    bool triggered = false; // interconnect comparator output
    double window_start = 0.0;
    double window_end = 0.0;
    double cost = 0.0; // seconds of measurement time
};

/// Comparator stage after the differential amplifier. The threshold must sit
/// above the DC noise bound so noise alone can never trigger; the high
/// frequency filter drops difference pulses shorter than 1/cutoff (skew and
/// propagation-delay peaks).
struct ComparatorConfig {
    double threshold = 0.1;        // volts
    double hf_filter_cutoff = 1e5; // Hz

    void validate(double noise_bound = 0.010) const;
};

/// True when the filtered |at1 - at2| stays above threshold for longer than
/// 1/hf_filter_cutoff anywhere in the window. Symmetric in its inputs.
bool diff_compare(const Waveform& at1, const Waveform& at2, const ComparatorConfig& cfg,
                  double t0, double t1);

/// Mean of the signal over the window plus uniform noise in +/-noise_bound.
/// The window must cover at least one ADC capture (7 us).
double measure_dc(const Waveform& w, double t0, double t1, std::uint64_t seed,
                  double noise_bound = 0.010);

constexpr double kAdcCapture = 7e-6; // seconds

/// Duty cycle from exact edge positions; needs at least two full periods in
/// the window. Throws NoEdges on constant signals.
double measure_duty(const Waveform& w, double t0, double t1);

struct SpectrumResult {
    double fundamental = 0.0; // Hz
    double cost = 0.0;        // seconds
};

/// Dominant spectral line of the signal. Low-frequency analysis (<= 100 Hz)
/// costs at least the 100 ms Fourier budget. Throws NoSignal when the
/// amplitude is below twice the noise bound.
SpectrumResult measure_spectrum(const Waveform& w, double t0, double t1,
                                double fourier_cost = 0.100, double noise_bound = 0.010);

enum class Detectability { Detectable, Intermittent, NotDetectable };

const char* to_string(Detectability d);

/// Fold a per-window trigger history into the detectability verdict: all
/// windows triggered, a mix, or none.
Detectability classify_detectability(const std::vector<bool>& history);

} // namespace ecusim

#endif
