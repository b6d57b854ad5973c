// SPDX-License-Identifier: Apache-2.0
#ifndef ECUSIM_WAVEFORM_HPP
#define ECUSIM_WAVEFORM_HPP

#include <limits>
#include <memory>
#include <variant>
#include <vector>

namespace ecusim {

/// Analytic time-domain signal descriptors. A waveform is a closed-form
/// value generator, not a sample array: point queries and edge positions are
/// exact to double precision, which is what lets duty-cycle measurement
/// resolve far below any practical sampling rate.
///
/// Values are volts, times are seconds, frequencies are Hz.

struct Waveform;
using WaveformPtr = std::shared_ptr<const Waveform>;

struct DcShape {
    double level = 0.0;
};

struct SineShape {
    double amplitude = 0.0;
    double frequency = 0.0; // Hz
    double phase = 0.0;     // radians
    double offset = 0.0;    // volts
};

struct PwmShape {
    double low = 0.0;
    double high = 0.0;
    double frequency = 0.0;
    double duty = 0.5; // (0,1); degenerate values collapse to DC at construction
};

struct PulseTrainShape {
    double low = 0.0;
    double high = 0.0;
    std::vector<double> edge_times; // strictly increasing; first edge rises
};

struct HighZShape {};

struct SumShape {
    WaveformPtr lhs;
    WaveformPtr rhs;
};

enum class EdgeDir { Rising, Falling };

struct Edge {
    double time = 0.0;
    EdgeDir dir = EdgeDir::Rising;
};

class Waveform {
public:
    using Shape = std::variant<DcShape, SineShape, PwmShape, PulseTrainShape, HighZShape, SumShape>;

    Waveform() : shape_(DcShape{0.0}) {}

    static Waveform dc(double level);
    static Waveform sine(double amplitude, double frequency, double offset = 0.0, double phase = 0.0);
    /// duty <= 0 collapses to dc(low), duty >= 1 to dc(high).
    static Waveform pwm(double low, double high, double frequency, double duty);
    /// edge_times must be strictly increasing; the signal starts at `low`.
    static Waveform pulses(double low, double high, std::vector<double> edge_times);
    static Waveform high_z();
    static Waveform sum(Waveform lhs, Waveform rhs);

    bool is_high_z() const { return std::holds_alternative<HighZShape>(shape_); }

    /// Exact value at time t. Throws UnresolvedHighZ on a HighZ waveform;
    /// high-impedance sources must be resolved by a pull network or the bus
    /// idle rule before sampling.
    double sample(double t) const;

    /// All transitions in [t0, t1), sorted ascending. Only PWM and pulse
    /// trains have edges; every other shape returns an empty list.
    std::vector<Edge> edges_in(double t0, double t1) const;

    /// AC gain and phase lag applied post-hoc, as a filter stage would.
    /// Gain scales the deviation from the shape's DC mean; phase lag (radians
    /// at the fundamental) delays periodic shapes by lag/(2*pi*f).
    Waveform attenuated(double gain, double phase_lag_radians) const;

    /// Hard output limits applied at sampling time.
    Waveform clipped(double lo, double hi) const;

    /// Absolute multiplicative drift: every sampled value scales by gain.
    Waveform scaled(double gain) const;

    /// Exact mean over [t0, t1] where a closed form exists; falls back to a
    /// fine numeric rule only when clipping actually bites a smooth shape.
    double mean(double t0, double t1) const;

    /// Conservative output range estimate (pre-clip values, post-attenuation).
    double min_value() const;
    double max_value() const;

    /// True if the waveform is piecewise constant between its edges.
    bool piecewise_constant() const;

    /// Fundamental frequency in Hz, or 0 when undefined (DC, pulse trains,
    /// fully general sums).
    double fundamental() const;

    /// Peak deviation from the DC mean; crude amplitude measure used for
    /// no-signal tests.
    double swing() const;

    const Shape& shape() const { return shape_; }
    double attenuation() const { return attenuation_; }
    double phase_lag() const { return phase_lag_; }
    double clip_lo() const { return clip_lo_; }
    double clip_hi() const { return clip_hi_; }
    bool has_clip() const;

private:
    explicit Waveform(Shape s) : shape_(std::move(s)) {}

    double raw_sample(double t) const; // pre-clip, post-attenuation
    double dc_mean_of_shape() const;
    double delay_seconds() const;

    Shape shape_;
    double attenuation_ = 1.0; // AC gain
    double phase_lag_ = 0.0;   // radians at the fundamental
    double clip_lo_ = -std::numeric_limits<double>::infinity();
    double clip_hi_ = std::numeric_limits<double>::infinity();
};

} // namespace ecusim

#endif
