// SPDX-License-Identifier: Apache-2.0
#include "ecusim/waveform.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ecusim/errors.hpp"

namespace ecusim {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double clampv(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

} // namespace

Waveform Waveform::dc(double level) { return Waveform(Shape{DcShape{level}}); }

Waveform Waveform::sine(double amplitude, double frequency, double offset, double phase) {
    if (frequency < 0.0) throw std::invalid_argument("sine frequency must be >= 0");
    return Waveform(Shape{SineShape{amplitude, frequency, phase, offset}});
}

Waveform Waveform::pwm(double low, double high, double frequency, double duty) {
    if (frequency <= 0.0) throw std::invalid_argument("pwm frequency must be > 0");
    if (duty <= 0.0) return dc(low);
    if (duty >= 1.0) return dc(high);
    return Waveform(Shape{PwmShape{low, high, frequency, duty}});
}

Waveform Waveform::pulses(double low, double high, std::vector<double> edge_times) {
    for (std::size_t i = 1; i < edge_times.size(); ++i) {
        if (edge_times[i] <= edge_times[i - 1])
            throw std::invalid_argument("pulse edge times must be strictly increasing");
    }
    return Waveform(Shape{PulseTrainShape{low, high, std::move(edge_times)}});
}

Waveform Waveform::high_z() { return Waveform(Shape{HighZShape{}}); }

Waveform Waveform::sum(Waveform lhs, Waveform rhs) {
    if (lhs.is_high_z() || rhs.is_high_z())
        throw std::invalid_argument("cannot sum a high-impedance waveform");
    SumShape s;
    s.lhs = std::make_shared<Waveform>(std::move(lhs));
    s.rhs = std::make_shared<Waveform>(std::move(rhs));
    return Waveform(Shape{std::move(s)});
}

bool Waveform::has_clip() const {
    return clip_lo_ > -std::numeric_limits<double>::infinity() ||
           clip_hi_ < std::numeric_limits<double>::infinity();
}

double Waveform::dc_mean_of_shape() const {
    struct V {
        const Waveform& w;
        double operator()(const DcShape& s) const { return s.level; }
        double operator()(const SineShape& s) const { return s.offset; }
        double operator()(const PwmShape& s) const { return s.low + s.duty * (s.high - s.low); }
        double operator()(const PulseTrainShape& s) const { return 0.5 * (s.low + s.high); }
        double operator()(const HighZShape&) const { throw UnresolvedHighZ(); }
        double operator()(const SumShape& s) const {
            return s.lhs->dc_mean_of_shape() + s.rhs->dc_mean_of_shape();
        }
    };
    return std::visit(V{*this}, shape_);
}

double Waveform::delay_seconds() const {
    if (phase_lag_ == 0.0) return 0.0;
    const double f = fundamental();
    if (f <= 0.0) return 0.0;
    return phase_lag_ / (kTwoPi * f);
}

double Waveform::raw_sample(double t) const {
    const double ts = t - delay_seconds();
    struct V {
        double t;
        double operator()(const DcShape& s) const { return s.level; }
        double operator()(const SineShape& s) const {
            return s.offset + s.amplitude * std::sin(kTwoPi * s.frequency * t + s.phase);
        }
        double operator()(const PwmShape& s) const {
            double x = t * s.frequency;
            double frac = x - std::floor(x);
            return frac < s.duty ? s.high : s.low;
        }
        double operator()(const PulseTrainShape& s) const {
            // count edges at or before t; even count -> low (starts low)
            auto it = std::upper_bound(s.edge_times.begin(), s.edge_times.end(), t);
            auto n = static_cast<std::size_t>(it - s.edge_times.begin());
            return (n % 2 == 0) ? s.low : s.high;
        }
        double operator()(const HighZShape&) const { throw UnresolvedHighZ(); }
        double operator()(const SumShape& s) const { return s.lhs->sample(t) + s.rhs->sample(t); }
    };
    const double raw = std::visit(V{ts}, shape_);
    if (attenuation_ == 1.0) return raw;
    const double m = dc_mean_of_shape();
    return m + attenuation_ * (raw - m);
}

double Waveform::sample(double t) const {
    return clampv(raw_sample(t), clip_lo_, clip_hi_);
}

std::vector<Edge> Waveform::edges_in(double t0, double t1) const {
    if (!(t0 < t1)) throw std::invalid_argument("edges_in requires t0 < t1");
    std::vector<Edge> out;
    const double delay = delay_seconds();
    if (const auto* p = std::get_if<PwmShape>(&shape_)) {
        // Levels can collapse under clipping, leaving a constant signal.
        const double lo = clampv(p->low, clip_lo_, clip_hi_);
        const double hi = clampv(p->high, clip_lo_, clip_hi_);
        if (lo == hi) return out;
        // rising at k/f + delay, falling at (k+duty)/f + delay
        const double f = p->frequency;
        const double a = t0 - delay, b = t1 - delay;
        auto first_k = static_cast<long long>(std::floor(a * f)) - 1;
        for (long long k = first_k;; ++k) {
            const double rise = static_cast<double>(k) / f;
            const double fall = (static_cast<double>(k) + p->duty) / f;
            if (rise >= b && fall >= b) break;
            if (rise >= a && rise < b) out.push_back({rise + delay, EdgeDir::Rising});
            if (fall >= a && fall < b) out.push_back({fall + delay, EdgeDir::Falling});
        }
    } else if (const auto* pt = std::get_if<PulseTrainShape>(&shape_)) {
        const double lo = clampv(pt->low, clip_lo_, clip_hi_);
        const double hi = clampv(pt->high, clip_lo_, clip_hi_);
        if (lo == hi) return out;
        for (std::size_t i = 0; i < pt->edge_times.size(); ++i) {
            const double t = pt->edge_times[i] + delay;
            if (t >= t0 && t < t1)
                out.push_back({t, (i % 2 == 0) ? EdgeDir::Rising : EdgeDir::Falling});
        }
    }
    std::sort(out.begin(), out.end(), [](const Edge& a, const Edge& b) { return a.time < b.time; });
    return out;
}

Waveform Waveform::attenuated(double gain, double phase_lag_radians) const {
    if (const auto* s = std::get_if<SumShape>(&shape_)) {
        // Filtering is linear: distribute over the sum so each component
        // keeps its own fundamental-dependent response.
        return sum(s->lhs->attenuated(gain, phase_lag_radians),
                   s->rhs->attenuated(gain, phase_lag_radians));
    }
    Waveform w = *this;
    w.attenuation_ *= gain;
    if (fundamental() > 0.0) w.phase_lag_ += phase_lag_radians;
    return w;
}

Waveform Waveform::clipped(double lo, double hi) const {
    Waveform w = *this;
    w.clip_lo_ = std::max(w.clip_lo_, lo);
    w.clip_hi_ = std::min(w.clip_hi_, hi);
    return w;
}

Waveform Waveform::scaled(double gain) const {
    struct V {
        double g;
        const Waveform& w;
        Waveform operator()(const DcShape& s) const { return dc(s.level * g); }
        Waveform operator()(const SineShape& s) const {
            return sine(s.amplitude * g, s.frequency, s.offset * g, s.phase);
        }
        Waveform operator()(const PwmShape& s) const {
            return pwm(s.low * g, s.high * g, s.frequency, s.duty);
        }
        Waveform operator()(const PulseTrainShape& s) const {
            return pulses(s.low * g, s.high * g, s.edge_times);
        }
        Waveform operator()(const HighZShape&) const { return high_z(); }
        Waveform operator()(const SumShape& s) const {
            return sum(s.lhs->scaled(g), s.rhs->scaled(g));
        }
    };
    Waveform out = std::visit(V{gain, *this}, shape_);
    out.attenuation_ = attenuation_;
    out.phase_lag_ = phase_lag_;
    out.clip_lo_ = clip_lo_;
    out.clip_hi_ = clip_hi_;
    return out;
}

bool Waveform::piecewise_constant() const {
    struct V {
        bool operator()(const DcShape&) const { return true; }
        bool operator()(const SineShape& s) const { return s.amplitude == 0.0; }
        bool operator()(const PwmShape&) const { return true; }
        bool operator()(const PulseTrainShape&) const { return true; }
        bool operator()(const HighZShape&) const { return false; }
        bool operator()(const SumShape& s) const {
            return s.lhs->piecewise_constant() && s.rhs->piecewise_constant();
        }
    };
    return std::visit(V{}, shape_);
}

double Waveform::fundamental() const {
    struct V {
        double operator()(const DcShape&) const { return 0.0; }
        double operator()(const SineShape& s) const { return s.amplitude != 0.0 ? s.frequency : 0.0; }
        double operator()(const PwmShape& s) const { return s.frequency; }
        double operator()(const PulseTrainShape&) const { return 0.0; }
        double operator()(const HighZShape&) const { return 0.0; }
        double operator()(const SumShape& s) const {
            // dominant component wins
            return s.lhs->swing() >= s.rhs->swing() ? s.lhs->fundamental() : s.rhs->fundamental();
        }
    };
    return std::visit(V{}, shape_);
}

double Waveform::swing() const {
    struct V {
        const Waveform& w;
        double operator()(const DcShape&) const { return 0.0; }
        double operator()(const SineShape& s) const { return std::abs(s.amplitude); }
        double operator()(const PwmShape& s) const { return 0.5 * std::abs(s.high - s.low); }
        double operator()(const PulseTrainShape& s) const { return 0.5 * std::abs(s.high - s.low); }
        double operator()(const HighZShape&) const { return 0.0; }
        double operator()(const SumShape& s) const { return s.lhs->swing() + s.rhs->swing(); }
    };
    return attenuation_ * std::visit(V{*this}, shape_);
}

double Waveform::min_value() const {
    struct V {
        const Waveform& w;
        double operator()(const DcShape& s) const { return s.level; }
        double operator()(const SineShape& s) const {
            return s.offset - std::abs(w.attenuation_ * s.amplitude);
        }
        double operator()(const PwmShape& s) const {
            const double m = w.dc_mean_of_shape();
            return m + w.attenuation_ * (std::min(s.low, s.high) - m);
        }
        double operator()(const PulseTrainShape& s) const {
            const double m = w.dc_mean_of_shape();
            return m + w.attenuation_ * (std::min(s.low, s.high) - m);
        }
        double operator()(const HighZShape&) const { throw UnresolvedHighZ(); }
        double operator()(const SumShape& s) const { return s.lhs->min_value() + s.rhs->min_value(); }
    };
    return clampv(std::visit(V{*this}, shape_), clip_lo_, clip_hi_);
}

double Waveform::max_value() const {
    struct V {
        const Waveform& w;
        double operator()(const DcShape& s) const { return s.level; }
        double operator()(const SineShape& s) const {
            return s.offset + std::abs(w.attenuation_ * s.amplitude);
        }
        double operator()(const PwmShape& s) const {
            const double m = w.dc_mean_of_shape();
            return m + w.attenuation_ * (std::max(s.low, s.high) - m);
        }
        double operator()(const PulseTrainShape& s) const {
            const double m = w.dc_mean_of_shape();
            return m + w.attenuation_ * (std::max(s.low, s.high) - m);
        }
        double operator()(const HighZShape&) const { throw UnresolvedHighZ(); }
        double operator()(const SumShape& s) const { return s.lhs->max_value() + s.rhs->max_value(); }
    };
    return clampv(std::visit(V{*this}, shape_), clip_lo_, clip_hi_);
}

namespace {

// Exact integral of a piecewise-constant waveform via its edge list. The
// per-piece value is sampled at the piece midpoint, so clipping is exact too.
double integrate_piecewise(const Waveform& w, double t0, double t1) {
    auto edges = w.edges_in(t0, t1);
    double acc = 0.0;
    double prev = t0;
    for (const Edge& e : edges) {
        if (e.time > prev) acc += w.sample(0.5 * (prev + e.time)) * (e.time - prev);
        prev = e.time;
    }
    if (t1 > prev) acc += w.sample(0.5 * (prev + t1)) * (t1 - prev);
    return acc;
}

// Composite Simpson fallback for smooth shapes whose excursion crosses the
// clip rails; error is far below the measurement noise floor.
double integrate_numeric(const Waveform& w, double t0, double t1) {
    const int n = 16384; // even
    const double h = (t1 - t0) / n;
    double acc = w.sample(t0) + w.sample(t1);
    for (int i = 1; i < n; ++i) acc += w.sample(t0 + i * h) * ((i % 2) ? 4.0 : 2.0);
    return acc * h / 3.0;
}

} // namespace

double Waveform::mean(double t0, double t1) const {
    if (!(t0 < t1)) throw std::invalid_argument("mean requires t0 < t1");
    const double len = t1 - t0;
    if (piecewise_constant()) {
        // covers DC, PWM, pulse trains and sums thereof, clipped or not
        if (std::holds_alternative<SumShape>(shape_) || std::holds_alternative<SineShape>(shape_)) {
            // piecewise-constant sums have no merged edge list; integrate via
            // sampling at combined breakpoints
            const auto* s = std::get_if<SumShape>(&shape_);
            if (s && !has_clip() && attenuation_ == 1.0)
                return s->lhs->mean(t0, t1) + s->rhs->mean(t0, t1);
            if (s) {
                // merge both edge lists and sample midpoints
                auto e1 = s->lhs->edges_in(t0, t1);
                auto e2 = s->rhs->edges_in(t0, t1);
                std::vector<double> cuts{t0, t1};
                for (const auto& e : e1) cuts.push_back(e.time);
                for (const auto& e : e2) cuts.push_back(e.time);
                std::sort(cuts.begin(), cuts.end());
                double acc = 0.0;
                for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
                    if (cuts[i + 1] > cuts[i])
                        acc += sample(0.5 * (cuts[i] + cuts[i + 1])) * (cuts[i + 1] - cuts[i]);
                }
                return acc / len;
            }
            return sample(t0); // zero-amplitude sine
        }
        return integrate_piecewise(*this, t0, t1) / len;
    }
    if (const auto* s = std::get_if<SineShape>(&shape_)) {
        const double lo = s->offset - std::abs(attenuation_ * s->amplitude);
        const double hi = s->offset + std::abs(attenuation_ * s->amplitude);
        if (lo >= clip_lo_ && hi <= clip_hi_) {
            // closed form: offset + A*g * mean of sin over the window
            if (s->frequency == 0.0)
                return s->offset + attenuation_ * s->amplitude * std::sin(s->phase);
            const double wv = kTwoPi * s->frequency;
            const double d = delay_seconds();
            const double a = wv * (t0 - d) + s->phase;
            const double b = wv * (t1 - d) + s->phase;
            return s->offset + attenuation_ * s->amplitude * (std::cos(a) - std::cos(b)) / (b - a);
        }
        return integrate_numeric(*this, t0, t1) / len;
    }
    if (const auto* s = std::get_if<SumShape>(&shape_)) {
        if (!has_clip() && attenuation_ == 1.0) return s->lhs->mean(t0, t1) + s->rhs->mean(t0, t1);
    }
    return integrate_numeric(*this, t0, t1) / len;
}

} // namespace ecusim
