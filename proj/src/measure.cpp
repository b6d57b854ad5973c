// SPDX-License-Identifier: Apache-2.0
#include "ecusim/measure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ecusim/errors.hpp"
#include "ecusim/rng.hpp"

namespace ecusim {

const char* to_string(TestKind k) {
    switch (k) {
    case TestKind::Dc: return "dc";
    case TestKind::Interconnect: return "interconnect";
    case TestKind::Duty: return "duty";
    case TestKind::Spectrum: return "spectrum";
    }
    return "?";
}

const char* to_string(Detectability d) {
    switch (d) {
    case Detectability::Detectable: return "Yes";
    case Detectability::Intermittent: return "Intermittent";
    case Detectability::NotDetectable: return "No";
    }
    return "?";
}

void ComparatorConfig::validate(double noise_bound) const {
    if (threshold <= noise_bound)
        throw std::invalid_argument("comparator threshold must exceed the noise bound");
    if (hf_filter_cutoff <= 0.0)
        throw std::invalid_argument("comparator filter cutoff must be positive");
}

namespace {

// Collect the sorted breakpoints of both signals in [t0, t1).
std::vector<double> breakpoints(const Waveform& a, const Waveform& b, double t0, double t1) {
    std::vector<double> cuts{t0, t1};
    for (const Edge& e : a.edges_in(t0, t1)) cuts.push_back(e.time);
    for (const Edge& e : b.edges_in(t0, t1)) cuts.push_back(e.time);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    return cuts;
}

} // namespace

bool diff_compare(const Waveform& at1, const Waveform& at2, const ComparatorConfig& cfg,
                  double t0, double t1) {
    cfg.validate();
    if (!(t0 < t1)) throw std::invalid_argument("diff_compare requires t0 < t1");
    const double min_run = 1.0 / cfg.hf_filter_cutoff;
    const bool exact = at1.piecewise_constant() && at2.piecewise_constant();
    const auto cuts = breakpoints(at1, at2, t0, t1);

    double run = 0.0; // accumulated above-threshold time across pieces
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i], b = cuts[i + 1];
        if (b <= a) continue;
        if (exact) {
            const double mid = 0.5 * (a + b);
            const double d = std::abs(at1.sample(mid) - at2.sample(mid));
            if (d > cfg.threshold) {
                run += b - a;
                if (run > min_run) return true;
            } else {
                run = 0.0;
            }
        } else {
            // smooth content: scan the piece at a resolution well below the
            // shortest pulse the filter can pass
            const double dt = std::min(min_run / 16.0, (b - a));
            for (double t = a; t < b; t += dt) {
                const double d = std::abs(at1.sample(t) - at2.sample(t));
                if (d > cfg.threshold) {
                    run += dt;
                    if (run > min_run) return true;
                } else {
                    run = 0.0;
                }
            }
        }
    }
    return false;
}

double measure_dc(const Waveform& w, double t0, double t1, std::uint64_t seed,
                  double noise_bound) {
    if (!(t1 - t0 >= kAdcCapture - 1e-15))
        throw std::invalid_argument("dc measurement window shorter than one ADC capture");
    SplitMix64 rng(seed);
    return w.mean(t0, t1) + rng.uniform(-noise_bound, noise_bound);
}

double measure_duty(const Waveform& w, double t0, double t1) {
    const auto edges = w.edges_in(t0, t1);
    std::vector<double> rising, falling;
    for (const Edge& e : edges)
        (e.dir == EdgeDir::Rising ? rising : falling).push_back(e.time);
    if (rising.size() < 2) throw NoEdges();

    // average over the full periods present in the window
    double acc = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i + 1 < rising.size(); ++i) {
        const double r0 = rising[i], r1 = rising[i + 1];
        auto it = std::lower_bound(falling.begin(), falling.end(), r0);
        if (it == falling.end() || *it >= r1) continue;
        acc += (*it - r0) / (r1 - r0);
        ++n;
    }
    if (n < 2) throw NoEdges();
    return acc / static_cast<double>(n);
}

SpectrumResult measure_spectrum(const Waveform& w, double t0, double t1, double fourier_cost,
                                double noise_bound) {
    if (!(t0 < t1)) throw std::invalid_argument("spectrum window must be non-empty");
    const double len = t1 - t0;
    if (w.swing() < 2.0 * noise_bound) throw NoSignal();

    double fundamental = w.fundamental();
    if (fundamental <= 0.0) {
        // pulse trains: fundamental from the mean rising-edge spacing
        const auto edges = w.edges_in(t0, t1);
        std::vector<double> rising;
        for (const Edge& e : edges)
            if (e.dir == EdgeDir::Rising) rising.push_back(e.time);
        if (rising.size() < 2) throw NoSignal();
        fundamental = static_cast<double>(rising.size() - 1) / (rising.back() - rising.front());
    }
    if (len < 10.0 / fundamental - 1e-12)
        throw std::invalid_argument("spectrum window must cover at least 10 periods");

    SpectrumResult r;
    r.fundamental = fundamental;
    r.cost = (fundamental <= 100.0) ? std::max(len, fourier_cost) : len;
    return r;
}

Detectability classify_detectability(const std::vector<bool>& history) {
    if (history.empty()) throw std::invalid_argument("empty detectability history");
    const bool any = std::any_of(history.begin(), history.end(), [](bool b) { return b; });
    const bool all = std::all_of(history.begin(), history.end(), [](bool b) { return b; });
    if (all) return Detectability::Detectable;
    if (any) return Detectability::Intermittent;
    return Detectability::NotDetectable;
}

} // namespace ecusim
