// SPDX-License-Identifier: Apache-2.0
#include "ecusim/analog.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ecusim/errors.hpp"

namespace ecusim {

double AbmTransferModel::gain_at(double f) const {
    const double r = f / cutoff;
    return 1.0 / std::sqrt(1.0 + r * r);
}

double AbmTransferModel::phase_lag_at(double f) const { return std::atan(f / cutoff); }

Waveform abm_transfer(const Waveform& w, const AbmTransferModel& model) {
    if (w.is_high_z()) throw UnresolvedHighZ();
    const double f = w.fundamental();
    Waveform out = f > 0.0 ? w.attenuated(model.gain_at(f), model.phase_lag_at(f)) : w;
    return out.clipped(model.v_min, model.v_max);
}

std::optional<std::size_t> AnalogBus::segment_of(const std::string& node) const {
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const auto& s = segments[i];
        if (std::find(s.nodes.begin(), s.nodes.end(), node) != s.nodes.end()) return i;
    }
    return std::nullopt;
}

const BusSegment* AnalogBus::segment_named(const std::string& name) const {
    for (const auto& s : segments)
        if (s.name == name) return &s;
    return nullptr;
}

void AnalogBus::connect(std::size_t pair, BusConnection c) {
    if (pair >= pairs.size()) throw std::out_of_range("bus pair index out of range");
    if (c.line != 1 && c.line != 2) throw std::invalid_argument("bus line must be 1 or 2");
    pairs[pair].connections.push_back(std::move(c));
}

void AnalogBus::clear_pair(std::size_t pair) {
    if (pair >= pairs.size()) throw std::out_of_range("bus pair index out of range");
    pairs[pair].connections.clear();
}

void AnalogBus::link(std::size_t pair, bool on) {
    if (pair >= pairs.size()) throw std::out_of_range("bus pair index out of range");
    pairs[pair].linked = on;
}

ResolvedPair bus_resolve(const AnalogBus& bus, std::size_t pair_index,
                         const std::function<Waveform(const std::string&)>& node_source) {
    if (pair_index >= bus.pairs.size()) throw std::out_of_range("bus pair index out of range");
    const BusPair& p = bus.pairs[pair_index];

    const Waveform* drv[3] = {nullptr, nullptr, nullptr};
    std::vector<Waveform> held;
    held.reserve(p.connections.size());
    for (const auto& c : p.connections) {
        if (c.role != BusRole::Drive) continue;
        held.push_back(node_source(c.node));
        if (drv[c.line] != nullptr && !p.linked)
            throw BusConflict("two drivers on AT" + std::to_string(c.line) + " of pair " +
                              std::to_string(pair_index));
        drv[c.line] = &held.back();
    }

    const Waveform idle = Waveform::dc(0.0);
    if (p.linked) {
        // One shared wire: exactly one driver is expected across both lines.
        const Waveform* d = drv[1] ? drv[1] : drv[2];
        if (drv[1] && drv[2]) throw BusConflict("linked pair driven from both sides");
        Waveform shared = d ? abm_transfer(*d, bus.abm) : idle;
        return {shared, shared};
    }
    ResolvedPair out{drv[1] ? abm_transfer(*drv[1], bus.abm) : idle,
                     drv[2] ? abm_transfer(*drv[2], bus.abm) : idle};
    return out;
}

AbmSwitchState abm_switch_state(const BusPair& pair, const std::string& node) {
    AbmSwitchState s;
    for (const auto& c : pair.connections) {
        if (c.node != node) continue;
        if (c.line == 1) s.to_at1 = true;
        if (c.line == 2) s.to_at2 = true;
    }
    if (pair.linked && (s.to_at1 || s.to_at2)) {
        // a linked pair is one wire: the ABM sees both lines
        s.to_at1 = s.to_at2 = true;
    }
    return s;
}

Sta400Block route_sta400(Sta400Block block, int channel, Sta400Mode mode) {
    if (channel != 0 && channel != 1)
        throw BadChannel("STA400 channel must be 0 or 1, got " + std::to_string(channel));
    block.channels[channel] = mode;
    return block;
}

} // namespace ecusim
