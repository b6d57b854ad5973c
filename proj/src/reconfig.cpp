// SPDX-License-Identifier: Apache-2.0
#include "ecusim/reconfig.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "ecusim/errors.hpp"

namespace ecusim {

namespace {

bool is_sensor_port(const EcuNetlist& net, const std::string& node) {
    for (const auto& d : net.devices()) {
        if (d.kind != DeviceKind::Hall && d.kind != DeviceKind::Switch) continue;
        if (std::find(d.ports.begin(), d.ports.end(), node) != d.ports.end()) return true;
    }
    return false;
}

} // namespace

std::vector<BusSegment> plan_segments(const EcuNetlist& net, std::size_t pairs) {
    if (pairs < 1) throw std::invalid_argument("need at least one bus pair");

    // ABM access = endpoint of an abm-equipped interconnect, plus any device
    // port (those are the probe/injection points of interest).
    std::vector<std::string> abm_nodes;
    std::set<std::string> seen;
    auto add = [&](const std::string& n) {
        if (seen.insert(n).second) abm_nodes.push_back(n);
    };
    for (const auto& l : net.links()) {
        if (!l.has_abm) continue;
        add(l.from);
        add(l.to);
    }
    for (const auto& d : net.devices())
        for (const auto& p : d.ports) add(p);
    if (abm_nodes.empty()) throw NoAbmNodes();

    std::vector<BusSegment> segments;
    if (pairs == 1) {
        segments.push_back({"seg0", 0, abm_nodes});
        return segments;
    }

    std::vector<std::string> sensors, actuators;
    for (const auto& n : abm_nodes)
        (is_sensor_port(net, n) ? sensors : actuators).push_back(n);

    // sensors own pair 0; actuators spread round-robin over the rest
    segments.push_back({"sensors", 0, sensors});
    const std::size_t act_pairs = pairs - 1;
    for (std::size_t i = 0; i < act_pairs; ++i)
        segments.push_back({"actuators" + std::to_string(i), i + 1, {}});
    for (std::size_t i = 0; i < actuators.size(); ++i)
        segments[1 + (i % act_pairs)].nodes.push_back(actuators[i]);
    return segments;
}

std::size_t bypass_capacity(std::size_t bus_lines) { return bus_lines / 2; }

bool BypassTable::pair_busy(std::size_t pair_index) const {
    for (const auto& a : active_)
        if (a.pair_index == pair_index) return true;
    return std::find(reserved_.begin(), reserved_.end(), pair_index) != reserved_.end();
}

void BypassTable::reserve_pair(std::size_t pair_index) {
    if (pair_busy(pair_index)) throw SegmentBusy("pair " + std::to_string(pair_index) + " in use");
    reserved_.push_back(pair_index);
}

void BypassTable::free_pair(std::size_t pair_index) {
    reserved_.erase(std::remove(reserved_.begin(), reserved_.end(), pair_index), reserved_.end());
}

BypassAssignment BypassTable::apply(AnalogBus& bus, EcuNetlist& net,
                                    const std::string& interconnect, double now) {
    const Interconnect* link = net.find_link(interconnect);
    if (!link) throw UnknownTarget(interconnect);

    const auto seg_from = bus.segment_of(link->from);
    const auto seg_to = bus.segment_of(link->to);
    if (!link->has_abm || !seg_from || !seg_to)
        throw NoAbmAccess(interconnect + " endpoints lack bus access");
    const std::size_t pair = bus.segments[*seg_from].pair_index;

    if (active_.size() + reserved_.size() >= bypass_capacity(bus.line_count()))
        throw CapacityExhausted("all " + std::to_string(bus.pair_count()) +
                                " bus pairs already committed");
    if (pair_busy(pair)) throw SegmentBusy("pair " + std::to_string(pair) + " in use");

    bus.clear_pair(pair);
    bus.connect(pair, {link->from, 1, BusRole::Drive});
    bus.connect(pair, {link->to, 2, BusRole::Tap});
    bus.link(pair, true);

    NodeOverride ov;
    ov.kind = NodeOverride::Kind::BypassFrom;
    ov.bypass_from = link->from;
    net.set_override(link->to, ov);

    BypassAssignment a{interconnect, pair, now};
    active_.push_back(a);
    return a;
}

void BypassTable::release(AnalogBus& bus, EcuNetlist& net, const std::string& interconnect) {
    auto it = std::find_if(active_.begin(), active_.end(),
                           [&](const BypassAssignment& a) { return a.interconnect == interconnect; });
    if (it == active_.end()) throw UnknownTarget(interconnect + " has no active bypass");
    const Interconnect* link = net.find_link(interconnect);
    bus.link(it->pair_index, false);
    bus.clear_pair(it->pair_index);
    if (link) net.clear_override(link->to);
    active_.erase(it);
}

} // namespace ecusim
