// SPDX-License-Identifier: Apache-2.0
#ifndef ECUSIM_RECONFIG_HPP
#define ECUSIM_RECONFIG_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "ecusim/analog.hpp"
#include "ecusim/ecu.hpp"

namespace ecusim {

/// A failed interconnect routed around via a linked AT1/AT2 pair.
struct BypassAssignment {
    std::string interconnect;
    std::size_t pair_index = 0;
    double since = 0.0;
};

/// Partition the netlist's ABM-accessible nodes into one segment per bus
/// pair. With two or more pairs, sensor-side nodes (ports of hall sensors and
/// switches) and actuator-side nodes land in different segments so one pair
/// can keep monitoring while another actuates. Throws NoAbmNodes when nothing
/// has analog access.
std::vector<BusSegment> plan_segments(const EcuNetlist& net, std::size_t pairs);

/// Maximum simultaneous bypasses supported by `bus_lines` individual analog
/// test bus lines: floor(lines / 2).
std::size_t bypass_capacity(std::size_t bus_lines);

/// Bypass state shared between the planner and the topology manager.
class BypassTable {
public:
    /// Route the failed interconnect over its segment's pair: driver ABM to
    /// AT1, receiver fed from AT2, pair linked, monitoring in that segment
    /// locked out. Throws SegmentBusy / NoAbmAccess / CapacityExhausted.
    BypassAssignment apply(AnalogBus& bus, EcuNetlist& net, const std::string& interconnect,
                           double now);

    /// Undo a bypass (scenario repaired the fault); monitoring resumes.
    void release(AnalogBus& bus, EcuNetlist& net, const std::string& interconnect);

    bool pair_busy(std::size_t pair_index) const;
    const std::vector<BypassAssignment>& active() const { return active_; }

    /// Extra pair reservations (signal injection) count against the same
    /// resources.
    void reserve_pair(std::size_t pair_index);
    void free_pair(std::size_t pair_index);

private:
    std::vector<BypassAssignment> active_;
    std::vector<std::size_t> reserved_;
};

} // namespace ecusim

#endif
