// SPDX-License-Identifier: Apache-2.0
#ifndef ECUSIM_ANALOG_HPP
#define ECUSIM_ANALOG_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ecusim/waveform.hpp"

namespace ecusim {

/// Switch set of one analogue boundary module. At most one of the reference
/// switches (VH/VL/G) may be closed; AT1 and AT2 may only be closed together
/// while the owning bus pair is linked for a bypass.
struct AbmSwitchState {
    bool core_disconnect = false; // SD
    bool to_at1 = false;          // SB1
    bool to_at2 = false;          // SB2
    bool to_vh = false;           // SH
    bool to_vl = false;           // SL
    bool to_ground = false;       // SG

    bool valid(bool pair_linked) const {
        const int refs = (to_vh ? 1 : 0) + (to_vl ? 1 : 0) + (to_ground ? 1 : 0);
        if (refs > 1) return false;
        if (to_at1 && to_at2 && !pair_linked) return false;
        return true;
    }
};

/// Behavioural transfer model of an ABM path: a single pole with hard output
/// rails. The three published calibration points (clean at 50 kHz, visible
/// phase at 200 kHz, -3 dB at 1 MHz) all sit on one pole at 1 MHz.
struct AbmTransferModel {
    double v_max = 3.92;          // volts
    double v_min = -0.640;        // volts
    double cutoff = 1e6;          // Hz
    double dc_noise_bound = 0.010; // volts, uniform, applied at measurement time

    double gain_at(double f) const;      // 1/sqrt(1+(f/fc)^2)
    double phase_lag_at(double f) const; // atan(f/fc), radians
};

/// Low-pass + clip. Noise is not baked in here: it is added where a
/// measurement samples the signal, so the returned descriptor stays analytic
/// and edge queries stay exact.
Waveform abm_transfer(const Waveform& w, const AbmTransferModel& model);

/// How a node hangs off a bus line.
enum class BusRole { Drive, Tap };

struct BusConnection {
    std::string node;
    int line = 1; // 1 = AT1, 2 = AT2
    BusRole role = BusRole::Tap;
};

struct BusPair {
    std::vector<BusConnection> connections;
    bool linked = false; // AT1 joined to AT2 (bypass / injection)
};

struct BusSegment {
    std::string name;
    std::size_t pair_index = 0;
    std::vector<std::string> nodes;
};

/// The AT1/AT2 pairs with their segment ownership. Each segment owns exactly
/// one pair.
struct AnalogBus {
    std::vector<BusPair> pairs;
    std::vector<BusSegment> segments;
    AbmTransferModel abm;

    explicit AnalogBus(std::size_t pair_count = 1) : pairs(pair_count) {}

    std::size_t pair_count() const { return pairs.size(); }
    /// Total individual bus lines (two per pair).
    std::size_t line_count() const { return 2 * pairs.size(); }

    std::optional<std::size_t> segment_of(const std::string& node) const;
    const BusSegment* segment_named(const std::string& name) const;

    void connect(std::size_t pair, BusConnection c);
    void clear_pair(std::size_t pair);
    void link(std::size_t pair, bool on);
};

/// Resolve both lines of a pair over a time window. `node_source` supplies
/// each connected node's waveform; drivers pass through an ABM transfer, an
/// undriven line idles at 0 V, and a linked pair carries one shared waveform.
/// Throws BusConflict when two unlinked drivers contend for a line.
struct ResolvedPair {
    Waveform at1;
    Waveform at2;
};
ResolvedPair bus_resolve(const AnalogBus& bus, std::size_t pair_index,
                         const std::function<Waveform(const std::string&)>& node_source);

/// Switch image a node's ABM needs for the pair's current connection set.
AbmSwitchState abm_switch_state(const BusPair& pair, const std::string& node);

/// One STA400 dual multiplexer splice: two channels, each either transparent
/// in the core path, tapping a bus line, or injecting from AT2.
enum class Sta400Mode { CorePath, At1Tap, At2Tap, Inject };

struct Sta400Block {
    Sta400Mode channels[2] = {Sta400Mode::CorePath, Sta400Mode::CorePath};
};

Sta400Block route_sta400(Sta400Block block, int channel, Sta400Mode mode);

} // namespace ecusim

#endif
