// SPDX-License-Identifier: Apache-2.0
#ifndef ECUSIM_SCENARIO_HPP
#define ECUSIM_SCENARIO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ecusim/ecu.hpp"
#include "ecusim/manager.hpp"
#include "ecusim/tap.hpp"

namespace ecusim {

struct IdrDecl {
    std::vector<std::string> drivers;
    std::vector<std::string> logicals;
    double frequency = 100.0;
};

/// A fully validated run description: netlist, scan chain, bus layout, fault
/// and test schedules, and the run block.
struct Scenario {
    EcuNetlist net; // faults not yet injected; see `faults`
    std::vector<DeviceScanModel> chain;
    std::size_t bus_pairs = 1;
    std::vector<BusSegment> segments; // empty means auto-planned
    std::optional<IdrDecl> idr;
    std::vector<Fault> faults;
    std::vector<TestDescriptor> tests;

    double duration = 1.0;
    std::uint64_t seed = 0;
    double f_tck = 16e6;
    /// When false, detected failures raise alerts but are never routed
    /// around; monitoring keeps its bus pair (characterization runs).
    bool auto_reconfig = true;
};

/// Parse and validate the line-oriented scenario grammar:
///
///   [netlist]
///   node <name> class=<...> critical=<yes|no> source=<expr> [bias=<v>]
///   link <name> from=<node> to=<node> abm=<yes|no>
///   device <name> kind=<...> ports=<node,...>
///   [chain]
///   device <name> ir=<bits> cells=<count>
///   [buses]
///   pairs=<n>
///   segment <name> pair=<i> nodes=<node,...>
///   [idr]
///   drivers=<name,...> logicals=<name,...> freq=<hz>
///   [faults]
///   at=<s> kind=<open|stuck0|stuck1|short_gnd|drift:<gain>|power_loss> target=<name>
///   [tests]
///   test <id> kind=<dc|interconnect|duty|spectrum> target=<...> ref=<v> tol=<v> period=<s>
///   [run]
///   duration=<s> seed=<u64> tck=<hz>
///
/// Waveform expressions: dc(<v>), sine(<amp>,<hz>[,<offset>]),
/// pwm(<lo>,<hi>,<hz>,<duty>), pulses(<lo>,<hi>,<t1>,<t2>,...), hiz.
///
/// Throws ParseError (with line number) or DanglingReference.
Scenario parse_scenario(const std::string& text);

Scenario parse_scenario_file(const std::string& path);

/// Waveform expression parser, exposed for tools and tests.
Waveform parse_waveform_expr(const std::string& expr);

} // namespace ecusim

#endif
