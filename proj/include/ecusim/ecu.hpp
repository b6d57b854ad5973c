// SPDX-License-Identifier: Apache-2.0
#ifndef ECUSIM_ECU_HPP
#define ECUSIM_ECU_HPP

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ecusim/analog.hpp"
#include "ecusim/waveform.hpp"

namespace ecusim {

/// Signal-line classes of the demonstrator. The class decides the pull
/// network used to resolve a floating node and whether the standing bias can
/// be injected on a logic-low line.
enum class SignalClass {
    DigitalHigh,
    DigitalLow,
    PullUp,
    PullDown,
    Pwm,
    AnalogGround,
    Hall,
};

const char* to_string(SignalClass c);

enum class DeviceKind { Lamp, Buzzer, HsDriver, LsDriver, Hall, Switch, Mcu, Motor };

const char* to_string(DeviceKind k);

struct EcuNode {
    std::string name;
    SignalClass cls = SignalClass::DigitalHigh;
    Waveform source;
    bool critical = false;
    double bias = 0.0; // standing bias injected on the line; 0 disables
};

struct Interconnect {
    std::string name;
    std::string from; // driver node
    std::string to;   // receiver node
    bool has_abm = false;
};

struct EcuDevice {
    std::string name;
    DeviceKind kind = DeviceKind::Lamp;
    std::vector<std::string> ports; // drivers: [control, output]; motor: [enable]
};

enum class FaultKind {
    OpenInterconnect,
    StuckLow,
    StuckHigh,
    ShortToGround,
    ParametricDrift,
    PowerLoss,
};

const char* to_string(FaultKind k);

struct Fault {
    double onset = 0.0;
    FaultKind kind = FaultKind::OpenInterconnect;
    std::string target; // node, interconnect or device name
    double drift_gain = 1.0;
};

struct DriverDiagnostics {
    bool over_current = false;
    bool over_voltage = false;
    int status_pin = 0; // over_current OR over_voltage
};

/// A node can be overridden at runtime: driven from the analog bus by an
/// injection, or re-fed from another node through two ABM transfers when an
/// interconnect is bypassed.
struct NodeOverride {
    enum class Kind { Inject, BypassFrom } kind = Kind::Inject;
    Waveform injected;       // Inject: already ABM-transferred once
    std::string bypass_from; // BypassFrom: driver-side node name
};

/// Logic levels of the demonstrator.
constexpr double kLogicHigh = 3.5;
constexpr double kLogicLow = 0.0;
constexpr double kLogicThreshold = 1.75;

class EcuNetlist {
public:
    void add_node(EcuNode n);
    void add_link(Interconnect l);
    void add_device(EcuDevice d);

    const EcuNode* find_node(const std::string& name) const;
    const Interconnect* find_link(const std::string& name) const;
    const EcuDevice* find_device(const std::string& name) const;

    const std::vector<EcuNode>& nodes() const { return nodes_; }
    const std::vector<Interconnect>& links() const { return links_; }
    const std::vector<EcuDevice>& devices() const { return devices_; }
    const std::vector<Fault>& faults() const { return faults_; }

    /// Register a fault; it takes effect from its onset. Throws UnknownTarget
    /// when the target does not resolve against the netlist.
    void inject_fault(const Fault& f);

    /// Effective waveform at a node over [t0, t1], with every fault active in
    /// the window applied. A fault counts as active as soon as its onset
    /// precedes the window end. Floating sources resolve through the node's
    /// pull network (pull-up 3.5 V, pull-down 0 V, otherwise 0 V idle).
    Waveform node_waveform(const std::string& node, double t0, double t1) const;

    /// Point query, equivalent to node_waveform over a degenerate window.
    double sample_node(const std::string& node, double t) const;

    /// Diagnostic flags of a smart high/low-side driver at time t. Opens on
    /// the output are invisible here; only overloads trip the monitors.
    DriverDiagnostics driver_diagnostic(const std::string& device, double t) const;

    /// Motor devices run while their enable port reads above the logic
    /// threshold.
    bool motor_running(const std::string& device, double t) const;

    void set_override(const std::string& node, NodeOverride ov);
    void clear_override(const std::string& node);
    const AbmTransferModel& abm() const { return abm_; }
    void set_abm(AbmTransferModel m) { abm_ = m; }

    /// True when any power-loss fault on `device` is active at time t.
    bool power_lost(const std::string& device, double t) const;

    /// True when a fault of the given kind on `target` is active by `t_end`.
    bool fault_active(const std::string& target, FaultKind kind, double t_end) const;

private:
    Waveform resolve_local(const EcuNode& n, double t_end) const;
    Waveform node_waveform_impl(const std::string& node, double t_end, int depth) const;

    std::vector<EcuNode> nodes_;
    std::vector<Interconnect> links_;
    std::vector<EcuDevice> devices_;
    std::vector<Fault> faults_;
    std::map<std::string, NodeOverride> overrides_;
    AbmTransferModel abm_;
};

/// Convenience value-style injection used by tests and tools.
EcuNetlist inject_fault(EcuNetlist net, const Fault& f);

} // namespace ecusim

#endif
