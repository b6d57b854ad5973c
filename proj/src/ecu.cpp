// SPDX-License-Identifier: Apache-2.0
#include "ecusim/ecu.hpp"

#include <algorithm>
#include <stdexcept>

#include "ecusim/errors.hpp"

namespace ecusim {

const char* to_string(SignalClass c) {
    switch (c) {
    case SignalClass::DigitalHigh: return "digital_high";
    case SignalClass::DigitalLow: return "digital_low";
    case SignalClass::PullUp: return "pull_up";
    case SignalClass::PullDown: return "pull_down";
    case SignalClass::Pwm: return "pwm";
    case SignalClass::AnalogGround: return "analog_ground";
    case SignalClass::Hall: return "hall";
    }
    return "?";
}

const char* to_string(DeviceKind k) {
    switch (k) {
    case DeviceKind::Lamp: return "lamp";
    case DeviceKind::Buzzer: return "buzzer";
    case DeviceKind::HsDriver: return "hs_driver";
    case DeviceKind::LsDriver: return "ls_driver";
    case DeviceKind::Hall: return "hall";
    case DeviceKind::Switch: return "switch";
    case DeviceKind::Mcu: return "mcu";
    case DeviceKind::Motor: return "motor";
    }
    return "?";
}

const char* to_string(FaultKind k) {
    switch (k) {
    case FaultKind::OpenInterconnect: return "open";
    case FaultKind::StuckLow: return "stuck0";
    case FaultKind::StuckHigh: return "stuck1";
    case FaultKind::ShortToGround: return "short_gnd";
    case FaultKind::ParametricDrift: return "drift";
    case FaultKind::PowerLoss: return "power_loss";
    }
    return "?";
}

void EcuNetlist::add_node(EcuNode n) {
    if (find_node(n.name)) throw std::invalid_argument("duplicate node: " + n.name);
    nodes_.push_back(std::move(n));
}

void EcuNetlist::add_link(Interconnect l) {
    if (find_link(l.name)) throw std::invalid_argument("duplicate link: " + l.name);
    if (!find_node(l.from)) throw UnknownNode(l.from);
    if (!find_node(l.to)) throw UnknownNode(l.to);
    for (const auto& other : links_)
        if (other.to == l.to)
            throw std::invalid_argument("node " + l.to + " already fed by link " + other.name);
    links_.push_back(std::move(l));
}

void EcuNetlist::add_device(EcuDevice d) {
    if (find_device(d.name)) throw std::invalid_argument("duplicate device: " + d.name);
    if (d.ports.empty()) throw std::invalid_argument("device needs at least one port: " + d.name);
    for (const auto& p : d.ports)
        if (!find_node(p)) throw UnknownNode(p);
    devices_.push_back(std::move(d));
}

const EcuNode* EcuNetlist::find_node(const std::string& name) const {
    for (const auto& n : nodes_)
        if (n.name == name) return &n;
    return nullptr;
}

const Interconnect* EcuNetlist::find_link(const std::string& name) const {
    for (const auto& l : links_)
        if (l.name == name) return &l;
    return nullptr;
}

const EcuDevice* EcuNetlist::find_device(const std::string& name) const {
    for (const auto& d : devices_)
        if (d.name == name) return &d;
    return nullptr;
}

void EcuNetlist::inject_fault(const Fault& f) {
    if (f.onset < 0.0) throw std::invalid_argument("fault onset must be >= 0");
    const bool known = find_node(f.target) || find_link(f.target) || find_device(f.target);
    if (!known) throw UnknownTarget(f.target);
    if (f.kind == FaultKind::OpenInterconnect && !find_link(f.target))
        throw UnknownTarget(f.target + " (open faults target interconnects)");
    if (f.kind == FaultKind::PowerLoss && !find_device(f.target))
        throw UnknownTarget(f.target + " (power loss targets devices)");
    faults_.push_back(f);
}

EcuNetlist inject_fault(EcuNetlist net, const Fault& f) {
    net.inject_fault(f);
    return net;
}

bool EcuNetlist::fault_active(const std::string& target, FaultKind kind, double t_end) const {
    for (const auto& f : faults_)
        if (f.kind == kind && f.target == target && f.onset < t_end) return true;
    return false;
}

bool EcuNetlist::power_lost(const std::string& device, double t) const {
    // point-in-time queries include faults with onset exactly at t
    for (const auto& f : faults_)
        if (f.kind == FaultKind::PowerLoss && f.target == device && f.onset <= t) return true;
    return false;
}

void EcuNetlist::set_override(const std::string& node, NodeOverride ov) {
    if (!find_node(node)) throw UnknownNode(node);
    overrides_[node] = std::move(ov);
}

void EcuNetlist::clear_override(const std::string& node) { overrides_.erase(node); }

namespace {

Waveform resolve_pull(SignalClass cls) {
    switch (cls) {
    case SignalClass::PullUp: return Waveform::dc(kLogicHigh);
    case SignalClass::PullDown: return Waveform::dc(kLogicLow);
    default: return Waveform::dc(0.0); // idle rule
    }
}

} // namespace

Waveform EcuNetlist::resolve_local(const EcuNode& n, double t_end) const {
    Waveform w = n.source;

    // power loss on any device porting this node floats the local source
    for (const auto& d : devices_) {
        if (std::find(d.ports.begin(), d.ports.end(), n.name) == d.ports.end()) continue;
        for (const auto& f : faults_) {
            if (f.kind == FaultKind::PowerLoss && f.target == d.name && f.onset < t_end) {
                w = Waveform::high_z();
                break;
            }
        }
    }

    if (w.is_high_z()) w = resolve_pull(n.cls);

    for (const auto& f : faults_) {
        if (f.target != n.name || f.onset >= t_end) continue;
        if (f.kind == FaultKind::ParametricDrift) w = w.scaled(f.drift_gain);
    }

    if (n.bias != 0.0) w = Waveform::sum(w, Waveform::dc(n.bias));
    return w;
}

Waveform EcuNetlist::node_waveform_impl(const std::string& node, double t_end,
                                        int depth) const {
    if (depth > 16) throw SimError("netlist feed cycle involving node " + node);
    const EcuNode* n = find_node(node);
    if (!n) throw UnknownNode(node);

    // stuck/short faults dominate everything, including injections
    for (const auto& f : faults_) {
        if (f.target != node || f.onset >= t_end) continue;
        switch (f.kind) {
        case FaultKind::StuckLow: return Waveform::dc(kLogicLow);
        case FaultKind::StuckHigh: return Waveform::dc(kLogicHigh);
        case FaultKind::ShortToGround: return Waveform::dc(0.0);
        default: break;
        }
    }

    if (auto it = overrides_.find(node); it != overrides_.end()) {
        if (it->second.kind == NodeOverride::Kind::Inject) return it->second.injected;
        // bypass: the driver-side signal crosses two ABMs in series
        Waveform drv = node_waveform_impl(it->second.bypass_from, t_end, depth + 1);
        return abm_transfer(abm_transfer(drv, abm_), abm_);
    }

    // a node fed by an interconnect follows the driver unless the link is open
    for (const auto& l : links_) {
        if (l.to != node) continue;
        bool open = false;
        for (const auto& f : faults_) {
            if (f.kind == FaultKind::OpenInterconnect && f.target == l.name && f.onset < t_end) {
                open = true;
                break;
            }
        }
        // stuck faults on the link itself pin the receiver side
        for (const auto& f : faults_) {
            if (f.target != l.name || f.onset >= t_end) continue;
            if (f.kind == FaultKind::StuckLow) return Waveform::dc(kLogicLow);
            if (f.kind == FaultKind::StuckHigh) return Waveform::dc(kLogicHigh);
            if (f.kind == FaultKind::ShortToGround) return Waveform::dc(0.0);
        }
        if (open) {
            Waveform w = n->source.is_high_z() ? resolve_pull(n->cls) : n->source;
            return w;
        }
        return node_waveform_impl(l.from, t_end, depth + 1);
    }

    return resolve_local(*n, t_end);
}

Waveform EcuNetlist::node_waveform(const std::string& node, double, double t1) const {
    return node_waveform_impl(node, t1, 0);
}

double EcuNetlist::sample_node(const std::string& node, double t) const {
    // nudge the window end so faults with onset exactly t are live
    const double eps = 1e-12;
    return node_waveform_impl(node, t + eps, 0).sample(t);
}

DriverDiagnostics EcuNetlist::driver_diagnostic(const std::string& device, double t) const {
    const EcuDevice* d = find_device(device);
    if (!d) throw UnknownDevice(device);
    if (d->kind != DeviceKind::HsDriver && d->kind != DeviceKind::LsDriver)
        throw NotADriver(device);

    DriverDiagnostics diag;
    const std::string& out = d->ports.size() > 1 ? d->ports[1] : d->ports[0];
    for (const auto& f : faults_) {
        if (f.target != out || f.onset > t) continue;
        if (f.kind == FaultKind::ShortToGround) diag.over_current = true;
        if (f.kind == FaultKind::StuckHigh) diag.over_voltage = true;
    }
    diag.status_pin = (diag.over_current || diag.over_voltage) ? 1 : 0;
    return diag;
}

bool EcuNetlist::motor_running(const std::string& device, double t) const {
    const EcuDevice* d = find_device(device);
    if (!d) throw UnknownDevice(device);
    if (d->kind != DeviceKind::Motor) throw UnknownDevice(device + " is not a motor");
    return sample_node(d->ports.front(), t) > kLogicThreshold;
}

} // namespace ecusim
