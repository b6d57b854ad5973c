// SPDX-License-Identifier: Apache-2.0
#include "ecusim/manager.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ecusim/errors.hpp"
#include "ecusim/rng.hpp"

namespace ecusim {

const char* to_string(StartDecision d) {
    switch (d) {
    case StartDecision::NotStarted: return "NotStarted";
    case StartDecision::Refused: return "Refused";
    case StartDecision::Degraded: return "Degraded";
    case StartDecision::Running: return "Running";
    }
    return "?";
}

TopologyManager::TopologyManager(EcuNetlist& net, AnalogBus& bus, TapEngine& tap,
                                 std::vector<TestDescriptor> tests, double f_tck,
                                 std::uint64_t seed, EventLog* log)
    : net_(net), bus_(bus), tap_(tap), tests_(std::move(tests)), f_tck_(f_tck), seed_(seed),
      log_(log) {
    if (f_tck_ <= 0) throw std::invalid_argument("TCK frequency must be positive");
    comparator_.validate();
    for (const auto& l : net_.links()) health_.link_status[l.name] = LinkStatus::Healthy;
    for (const auto& d : tests_) {
        if (!bus_.segment_named(d.segment))
            throw std::invalid_argument("test " + d.id + " names unknown segment " + d.segment);
    }
}

void TopologyManager::log(double t, EventCategory cat, const std::string& subject,
                          const std::string& detail) {
    if (log_) log_->add(t, cat, subject, detail);
}

bool TopologyManager::link_critical(const Interconnect& l) const {
    const EcuNode* a = net_.find_node(l.from);
    const EcuNode* b = net_.find_node(l.to);
    return (a && a->critical) || (b && b->critical);
}

CycleCount TopologyManager::configure_chain() {
    // Full reconfiguration before every test: every chain device is targeted
    // with its current boundary image, so the cost is the worst-case scan
    // traffic regardless of how little actually changed. PROBE is the analog
    // bus-access instruction.
    std::map<std::string, std::vector<std::uint8_t>> targets;
    for (const auto& dev : tap_.devices()) targets[dev.name] = dev.boundary_register;
    return tap_.configure(targets, DeviceScanModel::kProbe);
}

bool TopologyManager::segment_locked(const std::string& segment) const {
    const BusSegment* seg = bus_.segment_named(segment);
    if (!seg) return false;
    return bypasses_.pair_busy(seg->pair_index);
}

MeasurementResult TopologyManager::execute_test(const TestDescriptor& d, double t) {
    const BusSegment* seg = bus_.segment_named(d.segment);
    if (!seg) throw std::invalid_argument("unknown segment " + d.segment);
    if (bypasses_.pair_busy(seg->pair_index))
        throw SegmentBusy("segment " + d.segment + " committed to a bypass/injection");
    if (tap_.state() != TapState::RunTestIdle)
        throw std::logic_error("TAP controller not idle");

    const CycleCount cfg = configure_chain();
    const double t_con = static_cast<double>(cfg.tck_cycles) / f_tck_;

    double window_len = 0.0;
    switch (d.kind) {
    case TestKind::Dc: window_len = kAdcCapture; break;
    case TestKind::Interconnect:
    case TestKind::Duty: window_len = d.window; break;
    case TestKind::Spectrum:
        window_len = std::max(d.window, d.reference > 0.0 ? 10.0 / d.reference : d.window);
        break;
    }
    const double w0 = t + t_con;
    const double w1 = w0 + window_len;

    // Route the bus pair for this test.
    const std::size_t pair = seg->pair_index;
    bus_.clear_pair(pair);
    if (d.kind == TestKind::Interconnect) {
        const Interconnect* link = net_.find_link(d.target);
        if (!link) throw UnknownTarget(d.target);
        bus_.connect(pair, {link->from, 1, BusRole::Drive});
        bus_.connect(pair, {link->to, 2, BusRole::Drive});
    } else {
        bus_.connect(pair, {d.target, 1, BusRole::Drive});
    }

    auto source = [&](const std::string& node) { return net_.node_waveform(node, w0, w1); };
    const ResolvedPair lines = bus_resolve(bus_, pair, source);

    MeasurementResult r;
    r.test_id = d.id;
    r.kind = d.kind;
    r.window_start = w0;
    r.window_end = w1;
    r.cost = window_len;

    const std::uint64_t mseed = SplitMix64::mix(seed_, measurement_counter_++);
    std::string note;
    try {
        switch (d.kind) {
        case TestKind::Dc: r.value = measure_dc(lines.at1, w0, w1, mseed); break;
        case TestKind::Interconnect:
            r.triggered = diff_compare(lines.at1, lines.at2, comparator_, w0, w1);
            break;
        case TestKind::Duty: r.value = measure_duty(lines.at1, w0, w1); break;
        case TestKind::Spectrum: {
            const SpectrumResult sr = measure_spectrum(lines.at1, w0, w1);
            r.value = sr.fundamental;
            r.cost = sr.cost;
            break;
        }
        }
    } catch (const NoEdges&) {
        r.value = std::numeric_limits<double>::quiet_NaN();
        note = " error=no_edges";
    } catch (const NoSignal&) {
        r.value = std::numeric_limits<double>::quiet_NaN();
        note = " error=no_signal";
    }

    last_duration_ = t_con + r.cost;
    health_.last_result[d.id] = r;

    const double done = t + last_duration_;
    std::string detail = std::string("kind=") + to_string(d.kind);
    if (d.kind == TestKind::Interconnect)
        detail += " triggered=" + std::to_string(r.triggered ? 1 : 0);
    else
        detail += " value=" + format_value(r.value) + " ref=" + format_value(d.reference) +
                  " tol=" + format_value(d.tolerance);
    detail += " tcon=" + format_time(t_con) + " ttest=" + format_time(r.cost) + note;
    log(done, EventCategory::Test, d.id, detail);
    return r;
}

Action TopologyManager::handle_result(const TestDescriptor& d, const MeasurementResult& r) {
    Action a;
    bool ok = true;
    if (d.kind == TestKind::Interconnect) {
        ok = !r.triggered;
    } else {
        ok = std::abs(r.value - d.reference) <= d.tolerance; // NaN compares false
    }
    if (ok) return a;

    a.violated = true;
    a.subject = d.target;
    if (d.kind == TestKind::Interconnect) {
        const Interconnect* link = net_.find_link(d.target);
        const bool crit = link && link_critical(*link);
        auto& st = health_.link_status[d.target];
        if (st == LinkStatus::Healthy) st = LinkStatus::Failed;
        a.kind = crit ? ActionKind::CriticalAlert : ActionKind::RequestBypass;
    } else {
        const EcuNode* node = net_.find_node(d.target);
        a.kind = (node && node->critical) ? ActionKind::CriticalAlert : ActionKind::NoAction;
    }
    return a;
}

StartDecision TopologyManager::run_startup_bist() {
    if (health_.start_decision != StartDecision::NotStarted)
        throw std::logic_error("startup self-test already ran");
    clock_ = 0.0;
    bool critical_failure = false;
    bool any_failure = false;

    for (const auto& d : tests_) {
        if (d.kind != TestKind::Interconnect) continue;
        const MeasurementResult r = execute_test(d, clock_);
        clock_ += last_test_duration();
        const Action a = handle_result(d, r);
        if (!a.violated) continue;
        any_failure = true;
        const Interconnect* link = net_.find_link(d.target);
        if (link && link_critical(*link)) {
            critical_failure = true;
            log(clock_, EventCategory::Alert, d.target, "critical path failed at startup");
        } else {
            queue_bypass(d.target, clock_);
        }
    }

    StartDecision decision = StartDecision::Running;
    if (critical_failure) decision = StartDecision::Refused;
    else if (any_failure) decision = StartDecision::Degraded;
    health_.start_decision = decision;
    log(clock_, EventCategory::Decision, "startup", to_string(decision));
    return decision;
}

void TopologyManager::queue_bypass(const std::string& link, double now) {
    if (!auto_reconfig_) return; // characterization run: record only
    if (std::find(bypass_queue_.begin(), bypass_queue_.end(), link) != bypass_queue_.end())
        return; // already pending
    if (health_.link_status[link] == LinkStatus::Bypassed) return;
    bypass_queue_.push_back(link);
    log(now, EventCategory::Bypass, link, "requested");
}

void TopologyManager::process_bypass_queue(double now) {
    std::deque<std::string> retry;
    while (!bypass_queue_.empty()) {
        const std::string link = bypass_queue_.front();
        bypass_queue_.pop_front();
        try {
            const BypassAssignment a = bypasses_.apply(bus_, net_, link, now);
            health_.link_status[link] = LinkStatus::Bypassed;
            // record the post-bypass receiver level for the log
            const Interconnect* l = net_.find_link(link);
            const double v = l ? net_.node_waveform(l->to, now, now + 1e-6).mean(now, now + 1e-6)
                               : 0.0;
            log(now, EventCategory::Bypass, link,
                "applied pair=" + std::to_string(a.pair_index) + " receiver=" + format_value(v));
        } catch (const SimError& e) {
            // capacity or segment exhausted: demand stays queued, logged once
            if (unmet_logged_.insert(link).second)
                log(now, EventCategory::Bypass, link, std::string("unmet_demand ") + e.what());
            retry.push_back(link);
        }
    }
    bypass_queue_ = std::move(retry);
}

void TopologyManager::inject_signal(const std::string& node, const Waveform& w, double now) {
    const auto seg_idx = bus_.segment_of(node);
    if (!seg_idx) throw NoAbmAccess(node);
    const std::size_t pair = bus_.segments[*seg_idx].pair_index;
    if (bypasses_.pair_busy(pair))
        throw SegmentBusy("segment pair " + std::to_string(pair) + " already committed");

    bypasses_.reserve_pair(pair);
    bus_.clear_pair(pair);
    bus_.connect(pair, {node, 2, BusRole::Tap});
    bus_.link(pair, true);

    NodeOverride ov;
    ov.kind = NodeOverride::Kind::Inject;
    ov.injected = abm_transfer(w, bus_.abm);
    net_.set_override(node, ov);
    injections_[node] = pair;
    log(now, EventCategory::Bypass, node, "inject pair=" + std::to_string(pair));
}

bool TopologyManager::injection_active(const std::string& node) const {
    return injections_.count(node) > 0;
}

void TopologyManager::release_injection(const std::string& node, double now) {
    auto it = injections_.find(node);
    if (it == injections_.end()) throw UnknownTarget(node + " has no active injection");
    bus_.link(it->second, false);
    bus_.clear_pair(it->second);
    bypasses_.free_pair(it->second);
    net_.clear_override(node);
    log(now, EventCategory::Bypass, node, "inject_released pair=" + std::to_string(it->second));
    injections_.erase(it);
}

} // namespace ecusim
