// SPDX-License-Identifier: Apache-2.0
#include "ecusim/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ecusim/errors.hpp"

namespace ecusim {

namespace {

std::vector<DeviceScanModel> chain_or_default(const Scenario& sc) {
    if (!sc.chain.empty()) return sc.chain;
    return {DeviceScanModel{.name = "tap0", .ir_length = 4, .boundary_cells = 8}};
}

} // namespace

Simulation::Simulation(Scenario sc)
    : sc_(std::move(sc)), net_(sc_.net), bus_(sc_.bus_pairs), tap_(chain_or_default(sc_)) {
    bus_.segments = sc_.segments;
    for (const auto& f : sc_.faults) net_.inject_fault(f);
    mgr_ = std::make_unique<TopologyManager>(net_, bus_, tap_, sc_.tests, sc_.f_tck, sc_.seed,
                                             &log_);
    mgr_->set_auto_reconfig(sc_.auto_reconfig);
    if (sc_.idr) {
        RotationSchedule r;
        r.drivers = sc_.idr->drivers;
        r.logicals = sc_.idr->logicals;
        r.frequency = sc_.idr->frequency;
        r.validate();
        rotation_ = std::move(r);
    }
    for (const auto& d : net_.devices())
        if (d.kind == DeviceKind::Motor) motor_state_[d.name] = false;
}

void Simulation::emit_fault_events(double now) {
    while (fault_cursor_ < sc_.faults.size() && sc_.faults[fault_cursor_].onset <= now) {
        const Fault& f = sc_.faults[fault_cursor_];
        log_.add(f.onset, EventCategory::Fault, f.target, std::string("kind=") + to_string(f.kind));
        ++fault_cursor_;
    }
}

void Simulation::check_motors(double now) {
    for (auto& [name, running] : motor_state_) {
        const bool v = net_.motor_running(name, now);
        if (v != running) {
            running = v;
            log_.add(now, EventCategory::Decision, name, v ? "motor=running" : "motor=stopped");
        }
    }
}

void Simulation::advance_idr(double now) {
    if (!rotation_) return;
    for (;;) {
        const std::size_t n = rotation_->period_steps();
        const double step_len = rotation_->step_period();
        const double t_end = static_cast<double>(idr_period_start_ + n) * step_len;
        if (t_end > now || t_end > sc_.duration) break;

        // Observe one full rotation period: a driver shows its logical's
        // demand unless a stuck fault on the driver device overrides it.
        const auto act = rotation_->active();
        const std::vector<bool> demand(rotation_->logicals.size(), true);
        std::vector<std::vector<bool>> observed(rotation_->drivers.size(),
                                                std::vector<bool>(n, false));
        for (std::size_t k = 0; k < n; ++k) {
            const std::uint64_t step = idr_period_start_ + k;
            const double t1 = static_cast<double>(step + 1) * step_len;
            const auto map = mapping_at_step(*rotation_, step);
            std::vector<bool> expect(rotation_->drivers.size(), false);
            for (const auto& [li, di] : map) {
                const auto phys = std::find(rotation_->drivers.begin(), rotation_->drivers.end(),
                                            act[di]) -
                                  rotation_->drivers.begin();
                expect[static_cast<std::size_t>(phys)] = demand[li];
            }
            for (std::size_t d = 0; d < rotation_->drivers.size(); ++d) {
                bool v = expect[d];
                if (net_.fault_active(rotation_->drivers[d], FaultKind::StuckLow, t1)) v = false;
                if (net_.fault_active(rotation_->drivers[d], FaultKind::StuckHigh, t1)) v = true;
                observed[d][k] = v;
            }
        }

        if (idr_log_every_ && (idr_period_count_ % idr_log_every_ == 0)) {
            std::ostringstream ss;
            ss << "rotation step=" << idr_period_start_;
            const auto map = mapping_at_step(*rotation_, idr_period_start_);
            for (const auto& [li, di] : map)
                ss << ' ' << rotation_->logicals[li] << ':' << act[di];
            log_.add(static_cast<double>(idr_period_start_) * step_len, EventCategory::Idr,
                     "schedule", ss.str());
        }
        ++idr_period_count_;

        try {
            const auto culprit = detect_and_localize(*rotation_, idr_period_start_, observed, demand);
            if (culprit) {
                log_.add(t_end, EventCategory::Idr, *culprit, "localized");
                try {
                    *rotation_ = exclude(*rotation_, *culprit);
                    log_.add(t_end, EventCategory::Idr, *culprit, "excluded");
                } catch (const LastDriver&) {
                    log_.add(t_end, EventCategory::Alert, *culprit,
                             "faulty driver is the last active channel");
                }
            }
            idr_ambiguous_logged_ = false;
        } catch (const AmbiguousProfile& e) {
            if (!idr_ambiguous_logged_) {
                log_.add(t_end, EventCategory::Alert, "idr", e.what());
                idr_ambiguous_logged_ = true;
            }
        }
        idr_period_start_ += n;
    }
}

void Simulation::apply_remote_policy(const TestDescriptor& d, const Action& a, double now) {
    if (!a.violated) return;

    // Remote operation: with the microprocessor unpowered, a detected switch
    // transition actuates the motor through the analog bus; a sensor-status
    // transition releases the injection again.
    bool mcu_lost = false;
    for (const auto& dev : net_.devices())
        if (dev.kind == DeviceKind::Mcu && net_.power_lost(dev.name, now)) mcu_lost = true;
    if (!mcu_lost) return;

    const EcuDevice* motor = nullptr;
    for (const auto& dev : net_.devices())
        if (dev.kind == DeviceKind::Motor) {
            motor = &dev;
            break;
        }
    if (!motor) return;
    const std::string& enable = motor->ports.front();

    auto target_of_kind = [&](DeviceKind kind) {
        for (const auto& dev : net_.devices()) {
            if (dev.kind != kind) continue;
            if (std::find(dev.ports.begin(), dev.ports.end(), d.target) != dev.ports.end())
                return true;
        }
        return false;
    };

    if (remote_phase_ == RemotePhase::Idle && target_of_kind(DeviceKind::Switch) &&
        !mgr_->injection_active(enable)) {
        try {
            mgr_->inject_signal(enable, Waveform::dc(kLogicHigh), now);
            remote_phase_ = RemotePhase::Actuated;
        } catch (const SimError& e) {
            log_.add(now, EventCategory::Alert, enable, std::string("injection failed: ") + e.what());
        }
    } else if (remote_phase_ == RemotePhase::Actuated && target_of_kind(DeviceKind::Hall) &&
               mgr_->injection_active(enable)) {
        mgr_->release_injection(enable, now);
        remote_phase_ = RemotePhase::Done;
    }
}

void Simulation::run() {
    if (ran_) throw std::logic_error("simulation already ran");
    ran_ = true;

    const StartDecision decision = mgr_->run_startup_bist();
    double now = mgr_->clock();
    emit_fault_events(now);
    check_motors(now);

    if (decision == StartDecision::Refused) {
        log_.finalize();
        return;
    }
    mgr_->process_bypass_queue(now);

    const auto& tests = mgr_->tests();
    const std::size_t n = tests.size();
    // Interconnect tests already ran once during the startup pass.
    std::vector<double> next_due(n, now);
    for (std::size_t i = 0; i < n; ++i)
        if (tests[i].kind == TestKind::Interconnect) next_due[i] = now + tests[i].period;

    while (now < sc_.duration) {
        emit_fault_events(now);
        advance_idr(now);
        check_motors(now);

        bool ran_any = false;
        for (std::size_t i = 0; i < n && now < sc_.duration; ++i) {
            const TestDescriptor& d = tests[i];
            if (now < next_due[i]) continue;
            if (mgr_->segment_locked(d.segment)) continue;
            const MeasurementResult r = mgr_->execute_test(d, now);
            now += mgr_->last_test_duration();
            emit_fault_events(now);
            next_due[i] = now + d.period;
            ran_any = true;

            const Action a = mgr_->handle_result(d, r);
            if (a.kind == ActionKind::RequestBypass) {
                if (mgr_->auto_reconfig()) mgr_->queue_bypass(d.target, now);
                else log_.add(now, EventCategory::Alert, d.target, "reference violation");
            } else if (a.kind == ActionKind::CriticalAlert) {
                log_.add(now, EventCategory::Alert, d.target, "critical reference violation");
                if (d.kind == TestKind::Interconnect) mgr_->queue_bypass(d.target, now);
            } else if (a.violated) {
                log_.add(now, EventCategory::Alert, d.target, "reference violation");
            }
            apply_remote_policy(d, a, now);
            advance_idr(now);
            check_motors(now);
        }

        // end of a scheduling pass: reconfigure around anything detected
        mgr_->process_bypass_queue(now);

        if (!ran_any) {
            // idle: jump to the next actionable instant
            double next_t = sc_.duration;
            for (std::size_t i = 0; i < n; ++i)
                if (!mgr_->segment_locked(tests[i].segment)) next_t = std::min(next_t, next_due[i]);
            if (fault_cursor_ < sc_.faults.size())
                next_t = std::min(next_t, sc_.faults[fault_cursor_].onset);
            if (rotation_) {
                const double t_end = static_cast<double>(idr_period_start_ +
                                                         rotation_->period_steps()) *
                                     rotation_->step_period();
                next_t = std::min(next_t, t_end);
            }
            if (next_t <= now) next_t = std::nextafter(now, std::numeric_limits<double>::max());
            now = std::min(next_t, sc_.duration);
        }
    }

    emit_fault_events(sc_.duration);
    advance_idr(sc_.duration);
    check_motors(sc_.duration);
    log_.finalize();
}

EventLog run_scenario(const Scenario& sc) {
    Simulation sim(sc);
    sim.run();
    return sim.log();
}

namespace {

bool detail_has(const EventRecord& r, const std::string& token) {
    return r.detail.find(token) != std::string::npos;
}

} // namespace

Report summarize(const EventLog& log, const Scenario& sc) {
    Report rep;

    std::map<std::string, const TestDescriptor*> tests_by_id;
    for (const auto& t : sc.tests) tests_by_id[t.id] = &t;

    std::vector<double> test_times;
    std::map<std::string, std::vector<std::pair<double, bool>>> triggers_by_test;

    for (const auto& r : log.records()) {
        switch (r.category) {
        case EventCategory::Decision:
            if (r.subject == "startup") {
                if (r.detail == "Refused") rep.start_decision = StartDecision::Refused;
                else if (r.detail == "Degraded") rep.start_decision = StartDecision::Degraded;
                else if (r.detail == "Running") rep.start_decision = StartDecision::Running;
            }
            break;
        case EventCategory::Test: {
            ++rep.tests_run;
            test_times.push_back(r.time);
            if (detail_has(r, "kind=interconnect")) {
                const bool trig = detail_has(r, "triggered=1");
                triggers_by_test[r.subject].push_back({r.time, trig});
                if (trig) ++rep.detections;
            }
            break;
        }
        case EventCategory::Bypass:
            if (detail_has(r, "applied")) ++rep.bypasses;
            if (detail_has(r, "unmet_demand")) ++rep.unmet_demands;
            break;
        case EventCategory::Idr:
            if (r.detail == "localized") ++rep.detections;
            if (r.detail == "excluded") ++rep.idr_exclusions;
            break;
        default: break;
        }
    }

    // False alarms: interconnect triggers with no fault at all active yet.
    double first_onset = std::numeric_limits<double>::infinity();
    for (const auto& f : sc.faults) first_onset = std::min(first_onset, f.onset);
    for (const auto& [id, hist] : triggers_by_test)
        for (const auto& [t, trig] : hist)
            if (trig && t < first_onset) ++rep.false_alarms;

    // Per-fault detection latency.
    for (const auto& f : sc.faults) {
        Report::FaultOutcome out;
        out.target = f.target;
        out.onset = f.onset;
        for (const auto& r : log.records()) {
            if (r.time < f.onset) continue;
            bool match = false;
            if (r.category == EventCategory::Idr && r.detail == "localized" &&
                r.subject == f.target)
                match = true;
            if (r.category == EventCategory::Test && detail_has(r, "triggered=1")) {
                auto it = tests_by_id.find(r.subject);
                if (it != tests_by_id.end() && it->second->target == f.target) match = true;
            }
            if (r.category == EventCategory::Alert && r.subject == f.target) match = true;
            if (match) {
                out.detected = r.time;
                break;
            }
        }
        rep.fault_outcomes.push_back(std::move(out));
    }

    // Achieved loop rate over completed sweeps.
    if (!sc.tests.empty() && test_times.size() > sc.tests.size()) {
        const std::size_t per_sweep = sc.tests.size();
        const std::size_t sweeps = test_times.size() / per_sweep;
        if (sweeps >= 2) {
            const double t0 = test_times[per_sweep - 1];
            const double t1 = test_times[sweeps * per_sweep - 1];
            rep.achieved_loop_rate = static_cast<double>(sweeps - 1) / (t1 - t0);
        }
    }

    // Detectability matrix: per interconnect test, verdict over the windows
    // completed after the first fault on its link.
    for (const auto& t : sc.tests) {
        if (t.kind != TestKind::Interconnect) continue;
        const Interconnect* link = sc.net.find_link(t.target);
        if (!link) continue;
        double onset = std::numeric_limits<double>::infinity();
        for (const auto& f : sc.faults)
            if (f.target == t.target) onset = std::min(onset, f.onset);
        const auto it = triggers_by_test.find(t.id);
        if (it == triggers_by_test.end()) continue;
        std::vector<bool> hist;
        for (const auto& [time, trig] : it->second)
            if (time > onset) hist.push_back(trig);
        if (hist.empty()) continue;
        Report::ClassRow row;
        row.test_id = t.id;
        const EcuNode* drv = sc.net.find_node(link->from);
        row.cls = drv ? drv->cls : SignalClass::DigitalHigh;
        row.verdict = classify_detectability(hist);
        rep.detectability.push_back(row);
    }

    return rep;
}

Report Simulation::summarize() const { return ecusim::summarize(log_, sc_); }

std::string Report::to_text() const {
    std::ostringstream ss;
    ss << "start decision:     " << to_string(start_decision) << '\n';
    ss << "tests run:          " << tests_run << '\n';
    ss << "detections:         " << detections << '\n';
    ss << "false alarms:       " << false_alarms << '\n';
    ss << "bypasses applied:   " << bypasses << '\n';
    ss << "unmet demands:      " << unmet_demands << '\n';
    ss << "idr exclusions:     " << idr_exclusions << '\n';
    if (achieved_loop_rate > 0.0)
        ss << "test loop rate:     " << format_value(achieved_loop_rate) << " Hz\n";
    if (!fault_outcomes.empty()) {
        ss << "faults:\n";
        for (const auto& f : fault_outcomes) {
            ss << "  " << f.target << " at " << format_time(f.onset);
            if (f.detected)
                ss << " detected at " << format_time(*f.detected) << " (latency "
                   << format_time(*f.detected - f.onset) << ")";
            else
                ss << " undetected";
            ss << '\n';
        }
    }
    if (!detectability.empty()) {
        ss << "detectability:\n";
        for (const auto& row : detectability)
            ss << "  " << row.test_id << " (" << to_string(row.cls)
               << "): " << to_string(row.verdict) << '\n';
    }
    return ss.str();
}

} // namespace ecusim
