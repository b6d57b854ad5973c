// SPDX-License-Identifier: Apache-2.0
#ifndef ECUSIM_SIM_HPP
#define ECUSIM_SIM_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ecusim/idr.hpp"
#include "ecusim/log.hpp"
#include "ecusim/manager.hpp"
#include "ecusim/scenario.hpp"

namespace ecusim {

/// Post-run aggregation of the event log.
struct Report {
    std::size_t tests_run = 0;
    std::size_t detections = 0;
    std::size_t false_alarms = 0;
    std::size_t bypasses = 0;
    std::size_t unmet_demands = 0;
    std::size_t idr_exclusions = 0;
    StartDecision start_decision = StartDecision::NotStarted;

    struct FaultOutcome {
        std::string target;
        double onset = 0.0;
        std::optional<double> detected; // time of first matching detection
    };
    std::vector<FaultOutcome> fault_outcomes;

    /// Sweep repetitions per second measured from inter-test intervals;
    /// 0 when fewer than two sweeps completed.
    double achieved_loop_rate = 0.0;

    /// Per interconnect test: driver-side signal class and the fold of its
    /// post-fault trigger history.
    struct ClassRow {
        std::string test_id;
        SignalClass cls = SignalClass::DigitalHigh;
        Detectability verdict = Detectability::NotDetectable;
    };
    std::vector<ClassRow> detectability;

    std::string to_text() const;
};

/// The deterministic simulation: startup self-test, then the sequential
/// monitor/decide/reconfigure loop with continuous indicator rotation, fault
/// onsets applied on schedule and every test timed through the scan-chain
/// cost model. A given (scenario, seed) yields a byte-identical log.
class Simulation {
public:
    explicit Simulation(Scenario sc);

    void run();

    const EventLog& log() const { return log_; }
    const Scenario& scenario() const { return sc_; }
    EcuNetlist& netlist() { return net_; }
    const EcuNetlist& netlist() const { return net_; }
    TopologyManager& manager() { return *mgr_; }
    const TopologyManager& manager() const { return *mgr_; }
    const std::optional<RotationSchedule>& rotation() const { return rotation_; }

    /// Log rotation mappings every n periods (0 = off). Set before run().
    void set_idr_log_every(std::size_t n) { idr_log_every_ = n; }

    Report summarize() const;

private:
    void emit_fault_events(double now);
    void advance_idr(double now);
    void check_motors(double now);
    void apply_remote_policy(const TestDescriptor& d, const Action& a, double now);

    Scenario sc_;
    EcuNetlist net_;
    AnalogBus bus_;
    TapEngine tap_;
    EventLog log_;
    std::unique_ptr<TopologyManager> mgr_;

    std::optional<RotationSchedule> rotation_;
    std::uint64_t idr_period_start_ = 0;
    bool idr_ambiguous_logged_ = false;
    std::size_t idr_log_every_ = 0;
    std::size_t idr_period_count_ = 0;

    std::size_t fault_cursor_ = 0;
    std::map<std::string, bool> motor_state_;
    // remote-operation sequencing: actuate once per switch transition, stop
    // on sensor status, then stand down
    enum class RemotePhase { Idle, Actuated, Done };
    RemotePhase remote_phase_ = RemotePhase::Idle;
    bool ran_ = false;
};

/// Parse-and-run convenience: returns the finalized event log.
EventLog run_scenario(const Scenario& sc);

/// Aggregate a finished log against its scenario.
Report summarize(const EventLog& log, const Scenario& sc);

} // namespace ecusim

#endif
