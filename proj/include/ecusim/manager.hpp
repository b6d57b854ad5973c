// SPDX-License-Identifier: Apache-2.0
#ifndef ECUSIM_MANAGER_HPP
#define ECUSIM_MANAGER_HPP

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ecusim/analog.hpp"
#include "ecusim/ecu.hpp"
#include "ecusim/log.hpp"
#include "ecusim/measure.hpp"
#include "ecusim/reconfig.hpp"
#include "ecusim/tap.hpp"

namespace ecusim {

/// A scheduled test intent: what to measure, against which reference, how
/// often, and over which bus segment.
struct TestDescriptor {
    std::string id;
    TestKind kind = TestKind::Dc;
    std::string target; // node name; interconnect name for interconnect tests
    double reference = 0.0;
    double tolerance = 0.0;
    double period = 0.1;   // seconds between runs
    std::string segment;   // owning bus segment
    double window = 0.010; // measurement window for windowed kinds
};

enum class StartDecision { NotStarted, Refused, Degraded, Running };

const char* to_string(StartDecision d);

enum class LinkStatus { Healthy, Failed, Bypassed };

struct HealthState {
    StartDecision start_decision = StartDecision::NotStarted;
    std::map<std::string, MeasurementResult> last_result; // by test id
    std::map<std::string, LinkStatus> link_status;        // by interconnect name
};

enum class ActionKind { NoAction, RequestBypass, CriticalAlert };

struct Action {
    ActionKind kind = ActionKind::NoAction;
    bool violated = false; // result out of tolerance / comparator tripped
    std::string subject;
};

/// The on-line controller: runs the startup self-test, schedules and executes
/// tests through the scan chain and the analog bus, evaluates results against
/// their references, and reconfigures around detected interconnect failures.
class TopologyManager {
public:
    TopologyManager(EcuNetlist& net, AnalogBus& bus, TapEngine& tap,
                    std::vector<TestDescriptor> tests, double f_tck, std::uint64_t seed,
                    EventLog* log);

    /// Execute every interconnect test once from t = 0. A failure on a
    /// critical path refuses the start; non-critical failures degrade the
    /// start and queue reconfiguration. Returns the decision; the internal
    /// clock ends at the BIST's total duration.
    StartDecision run_startup_bist();

    /// Run one test at time t. Pays the chain configuration cost, resolves
    /// the buses, performs the measurement and logs the result at completion
    /// time. Throws SegmentBusy when the segment's pair is committed to a
    /// bypass or injection.
    MeasurementResult execute_test(const TestDescriptor& d, double t);

    /// Evaluate a result against its descriptor. Deterministic.
    Action handle_result(const TestDescriptor& d, const MeasurementResult& r);

    /// Drive a node from the analog bus (remote operation). Consumes the
    /// segment's pair like a bypass does.
    void inject_signal(const std::string& node, const Waveform& w, double now);
    void release_injection(const std::string& node, double now);
    bool injection_active(const std::string& node) const;

    /// When disabled, failed links are recorded but never routed around;
    /// monitoring keeps every bus pair (characterization runs).
    void set_auto_reconfig(bool on) { auto_reconfig_ = on; }
    bool auto_reconfig() const { return auto_reconfig_; }

    /// Bypass bookkeeping. Requests queue FIFO and are applied at scheduling
    /// boundaries; requests that cannot be served log an unmet demand.
    void queue_bypass(const std::string& link, double now);
    void process_bypass_queue(double now);
    bool bypass_queue_empty() const { return bypass_queue_.empty(); }

    bool segment_locked(const std::string& segment) const;
    double clock() const { return clock_; }
    void set_clock(double t) { clock_ = t; }
    double last_test_duration() const { return last_duration_; }

    const HealthState& health() const { return health_; }
    const std::vector<TestDescriptor>& tests() const { return tests_; }
    const ComparatorConfig& comparator() const { return comparator_; }
    BypassTable& bypasses() { return bypasses_; }
    const BypassTable& bypasses() const { return bypasses_; }

private:
    bool link_critical(const Interconnect& l) const;
    CycleCount configure_chain();
    void log(double t, EventCategory cat, const std::string& subject, const std::string& detail);

    EcuNetlist& net_;
    AnalogBus& bus_;
    TapEngine& tap_;
    std::vector<TestDescriptor> tests_;
    double f_tck_;
    std::uint64_t seed_;
    EventLog* log_ = nullptr;

    ComparatorConfig comparator_;
    HealthState health_;
    BypassTable bypasses_;
    std::deque<std::string> bypass_queue_;
    std::set<std::string> unmet_logged_;
    std::map<std::string, std::size_t> injections_; // node -> pair
    bool auto_reconfig_ = true;
    double clock_ = 0.0;
    double last_duration_ = 0.0;
    std::uint64_t measurement_counter_ = 0;
};

} // namespace ecusim

#endif
