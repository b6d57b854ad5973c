// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <string>
#include <vector>

#include "ecusim/errors.hpp"
#include "ecusim/sim.hpp"
#include "ecusim/timing.hpp"

using namespace ecusim;

namespace {

Scenario load(const std::string& name) {
    return parse_scenario_file(std::string(SCENARIO_DIR) + "/" + name);
}

// first record index matching category+subject and an optional detail token
std::size_t find_event(const EventLog& log, EventCategory cat, const std::string& subject,
                       const std::string& token = "", std::size_t from = 0) {
    const auto& rs = log.records();
    for (std::size_t i = from; i < rs.size(); ++i) {
        if (rs[i].category != cat) continue;
        if (!subject.empty() && rs[i].subject != subject) continue;
        if (!token.empty() && rs[i].detail.find(token) == std::string::npos) continue;
        return i;
    }
    return rs.size();
}

} // namespace

TEST_CASE("healthy scenario runs clean") {
    Simulation sim(load("healthy.scn"));
    sim.run();
    const auto& log = sim.log();
    REQUIRE(find_event(log, EventCategory::Decision, "startup", "Running") < log.size());
    // no alarms, no bypass traffic, no idr noise
    for (const auto& r : log.records()) {
        CHECK(r.category != EventCategory::Alert);
        CHECK(r.category != EventCategory::Bypass);
    }
    const Report rep = sim.summarize();
    CHECK(rep.false_alarms == 0);
    CHECK(rep.detections == 0);
    CHECK(rep.start_decision == StartDecision::Running);
    CHECK(rep.tests_run > 10);
}

TEST_CASE("log times are non-decreasing in every bundled scenario") {
    for (const char* name : {"healthy.scn", "table2.scn", "bypass.scn", "startup_refused.scn",
                             "startup_degraded.scn", "remote_op.scn", "idr.scn", "dcsweep.scn"}) {
        CAPTURE(name);
        Simulation sim(load(name));
        sim.run();
        const auto& rs = sim.log().records();
        for (std::size_t i = 1; i < rs.size(); ++i) CHECK(rs[i].time >= rs[i - 1].time);
    }
}

TEST_CASE("open fault: detection then bypass, in causal order") {
    Simulation sim(load("bypass.scn"));
    sim.run();
    const EventLog& log = sim.log();

    const std::size_t i_fault = find_event(log, EventCategory::Fault, "l1");
    const std::size_t i_trig = find_event(log, EventCategory::Test, "mon1", "triggered=1");
    const std::size_t i_req = find_event(log, EventCategory::Bypass, "l1", "requested");
    const std::size_t i_apply = find_event(log, EventCategory::Bypass, "l1", "applied");
    REQUIRE(i_fault < log.size());
    REQUIRE(i_trig < log.size());
    REQUIRE(i_req < log.size());
    REQUIRE(i_apply < log.size());
    CHECK(i_fault < i_trig);
    CHECK(i_trig < i_req);
    CHECK(i_req < i_apply);

    // the second fault in the same segment is left unserved
    const std::size_t i_unmet = find_event(log, EventCategory::Bypass, "l2", "unmet_demand");
    CHECK(i_unmet < log.size());
    CHECK(find_event(log, EventCategory::Bypass, "l2", "applied") == log.size());
    CHECK(sim.manager().health().link_status.at("l1") == LinkStatus::Bypassed);
    CHECK(sim.manager().health().link_status.at("l2") == LinkStatus::Failed);

    // receiver restored through the linked pair
    const double v = sim.netlist().node_waveform("b1", 0.9, 0.91).sample(0.9);
    CHECK(v == doctest::Approx(3.5).epsilon(1e-6));

    // no test in the locked segment after the bypass application time
    const double t_apply = log.records()[i_apply].time;
    for (const auto& r : log.records())
        if (r.category == EventCategory::Test) CHECK(r.time <= t_apply);
}

TEST_CASE("segment accounting stays conserved after reconfiguration") {
    Simulation sim(load("bypass.scn"));
    sim.run();
    std::size_t locked = 0;
    for (const auto& seg : {std::string("s0")})
        if (sim.manager().segment_locked(seg)) ++locked;
    CHECK(sim.manager().bypasses().active().size() == locked);
    CHECK(locked + 0 == 1); // one segment, one active bypass
}

TEST_CASE("identical seeds give byte-identical logs") {
    for (const char* name : {"healthy.scn", "table2.scn", "bypass.scn", "idr.scn"}) {
        CAPTURE(name);
        Simulation a(load(name));
        Simulation b(load(name));
        a.run();
        b.run();
        CHECK(a.log().to_csv() == b.log().to_csv());
    }
}

TEST_CASE("different seeds still agree on decisions but not necessarily on noise") {
    Scenario s1 = load("healthy.scn");
    Scenario s2 = load("healthy.scn");
    s2.seed = s1.seed + 1;
    Simulation a(std::move(s1)), b(std::move(s2));
    a.run();
    b.run();
    CHECK(a.summarize().false_alarms == 0);
    CHECK(b.summarize().false_alarms == 0);
}

TEST_CASE("startup refusal on a critical path open") {
    Simulation sim(load("startup_refused.scn"));
    sim.run();
    const EventLog& log = sim.log();
    CHECK(find_event(log, EventCategory::Decision, "startup", "Refused") < log.size());
    CHECK(sim.manager().health().start_decision == StartDecision::Refused);
    // refused start: no monitoring loop, no bypass
    CHECK(find_event(log, EventCategory::Bypass, "", "applied") == log.size());
}

TEST_CASE("startup degrades and reconfigures on a non-critical open") {
    Simulation sim(load("startup_degraded.scn"));
    sim.run();
    const EventLog& log = sim.log();
    const std::size_t i_dec = find_event(log, EventCategory::Decision, "startup", "Degraded");
    const std::size_t i_req = find_event(log, EventCategory::Bypass, "lamp", "requested");
    const std::size_t i_apply = find_event(log, EventCategory::Bypass, "lamp", "applied");
    REQUIRE(i_dec < log.size());
    REQUIRE(i_req < log.size());
    REQUIRE(i_apply < log.size());
    CHECK(sim.manager().health().start_decision == StartDecision::Degraded);
    // monitoring continues on the unaffected critical segment
    std::size_t brake_tests = 0;
    for (const auto& r : log.records())
        if (r.category == EventCategory::Test && r.subject == "mon_brake") ++brake_tests;
    CHECK(brake_tests > 2);
}

TEST_CASE("remote operation: switch detected, motor injected, stopped on sensor") {
    Simulation sim(load("remote_op.scn"));
    sim.run();
    const EventLog& log = sim.log();

    const std::size_t i_loss = find_event(log, EventCategory::Fault, "mcu1");
    const std::size_t i_sw = find_event(log, EventCategory::Alert, "sw");
    const std::size_t i_inj = find_event(log, EventCategory::Bypass, "motor_en", "inject");
    const std::size_t i_run = find_event(log, EventCategory::Decision, "m1", "motor=running");
    const std::size_t i_sense = find_event(log, EventCategory::Alert, "sensor", "", i_run);
    const std::size_t i_rel = find_event(log, EventCategory::Bypass, "motor_en", "inject_released");
    const std::size_t i_stop = find_event(log, EventCategory::Decision, "m1", "motor=stopped");

    REQUIRE(i_loss < log.size());
    REQUIRE(i_sw < log.size());
    REQUIRE(i_inj < log.size());
    REQUIRE(i_run < log.size());
    REQUIRE(i_sense < log.size());
    REQUIRE(i_rel < log.size());
    REQUIRE(i_stop < log.size());
    CHECK(i_loss < i_sw);
    CHECK(i_sw < i_inj);
    CHECK(i_inj <= i_run);
    CHECK(i_run < i_sense);
    CHECK(i_sense <= i_rel);
    CHECK(i_rel <= i_stop);

    // the switch transition was observed near t=1, the stop near t=2.5
    CHECK(log.records()[i_sw].time == doctest::Approx(1.0).epsilon(0.15));
    CHECK(log.records()[i_stop].time == doctest::Approx(2.5).epsilon(0.1));
}

TEST_CASE("idr scenario localizes and excludes the stuck channel") {
    Simulation sim(load("idr.scn"));
    sim.run();
    const EventLog& log = sim.log();
    const std::size_t i_fault = find_event(log, EventCategory::Fault, "lamp2");
    const std::size_t i_loc = find_event(log, EventCategory::Idr, "lamp2", "localized");
    const std::size_t i_exc = find_event(log, EventCategory::Idr, "lamp2", "excluded");
    REQUIRE(i_fault < log.size());
    REQUIRE(i_loc < log.size());
    REQUIRE(i_exc < log.size());
    CHECK(i_fault < i_loc);
    // detection within one rotation period (4 channels at 100 Hz = 40 ms)
    const double latency = log.records()[i_loc].time - log.records()[i_fault].time;
    CHECK(latency <= 0.04 + 1e-9);
    REQUIRE(sim.rotation().has_value());
    CHECK(sim.rotation()->excluded.count("lamp2") == 1);
}

TEST_CASE("achieved dc sweep rate matches the analytic cost model within 5%") {
    Simulation sim(load("dcsweep.scn"));
    sim.run();
    const Report rep = sim.summarize();
    REQUIRE(rep.achieved_loop_rate > 0.0);

    // analytic model with this scenario's chain traffic as the per-test cost
    const Scenario& sc = sim.scenario();
    TimingParams p;
    p.f_tck = sc.f_tck;
    p.n_nodes = sc.tests.size();
    p.mode = TimingParams::Mode::Best;
    p.config_cycles_initial =
        static_cast<double>(sc.tests.size() * configure_cost(sc.chain).tck_cycles);
    const double expected = loop_rate(p);
    CHECK(rep.achieved_loop_rate == doctest::Approx(expected).epsilon(0.05));
}

TEST_CASE("event intervals match the analytic per-test total within a tick") {
    Simulation sim(load("dcsweep.scn"));
    sim.run();
    const Scenario& sc = sim.scenario();
    const double t_con =
        static_cast<double>(configure_cost(sc.chain).tck_cycles) / sc.f_tck;
    const double expected = t_con + kAdcCapture;
    std::vector<double> times;
    for (const auto& r : sim.log().records())
        if (r.category == EventCategory::Test) times.push_back(r.time);
    REQUIRE(times.size() > 20);
    for (std::size_t i = 1; i < 20; ++i)
        CHECK(times[i] - times[i - 1] == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("report aggregates detections and latency") {
    Simulation sim(load("bypass.scn"));
    sim.run();
    const Report rep = sim.summarize();
    CHECK(rep.detections >= 2);
    CHECK(rep.bypasses == 1);
    CHECK(rep.unmet_demands == 1);
    CHECK(rep.false_alarms == 0);
    REQUIRE(rep.fault_outcomes.size() == 2);
    for (const auto& f : rep.fault_outcomes) {
        REQUIRE(f.detected.has_value());
        CHECK(*f.detected >= f.onset);
        CHECK(*f.detected - f.onset < 0.2); // within two scheduling sweeps
    }
    const std::string text = rep.to_text();
    CHECK(text.find("bypasses applied:   1") != std::string::npos);
}

TEST_CASE("tests in a bypassed segment are refused outright") {
    Simulation sim(load("bypass.scn"));
    sim.run();
    // the pair is linked; running either descriptor by hand must refuse
    REQUIRE(sim.manager().segment_locked("s0"));
    CHECK_THROWS_AS(sim.manager().execute_test(sim.scenario().tests[1], 2.0), SegmentBusy);
}

TEST_CASE("injection preconditions: bus access and a free pair") {
    Scenario sc = load("bypass.scn");
    sc.net.add_node({"orphan", SignalClass::DigitalHigh, Waveform::dc(1.0), false, 0.0});
    Simulation sim(std::move(sc));
    sim.run(); // ends with pair 0 consumed by the l1 bypass
    CHECK_THROWS_AS(sim.manager().inject_signal("orphan", Waveform::dc(3.5), 2.0), NoAbmAccess);
    CHECK_THROWS_AS(sim.manager().inject_signal("a2", Waveform::dc(3.5), 2.0), SegmentBusy);
}

TEST_CASE("critical duty drift raises a critical alert") {
    // healthy.scn's speed node is critical; a drift fault pulls its duty off
    // the reference without creating an interconnect failure
    Scenario sc = load("healthy.scn");
    sc.faults.push_back({0.3, FaultKind::StuckLow, "speed", 1.0});
    Simulation sim(std::move(sc));
    sim.run();
    const std::size_t i = find_event(sim.log(), EventCategory::Alert, "speed", "critical");
    REQUIRE(i < sim.log().size());
    CHECK(sim.log().records()[i].time >= 0.3);
}

TEST_CASE("every descriptor runs at least once per period while segments are free") {
    Simulation sim(load("healthy.scn"));
    sim.run();
    std::map<std::string, std::size_t> runs;
    for (const auto& r : sim.log().records())
        if (r.category == EventCategory::Test) ++runs[r.subject];
    // a full sweep is bounded by the sum of all measurement windows plus
    // configuration slack; every descriptor must keep up with the slower of
    // its own period and that sweep time
    double sweep = 0.0;
    for (const auto& d : sim.scenario().tests) {
        switch (d.kind) {
        case TestKind::Dc: sweep += kAdcCapture; break;
        case TestKind::Spectrum: sweep += std::max(d.window, 10.0 / d.reference); break;
        default: sweep += d.window; break;
        }
        sweep += 0.001; // configuration allowance
    }
    for (const auto& d : sim.scenario().tests) {
        CAPTURE(d.id);
        const double cadence = std::max(d.period, sweep);
        const double floor_runs = sim.scenario().duration / cadence - 2.0;
        CHECK(static_cast<double>(runs[d.id]) >= floor_runs);
    }
}

TEST_CASE("characterization runs leave failures in place") {
    Scenario sc = load("table2.scn");
    CHECK_FALSE(sc.auto_reconfig);
    Simulation sim(std::move(sc));
    sim.run();
    // alerts instead of bypass traffic, and monitoring never stops
    CHECK(find_event(sim.log(), EventCategory::Bypass, "", "") == sim.log().size());
    std::size_t post_fault_tests = 0;
    for (const auto& r : sim.log().records())
        if (r.category == EventCategory::Test && r.time > 0.2) ++post_fault_tests;
    CHECK(post_fault_tests > 50);
    for (const auto& [link, st] : sim.manager().health().link_status) {
        CAPTURE(link);
        CHECK(st != LinkStatus::Bypassed);
        // every class except the undetectable analogue ground ends up failed
        if (link != "ag") CHECK(st == LinkStatus::Failed);
    }
}

TEST_CASE("rotation schedule logging honours the decimation setting") {
    Simulation quiet(load("idr.scn"));
    quiet.run();
    CHECK(find_event(quiet.log(), EventCategory::Idr, "schedule") == quiet.log().size());

    Simulation verbose(load("idr.scn"));
    verbose.set_idr_log_every(1);
    verbose.run();
    std::size_t schedule_lines = 0;
    for (const auto& r : verbose.log().records())
        if (r.category == EventCategory::Idr && r.subject == "schedule") ++schedule_lines;
    CHECK(schedule_lines >= 10); // one per rotation period over 0.5 s at 100 Hz
}

TEST_CASE("run_scenario convenience returns the same log as a manual run") {
    const Scenario sc = load("healthy.scn");
    Simulation sim(sc);
    sim.run();
    const EventLog log2 = run_scenario(sc);
    CHECK(sim.log().to_csv() == log2.to_csv());
}
