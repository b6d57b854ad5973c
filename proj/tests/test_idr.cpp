// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "ecusim/errors.hpp"
#include "ecusim/idr.hpp"

using namespace ecusim;

namespace {

RotationSchedule four_channel() {
    RotationSchedule s;
    s.drivers = {"lamp1", "lamp2", "lamp3", "buzzer"};
    s.logicals = {"ind1", "ind2", "ind3", "ind4"};
    s.frequency = 100.0;
    return s;
}

// Brute-force observation builder: simulate one rotation period with a set of
// stuck-off drivers and all logicals demanded on.
std::vector<std::vector<bool>> observe_period(const RotationSchedule& s, std::uint64_t start_step,
                                              std::size_t steps,
                                              const std::set<std::string>& stuck_off) {
    const auto act = s.active();
    std::vector<std::vector<bool>> obs(s.drivers.size(), std::vector<bool>(steps, false));
    for (std::size_t k = 0; k < steps; ++k) {
        const auto map = mapping_at_step(s, start_step + k);
        for (const auto& [li, di] : map) {
            const std::string& name = act[di];
            const auto phys =
                std::find(s.drivers.begin(), s.drivers.end(), name) - s.drivers.begin();
            const bool healthy_on = true; // all demanded on
            obs[static_cast<std::size_t>(phys)][k] = healthy_on && !stuck_off.count(name);
        }
    }
    return obs;
}

} // namespace

TEST_CASE("t=0 maps logicals to drivers one-to-one") {
    const RotationSchedule s = four_channel();
    const auto map = rotate_mapping(s, 0.0);
    CHECK(map.at("ind1") == "lamp1");
    CHECK(map.at("ind2") == "lamp2");
    CHECK(map.at("ind3") == "lamp3");
    CHECK(map.at("ind4") == "buzzer");
}

TEST_CASE("one step later every logical shifts to the next driver") {
    const RotationSchedule s = four_channel();
    const auto map = rotate_mapping(s, 0.0101); // just past the first step at 100 Hz
    CHECK(map.at("ind1") == "lamp2");
    CHECK(map.at("ind2") == "lamp3");
    CHECK(map.at("ind3") == "buzzer");
    CHECK(map.at("ind4") == "lamp1");
}

TEST_CASE("at 100 Hz and t=0.25 s the shift is 25 mod 4 = 1") {
    const RotationSchedule s = four_channel();
    CHECK(s.step_at(0.25) == 25);
    const auto map = rotate_mapping(s, 0.25);
    CHECK(map.at("ind1") == "lamp2");
}

TEST_CASE("mapping is injective at every step") {
    RotationSchedule s = four_channel();
    for (std::uint64_t k = 0; k < 48; ++k) {
        const auto map = mapping_at_step(s, k);
        std::set<std::size_t> used;
        for (const auto& [li, di] : map) CHECK(used.insert(di).second);
    }
    s = exclude(s, "lamp2"); // 4 logicals on 3 drivers
    for (std::uint64_t k = 0; k < 48; ++k) {
        const auto map = mapping_at_step(s, k);
        std::set<std::size_t> used;
        for (const auto& [li, di] : map) CHECK(used.insert(di).second);
    }
}

TEST_CASE("rotation never maps onto an excluded driver") {
    RotationSchedule s = exclude(four_channel(), "lamp3");
    for (double t = 0.0; t < 1.0; t += 0.037) {
        for (const auto& [logical, driver] : rotate_mapping(s, t)) CHECK(driver != "lamp3");
    }
}

TEST_CASE("coverage: over one macro-period every logical sees every active driver equally") {
    RotationSchedule s = exclude(four_channel(), "lamp2");
    const std::size_t macro = 12; // lcm(4 logicals, 3 drivers)
    std::map<std::pair<std::size_t, std::size_t>, int> counts;
    std::vector<int> served(s.logicals.size(), 0);
    for (std::uint64_t k = 0; k < macro; ++k) {
        for (const auto& [li, di] : mapping_at_step(s, k)) {
            ++counts[{li, di}];
            ++served[li];
        }
    }
    for (std::size_t li = 0; li < s.logicals.size(); ++li) {
        CHECK(served[li] == 9); // 3 of every 4 steps
        for (std::size_t di = 0; di < 3; ++di) CHECK(counts[{li, di}] == 3);
    }
}

TEST_CASE("healthy rotation conveys every demand at every step") {
    const RotationSchedule s = four_channel();
    const std::size_t n = s.period_steps();
    const auto obs = observe_period(s, 0, n, {});
    CHECK_FALSE(detect_and_localize(s, 0, obs, {true, true, true, true}).has_value());
    // every logical lit whenever sampled: with M == |A| someone serves it on
    // each step, so the time-averaged output equals the demand
    for (std::uint64_t k = 0; k < n; ++k) CHECK(mapping_at_step(s, k).size() == 4);
}

TEST_CASE("stuck-off driver localizes from a single rotation period") {
    const RotationSchedule s = four_channel();
    for (const char* culprit : {"lamp1", "lamp2", "lamp3", "buzzer"}) {
        const auto obs = observe_period(s, 0, s.period_steps(), {culprit});
        const auto got = detect_and_localize(s, 0, obs, {true, true, true, true});
        REQUIRE(got.has_value());
        CHECK(*got == culprit);
    }
    // arbitrary period alignment localizes too
    const auto obs = observe_period(s, 17, s.period_steps(), {"lamp3"});
    CHECK(*detect_and_localize(s, 17, obs, {true, true, true, true}) == "lamp3");
}

TEST_CASE("fault profile pins anomalies to the culprit's phases") {
    const RotationSchedule s = four_channel();
    const auto obs = observe_period(s, 0, s.period_steps(), {"lamp2"});
    const FaultProfile p = build_fault_profile(s, 0, obs, {true, true, true, true});
    CHECK(p.any());
    REQUIRE(p.anomaly_phases.size() == 4);
    const auto act = s.active();
    for (std::size_t li = 0; li < 4; ++li) {
        // each logical is dark exactly once per period: when lamp2 serves it
        REQUIRE(p.anomaly_phases[li].size() == 1);
        const std::size_t phase = p.anomaly_phases[li][0];
        CHECK(phase < act.size());
        CHECK(act[mapping_at_step(s, phase).at(li)] == "lamp2");
    }
    // a healthy period has an empty profile
    const auto clean = observe_period(s, 0, s.period_steps(), {});
    CHECK_FALSE(build_fault_profile(s, 0, clean, {true, true, true, true}).any());
}

TEST_CASE("two simultaneous stuck drivers are ambiguous") {
    const RotationSchedule s = four_channel();
    const auto obs = observe_period(s, 0, s.period_steps(), {"lamp1", "lamp3"});
    CHECK_THROWS_AS(detect_and_localize(s, 0, obs, {true, true, true, true}), AmbiguousProfile);
}

TEST_CASE("exclusion keeps all logicals served at >= 75% duty") {
    RotationSchedule s = exclude(four_channel(), "lamp2");
    const std::size_t macro = 12;
    std::vector<int> served(4, 0);
    for (std::uint64_t k = 0; k < macro; ++k)
        for (const auto& [li, di] : mapping_at_step(s, k)) ++served[li];
    for (int c : served) CHECK(static_cast<double>(c) / macro >= 0.75);
}

TEST_CASE("exclusion guards") {
    RotationSchedule s = four_channel();
    s = exclude(s, "lamp1");
    CHECK_THROWS_AS(exclude(s, "lamp1"), std::invalid_argument); // twice
    s = exclude(s, "lamp2");
    s = exclude(s, "lamp3");
    CHECK_THROWS_AS(exclude(s, "buzzer"), LastDriver);
}

TEST_CASE("rotation frequency must exceed 85 Hz") {
    RotationSchedule s = four_channel();
    s.frequency = 60.0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s.frequency = 100.0;
    CHECK_NOTHROW(s.validate());
}
