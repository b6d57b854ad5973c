// SPDX-License-Identifier: Apache-2.0
#include "ecusim/idr.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ecusim/errors.hpp"

namespace ecusim {

void RotationSchedule::validate() const {
    if (!(frequency > 85.0))
        throw std::invalid_argument("rotation frequency must be above 85 Hz");
    if (drivers.empty()) throw std::invalid_argument("rotation needs at least one driver");
    if (logicals.empty()) throw std::invalid_argument("rotation needs at least one logical");
    for (const auto& e : excluded)
        if (std::find(drivers.begin(), drivers.end(), e) == drivers.end())
            throw std::invalid_argument("excluded name is not a driver: " + e);
    if (active().empty()) throw std::invalid_argument("all drivers excluded");
}

std::vector<std::string> RotationSchedule::active() const {
    std::vector<std::string> a;
    for (const auto& d : drivers)
        if (!excluded.count(d)) a.push_back(d);
    return a;
}

std::uint64_t RotationSchedule::step_at(double t) const {
    if (t < 0.0) throw std::invalid_argument("rotation time must be >= 0");
    return static_cast<std::uint64_t>(std::floor(t * frequency));
}

std::map<std::size_t, std::size_t> mapping_at_step(const RotationSchedule& s, std::uint64_t step) {
    const auto act = s.active();
    const std::size_t n = act.size();
    const std::size_t m = s.logicals.size();
    if (n == 0) throw std::invalid_argument("no active drivers");

    std::map<std::size_t, std::size_t> out;
    if (m <= n) {
        for (std::size_t i = 0; i < m; ++i) out[i] = (i + step) % n;
        return out;
    }
    // More logicals than drivers: m-n logicals sit this step out, chosen
    // cyclically so the skip rotates through all of them.
    const std::size_t skip_count = m - n;
    std::set<std::size_t> skipped;
    for (std::size_t r = 0; r < skip_count; ++r) skipped.insert((step + r) % m);
    std::size_t j = 0;
    for (std::size_t i = 0; i < m; ++i) {
        if (skipped.count(i)) continue;
        out[i] = (j + step) % n;
        ++j;
    }
    return out;
}

std::map<std::string, std::string> rotate_mapping(const RotationSchedule& s, double t) {
    const auto act = s.active();
    std::map<std::string, std::string> out;
    for (const auto& [li, di] : mapping_at_step(s, s.step_at(t)))
        out[s.logicals[li]] = act[di];
    return out;
}

bool FaultProfile::any() const {
    for (const auto& phases : anomaly_phases)
        if (!phases.empty()) return true;
    return false;
}

namespace {

void check_observation_shape(const RotationSchedule& s,
                             const std::vector<std::vector<bool>>& observed,
                             const std::vector<bool>& demand) {
    if (observed.size() != s.drivers.size())
        throw std::invalid_argument("one observation row per physical driver expected");
    if (demand.size() != s.logicals.size())
        throw std::invalid_argument("one demand per logical expected");
    const std::size_t steps = observed.empty() ? 0 : observed.front().size();
    if (steps < s.period_steps())
        throw std::invalid_argument("observations must cover one full rotation period");
    for (const auto& row : observed)
        if (row.size() != steps) throw std::invalid_argument("ragged observation rows");
}

std::size_t physical_index(const RotationSchedule& s, const std::string& name) {
    const auto it = std::find(s.drivers.begin(), s.drivers.end(), name);
    return static_cast<std::size_t>(it - s.drivers.begin());
}

} // namespace

FaultProfile build_fault_profile(const RotationSchedule& s, std::uint64_t start_step,
                                 const std::vector<std::vector<bool>>& observed,
                                 const std::vector<bool>& demand) {
    check_observation_shape(s, observed, demand);
    const auto act = s.active();

    // analyze exactly one period so a phase index identifies the step
    FaultProfile p;
    p.anomaly_phases.resize(s.logicals.size());
    for (std::size_t k = 0; k < act.size(); ++k) {
        const auto map = mapping_at_step(s, start_step + k);
        for (const auto& [li, di] : map) {
            const std::size_t d = physical_index(s, act[di]);
            if (observed[d][k] != demand[li]) p.anomaly_phases[li].push_back(k);
        }
    }
    return p;
}

std::optional<std::string> detect_and_localize(const RotationSchedule& s, std::uint64_t start_step,
                                               const std::vector<std::vector<bool>>& observed,
                                               const std::vector<bool>& demand) {
    check_observation_shape(s, observed, demand);
    const auto act = s.active();
    const std::size_t n = act.size();

    std::set<std::string> culprits;

    // every logical-level anomaly maps back to the driver serving that phase
    const FaultProfile profile = build_fault_profile(s, start_step, observed, demand);
    for (std::size_t li = 0; li < profile.anomaly_phases.size(); ++li) {
        for (const std::size_t phase : profile.anomaly_phases[li]) {
            const auto map = mapping_at_step(s, start_step + phase);
            culprits.insert(s.drivers[physical_index(s, act[map.at(li)])]);
        }
    }
    // a driver active while serving nothing is its own anomaly
    for (std::size_t k = 0; k < n; ++k) {
        const auto map = mapping_at_step(s, start_step + k);
        std::vector<bool> serving(s.drivers.size(), false);
        for (const auto& [li, di] : map) serving[physical_index(s, act[di])] = true;
        for (std::size_t d = 0; d < s.drivers.size(); ++d)
            if (!serving[d] && observed[d][k]) culprits.insert(s.drivers[d]);
    }

    if (culprits.empty()) return std::nullopt;
    if (culprits.size() > 1)
        throw AmbiguousProfile("anomaly profile matches " + std::to_string(culprits.size()) +
                               " drivers; single-fault localization impossible");
    return *culprits.begin();
}

RotationSchedule exclude(RotationSchedule s, const std::string& driver) {
    if (std::find(s.drivers.begin(), s.drivers.end(), driver) == s.drivers.end())
        throw std::invalid_argument("not a driver: " + driver);
    if (s.excluded.count(driver))
        throw std::invalid_argument("driver already excluded: " + driver);
    if (s.active().size() <= 1) throw LastDriver(driver);
    s.excluded.insert(driver);
    return s;
}

} // namespace ecusim
