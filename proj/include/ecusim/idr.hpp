// SPDX-License-Identifier: Apache-2.0
#ifndef ECUSIM_IDR_HPP
#define ECUSIM_IDR_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace ecusim {

/// Rotation plan for a bank of identical indicator channels (lamps, buzzer).
/// Logical indicators hop across the physical drivers every 1/frequency
/// seconds; the rate must stay above 85 Hz so the hopping is invisible to an
/// observer. Excluding a failed driver keeps every logical alive on the
/// remaining channels at reduced duty.
struct RotationSchedule {
    std::vector<std::string> drivers;  // physical channels, fixed order
    std::vector<std::string> logicals; // roaming indicator functions
    double frequency = 100.0;          // rotation steps per second, > 85
    std::set<std::string> excluded;

    void validate() const;
    std::vector<std::string> active() const; // drivers minus excluded, in order
    std::uint64_t step_at(double t) const;   // floor(t * frequency)
    double step_period() const { return 1.0 / frequency; }
    /// Steps in one rotation period (= number of active drivers).
    std::size_t period_steps() const { return active().size(); }
};

/// logical index -> active-driver index at an absolute rotation step. With as
/// many logicals as active drivers this is the cyclic bijection
/// logical i -> A[(i+K) mod |A|]; with more logicals than drivers, the
/// surplus logicals sit out one step each in rotation so every logical keeps
/// the same long-run share.
std::map<std::size_t, std::size_t> mapping_at_step(const RotationSchedule& s, std::uint64_t step);

/// Name-level mapping at a point in time.
std::map<std::string, std::string> rotate_mapping(const RotationSchedule& s, double t);

/// Anomaly record of one rotation period, viewed at the logical-indicator
/// level: for each logical, the relative phase indices where its observed
/// output contradicted its demand. Every phase index is below the number of
/// active drivers.
struct FaultProfile {
    std::vector<std::vector<std::size_t>> anomaly_phases; // [logical] -> phases
    bool any() const;
};

/// Fold one period of per-driver observations into the logical-level profile.
/// `observed[d][k]` is physical driver d's output at relative step k
/// (absolute step = start_step + k); `demand[l]` is logical l's commanded
/// state, constant over the period.
FaultProfile build_fault_profile(const RotationSchedule& s, std::uint64_t start_step,
                                 const std::vector<std::vector<bool>>& observed,
                                 const std::vector<bool>& demand);

/// Localize a faulty driver from one rotation period of observations: the
/// profile's anomalies must all fall on the phases where a single driver is
/// mapped (a driver lighting up while serving no logical counts against it
/// too). Returns nullopt when there is no anomaly and throws AmbiguousProfile
/// when the anomalies spread over more than one driver.
std::optional<std::string> detect_and_localize(const RotationSchedule& s, std::uint64_t start_step,
                                               const std::vector<std::vector<bool>>& observed,
                                               const std::vector<bool>& demand);

/// Copy of the schedule with `driver` excluded. Throws LastDriver when it
/// would empty the active set.
RotationSchedule exclude(RotationSchedule s, const std::string& driver);

} // namespace ecusim

#endif
