// SPDX-License-Identifier: Apache-2.0
#ifndef ECUSIM_TAP_HPP
#define ECUSIM_TAP_HPP

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace ecusim {

/// IEEE 1149.1 TAP controller states.
enum class TapState : std::uint8_t {
    TestLogicReset,
    RunTestIdle,
    SelectDrScan,
    CaptureDr,
    ShiftDr,
    Exit1Dr,
    PauseDr,
    Exit2Dr,
    UpdateDr,
    SelectIrScan,
    CaptureIr,
    ShiftIr,
    Exit1Ir,
    PauseIr,
    Exit2Ir,
    UpdateIr,
};

/// Standard successor function; total over (state, tms).
TapState step_tms(TapState s, bool tms);

const char* to_string(TapState s);

/// TCK cycle cost of a vector operation; additive over concatenation.
struct CycleCount {
    std::uint64_t tck_cycles = 0;

    CycleCount& operator+=(CycleCount o) {
        tck_cycles += o.tck_cycles;
        return *this;
    }
    friend CycleCount operator+(CycleCount a, CycleCount b) { return {a.tck_cycles + b.tck_cycles}; }
    friend bool operator==(CycleCount a, CycleCount b) { return a.tck_cycles == b.tck_cycles; }
};

/// One device on the chain: instruction register, boundary register and the
/// mandatory 1-bit bypass register.
struct DeviceScanModel {
    std::string name;
    unsigned ir_length = 4;
    unsigned boundary_cells = 8;

    // Instruction codes. BYPASS is all-ones as the standard requires; the
    // others are assigned sequentially from zero.
    static constexpr std::uint32_t kExtest = 0;
    static constexpr std::uint32_t kSamplePreload = 1;
    static constexpr std::uint32_t kProbe = 2;
    std::uint32_t bypass_code() const { return (1u << ir_length) - 1u; }

    std::uint32_t current_instruction = 0; // set to bypass_code() on reset
    std::vector<std::uint8_t> boundary_register = {}; // sized boundary_cells

    bool bypass_selected() const { return current_instruction == bypass_code(); }
    std::size_t dr_length() const { return bypass_selected() ? 1 : boundary_cells; }

    // shift stages (not externally meaningful between scans)
    std::vector<std::uint8_t> ir_shift = {};
    std::vector<std::uint8_t> dr_shift = {};
    std::uint8_t bypass_reg = 0;
};

enum class ScanPath { Ir, Dr };

struct ScanResult {
    std::vector<std::uint8_t> tdo;
    CycleCount cost;
};

/// TAP controller plus the scan chain it clocks. TDI enters device 0, TDO
/// exits the last device. Cost counts every TCK edge from leaving
/// Run-Test/Idle until it is re-entered.
class TapEngine {
public:
    explicit TapEngine(std::vector<DeviceScanModel> devices);

    TapState state() const { return state_; }
    std::uint64_t cycle() const { return cycle_; }
    const std::vector<DeviceScanModel>& devices() const { return devices_; }

    /// One TCK with the given TMS value. Shifting happens on clocks applied
    /// while the controller sits in a Shift state.
    void clock(bool tms, std::uint8_t tdi = 0);

    /// Five TMS=1 clocks; lands in Test-Logic-Reset from any state and
    /// reselects BYPASS everywhere.
    void reset();

    /// Leave Test-Logic-Reset for Run-Test/Idle.
    void go_idle();

    std::size_t path_length(ScanPath p) const;

    /// Full scan from Run-Test/Idle back to Run-Test/Idle. |tdi| must equal
    /// the current path length (LengthMismatch otherwise). Registers update
    /// on Update-IR/Update-DR.
    ScanResult scan(ScanPath p, std::span<const std::uint8_t> tdi);

    /// One IR scan selecting `instruction` (EXTEST for boundary control,
    /// PROBE for analog bus access) on every targeted device and BYPASS on
    /// the rest, then one DR scan applying the boundary vectors. Returns the
    /// summed cost. Always pays the full scan, even if nothing changed.
    CycleCount configure(const std::map<std::string, std::vector<std::uint8_t>>& targets,
                         std::uint32_t instruction = DeviceScanModel::kExtest);

    /// Last TDO bit clocked out (valid after shift clocks).
    std::uint8_t tdo() const { return tdo_; }

    /// When set, every clock appends a "cycle,tms,tdi,tdo" line.
    void set_trace(std::vector<std::string>* sink) { trace_ = sink; }

private:
    std::uint8_t shift_chain(ScanPath p, std::uint8_t tdi);
    void capture(ScanPath p);
    void update(ScanPath p);

    std::vector<DeviceScanModel> devices_;
    TapState state_ = TapState::TestLogicReset;
    std::uint64_t cycle_ = 0;
    std::uint8_t tdo_ = 0;
    std::vector<std::string>* trace_ = nullptr;
};

/// Pure cost of a configure() call on this chain with the named devices
/// targeted, without touching any state. IR scans always span every device;
/// the DR path counts boundary cells for targeted devices and one bypass bit
/// for the rest. An empty target list means every device is targeted (a full
/// reconfiguration).
CycleCount configure_cost(const std::vector<DeviceScanModel>& devices,
                          const std::vector<std::string>& targeted = {});

} // namespace ecusim

#endif
