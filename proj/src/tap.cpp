// SPDX-License-Identifier: Apache-2.0
#include "ecusim/tap.hpp"

#include <algorithm>
#include <stdexcept>

#include "ecusim/errors.hpp"

namespace ecusim {

TapState step_tms(TapState s, bool tms) {
    switch (s) {
    case TapState::TestLogicReset: return tms ? TapState::TestLogicReset : TapState::RunTestIdle;
    case TapState::RunTestIdle:    return tms ? TapState::SelectDrScan : TapState::RunTestIdle;
    case TapState::SelectDrScan:   return tms ? TapState::SelectIrScan : TapState::CaptureDr;
    case TapState::CaptureDr:      return tms ? TapState::Exit1Dr : TapState::ShiftDr;
    case TapState::ShiftDr:        return tms ? TapState::Exit1Dr : TapState::ShiftDr;
    case TapState::Exit1Dr:        return tms ? TapState::UpdateDr : TapState::PauseDr;
    case TapState::PauseDr:        return tms ? TapState::Exit2Dr : TapState::PauseDr;
    case TapState::Exit2Dr:        return tms ? TapState::UpdateDr : TapState::ShiftDr;
    case TapState::UpdateDr:       return tms ? TapState::SelectDrScan : TapState::RunTestIdle;
    case TapState::SelectIrScan:   return tms ? TapState::TestLogicReset : TapState::CaptureIr;
    case TapState::CaptureIr:      return tms ? TapState::Exit1Ir : TapState::ShiftIr;
    case TapState::ShiftIr:        return tms ? TapState::Exit1Ir : TapState::ShiftIr;
    case TapState::Exit1Ir:        return tms ? TapState::UpdateIr : TapState::PauseIr;
    case TapState::PauseIr:        return tms ? TapState::Exit2Ir : TapState::PauseIr;
    case TapState::Exit2Ir:        return tms ? TapState::UpdateIr : TapState::ShiftIr;
    case TapState::UpdateIr:       return tms ? TapState::SelectDrScan : TapState::RunTestIdle;
    }
    return TapState::TestLogicReset; // unreachable
}

const char* to_string(TapState s) {
    switch (s) {
    case TapState::TestLogicReset: return "Test-Logic-Reset";
    case TapState::RunTestIdle:    return "Run-Test/Idle";
    case TapState::SelectDrScan:   return "Select-DR-Scan";
    case TapState::CaptureDr:      return "Capture-DR";
    case TapState::ShiftDr:        return "Shift-DR";
    case TapState::Exit1Dr:        return "Exit1-DR";
    case TapState::PauseDr:        return "Pause-DR";
    case TapState::Exit2Dr:        return "Exit2-DR";
    case TapState::UpdateDr:       return "Update-DR";
    case TapState::SelectIrScan:   return "Select-IR-Scan";
    case TapState::CaptureIr:      return "Capture-IR";
    case TapState::ShiftIr:        return "Shift-IR";
    case TapState::Exit1Ir:        return "Exit1-IR";
    case TapState::PauseIr:        return "Pause-IR";
    case TapState::Exit2Ir:        return "Exit2-IR";
    case TapState::UpdateIr:       return "Update-IR";
    }
    return "?";
}

TapEngine::TapEngine(std::vector<DeviceScanModel> devices) : devices_(std::move(devices)) {
    if (devices_.empty()) throw std::invalid_argument("scan chain must have at least one device");
    for (auto& d : devices_) {
        if (d.ir_length == 0 || d.ir_length > 31)
            throw std::invalid_argument("ir length out of range for device " + d.name);
        if (d.boundary_cells == 0)
            throw std::invalid_argument("boundary cell count must be > 0 for device " + d.name);
        d.boundary_register.assign(d.boundary_cells, 0);
        d.current_instruction = d.bypass_code();
    }
    reset();
    go_idle();
}

void TapEngine::clock(bool tms, std::uint8_t tdi) {
    std::uint8_t out = 0;
    if (state_ == TapState::ShiftDr) out = shift_chain(ScanPath::Dr, tdi);
    else if (state_ == TapState::ShiftIr) out = shift_chain(ScanPath::Ir, tdi);
    tdo_ = out;

    const TapState next = step_tms(state_, tms);
    // Capture/update actions fire on entry to the respective states.
    if (next != state_) {
        switch (next) {
        case TapState::CaptureDr: capture(ScanPath::Dr); break;
        case TapState::CaptureIr: capture(ScanPath::Ir); break;
        case TapState::UpdateDr:  update(ScanPath::Dr); break;
        case TapState::UpdateIr:  update(ScanPath::Ir); break;
        case TapState::TestLogicReset:
            for (auto& d : devices_) d.current_instruction = d.bypass_code();
            break;
        default: break;
        }
    }
    state_ = next;
    ++cycle_;
    if (trace_) {
        trace_->push_back(std::to_string(cycle_) + "," + std::to_string(tms ? 1 : 0) + "," +
                          std::to_string(tdi & 1) + "," + std::to_string(tdo_ & 1));
    }
}

void TapEngine::reset() {
    for (int i = 0; i < 5; ++i) clock(true);
}

void TapEngine::go_idle() {
    while (state_ != TapState::RunTestIdle) clock(false);
}

std::size_t TapEngine::path_length(ScanPath p) const {
    std::size_t n = 0;
    for (const auto& d : devices_) n += (p == ScanPath::Ir) ? d.ir_length : d.dr_length();
    return n;
}

std::uint8_t TapEngine::shift_chain(ScanPath p, std::uint8_t tdi) {
    std::uint8_t carry = tdi & 1;
    for (auto& d : devices_) {
        if (p == ScanPath::Ir) {
            std::uint8_t out = d.ir_shift.back();
            for (std::size_t i = d.ir_shift.size() - 1; i > 0; --i) d.ir_shift[i] = d.ir_shift[i - 1];
            d.ir_shift[0] = carry;
            carry = out;
        } else if (d.bypass_selected()) {
            std::uint8_t out = d.bypass_reg;
            d.bypass_reg = carry;
            carry = out;
        } else {
            std::uint8_t out = d.dr_shift.back();
            for (std::size_t i = d.dr_shift.size() - 1; i > 0; --i) d.dr_shift[i] = d.dr_shift[i - 1];
            d.dr_shift[0] = carry;
            carry = out;
        }
    }
    return carry;
}

void TapEngine::capture(ScanPath p) {
    for (auto& d : devices_) {
        if (p == ScanPath::Ir) {
            // standard mandates the two LSBs capture 01
            d.ir_shift.assign(d.ir_length, 0);
            d.ir_shift[0] = 1;
        } else if (d.bypass_selected()) {
            d.bypass_reg = 0;
        } else {
            d.dr_shift = d.boundary_register;
        }
    }
}

void TapEngine::update(ScanPath p) {
    for (auto& d : devices_) {
        if (p == ScanPath::Ir) {
            std::uint32_t code = 0;
            for (unsigned i = 0; i < d.ir_length; ++i)
                if (d.ir_shift[i]) code |= (1u << i);
            d.current_instruction = code;
        } else if (!d.bypass_selected()) {
            d.boundary_register = d.dr_shift;
        }
    }
}

ScanResult TapEngine::scan(ScanPath p, std::span<const std::uint8_t> tdi) {
    if (state_ != TapState::RunTestIdle)
        throw std::logic_error("scan requires the controller in Run-Test/Idle");
    const std::size_t len = path_length(p);
    if (tdi.size() != len)
        throw LengthMismatch("scan vector length " + std::to_string(tdi.size()) +
                             " does not match path length " + std::to_string(len));

    const std::uint64_t start = cycle_;
    ScanResult r;
    r.tdo.reserve(len);

    clock(true); // Select-DR-Scan
    if (p == ScanPath::Ir) clock(true); // Select-IR-Scan
    clock(false); // Capture
    clock(false); // enter Shift
    for (std::size_t k = 0; k < len; ++k) {
        clock(k + 1 == len, tdi[k]); // the final shift clock exits to Exit1
        r.tdo.push_back(tdo_);
    }
    clock(true);  // Update
    clock(false); // Run-Test/Idle
    r.cost.tck_cycles = cycle_ - start;
    return r;
}

namespace {

std::vector<std::uint8_t> instruction_bits(const DeviceScanModel& d, std::uint32_t code) {
    std::vector<std::uint8_t> bits(d.ir_length, 0);
    for (unsigned i = 0; i < d.ir_length; ++i) bits[i] = (code >> i) & 1u;
    return bits;
}

// After L shift clocks, chain position p (0 nearest TDI) holds tdi[L-1-p]:
// the stream that lands a desired register image is its reverse.
std::vector<std::uint8_t> reversed(std::vector<std::uint8_t> v) {
    std::reverse(v.begin(), v.end());
    return v;
}

} // namespace

CycleCount TapEngine::configure(const std::map<std::string, std::vector<std::uint8_t>>& targets,
                                std::uint32_t instruction) {
    for (const auto& [name, vec] : targets) {
        auto it = std::find_if(devices_.begin(), devices_.end(),
                               [&](const DeviceScanModel& d) { return d.name == name; });
        if (it == devices_.end()) throw UnknownDevice(name);
        if (vec.size() != it->boundary_cells)
            throw LengthMismatch("boundary vector for " + name + " has " +
                                 std::to_string(vec.size()) + " bits, device has " +
                                 std::to_string(it->boundary_cells) + " cells");
    }

    // IR pass: the access instruction for targets, BYPASS elsewhere.
    std::vector<std::uint8_t> ir_stream;
    for (const auto& d : devices_) {
        const bool hit = targets.count(d.name) > 0;
        auto bits = instruction_bits(d, hit ? instruction : d.bypass_code());
        ir_stream.insert(ir_stream.end(), bits.begin(), bits.end());
    }
    CycleCount total = scan(ScanPath::Ir, reversed(std::move(ir_stream))).cost;

    // DR pass over the freshly selected path.
    std::vector<std::uint8_t> dr_stream;
    for (const auto& d : devices_) {
        if (auto it = targets.find(d.name); it != targets.end())
            dr_stream.insert(dr_stream.end(), it->second.begin(), it->second.end());
        else
            dr_stream.push_back(0);
    }
    total += scan(ScanPath::Dr, reversed(std::move(dr_stream))).cost;
    return total;
}

CycleCount configure_cost(const std::vector<DeviceScanModel>& devices,
                          const std::vector<std::string>& targeted) {
    std::size_t ir_len = 0, dr_len = 0;
    for (const auto& d : devices) {
        ir_len += d.ir_length;
        const bool hit = targeted.empty() ||
                         std::find(targeted.begin(), targeted.end(), d.name) != targeted.end();
        dr_len += hit ? d.boundary_cells : 1;
    }
    // IR scan: L+6 edges, DR scan: L+5 edges, from/to Run-Test/Idle.
    return CycleCount{ir_len + 6 + dr_len + 5};
}

} // namespace ecusim
