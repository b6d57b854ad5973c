// SPDX-License-Identifier: Apache-2.0
#ifndef ECUSIM_LOG_HPP
#define ECUSIM_LOG_HPP

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace ecusim {

enum class EventCategory { Test, Fault, Bypass, Idr, Alert, Decision };

const char* to_string(EventCategory c);

struct EventRecord {
    double time = 0.0;
    EventCategory category = EventCategory::Test;
    std::string subject;
    std::string detail;
};

/// Ordered run record. Events may be appended slightly out of order while
/// the simulation interleaves processes; finalize() restores global time
/// order with a stable sort so equal-time causality is preserved and the
/// output is byte-stable for a given (scenario, seed).
class EventLog {
public:
    void add(double time, EventCategory cat, std::string subject, std::string detail);
    void finalize();

    const std::vector<EventRecord>& records() const { return records_; }
    std::size_t size() const { return records_.size(); }

    /// CSV lines "time,category,subject,detail" with fixed 9-decimal times.
    void write_csv(std::ostream& os) const;
    std::string to_csv() const;

private:
    std::vector<EventRecord> records_;
};

/// Fixed-format helpers so logs and reports are byte-stable.
std::string format_time(double t);   // 9 decimals
std::string format_value(double v);  // 6 decimals

} // namespace ecusim

#endif
