// SPDX-License-Identifier: Apache-2.0
#include "ecusim/log.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace ecusim {

const char* to_string(EventCategory c) {
    switch (c) {
    case EventCategory::Test: return "test";
    case EventCategory::Fault: return "fault";
    case EventCategory::Bypass: return "bypass";
    case EventCategory::Idr: return "idr";
    case EventCategory::Alert: return "alert";
    case EventCategory::Decision: return "decision";
    }
    return "?";
}

void EventLog::add(double time, EventCategory cat, std::string subject, std::string detail) {
    records_.push_back({time, cat, std::move(subject), std::move(detail)});
}

void EventLog::finalize() {
    std::stable_sort(records_.begin(), records_.end(),
                     [](const EventRecord& a, const EventRecord& b) { return a.time < b.time; });
}

std::string format_time(double t) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.9f", t);
    return buf;
}

std::string format_value(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

void EventLog::write_csv(std::ostream& os) const {
    for (const auto& r : records_) {
        os << format_time(r.time) << ',' << to_string(r.category) << ',' << r.subject << ','
           << r.detail << '\n';
    }
}

std::string EventLog::to_csv() const {
    std::ostringstream ss;
    write_csv(ss);
    return ss.str();
}

} // namespace ecusim
