// SPDX-License-Identifier: Apache-2.0
#ifndef ECUSIM_ERRORS_HPP
#define ECUSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ecusim {

// Base for all simulator errors so callers can catch one type at the CLI
// boundary and map it to an exit code.
class SimError : public std::runtime_error {
public:
    explicit SimError(const std::string& what) : std::runtime_error(what) {}
};

class UnresolvedHighZ : public SimError {
public:
    UnresolvedHighZ() : SimError("sampled a high-impedance waveform before resolution") {}
};

class LengthMismatch : public SimError {
public:
    explicit LengthMismatch(const std::string& what) : SimError(what) {}
};

class UnknownDevice : public SimError {
public:
    explicit UnknownDevice(const std::string& name) : SimError("unknown device: " + name) {}
};

class BusConflict : public SimError {
public:
    explicit BusConflict(const std::string& what) : SimError(what) {}
};

class BadChannel : public SimError {
public:
    explicit BadChannel(const std::string& what) : SimError(what) {}
};

class UnknownTarget : public SimError {
public:
    explicit UnknownTarget(const std::string& name) : SimError("unknown fault target: " + name) {}
};

class UnknownNode : public SimError {
public:
    explicit UnknownNode(const std::string& name) : SimError("unknown node: " + name) {}
};

class NotADriver : public SimError {
public:
    explicit NotADriver(const std::string& name) : SimError("device is not a smart driver: " + name) {}
};

class NoEdges : public SimError {
public:
    NoEdges() : SimError("signal has no usable edges in the measurement window") {}
};

class NoSignal : public SimError {
public:
    NoSignal() : SimError("signal amplitude below the measurable floor") {}
};

class SegmentBusy : public SimError {
public:
    explicit SegmentBusy(const std::string& what) : SimError(what) {}
};

class NoAbmAccess : public SimError {
public:
    explicit NoAbmAccess(const std::string& name) : SimError("node has no analog test access: " + name) {}
};

class CapacityExhausted : public SimError {
public:
    explicit CapacityExhausted(const std::string& what) : SimError(what) {}
};

class LastDriver : public SimError {
public:
    explicit LastDriver(const std::string& name)
        : SimError("cannot exclude the last remaining driver: " + name) {}
};

class AmbiguousProfile : public SimError {
public:
    explicit AmbiguousProfile(const std::string& what) : SimError(what) {}
};

class NoAbmNodes : public SimError {
public:
    NoAbmNodes() : SimError("netlist declares no nodes with analog test access") {}
};

// Scenario loading errors carry a line number when one is known.
class ParseError : public SimError {
public:
    ParseError(std::size_t line, const std::string& what)
        : SimError("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class DanglingReference : public SimError {
public:
    DanglingReference(std::size_t line, const std::string& what)
        : SimError("line " + std::to_string(line) + ": unresolved reference: " + what) {}
};

} // namespace ecusim

#endif
