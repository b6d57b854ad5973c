// SPDX-License-Identifier: Apache-2.0
#include "ecusim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ecusim/errors.hpp"
#include "ecusim/reconfig.hpp"

namespace ecusim {
namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream ss(s);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& s, std::size_t line) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError(line, "bad number: " + s);
    }
}

std::uint64_t parse_u64(const std::string& s, std::size_t line) {
    try {
        std::size_t pos = 0;
        std::uint64_t v = std::stoull(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError(line, "bad unsigned integer: " + s);
    }
}

bool parse_yesno(const std::string& s, std::size_t line) {
    if (s == "yes") return true;
    if (s == "no") return false;
    throw ParseError(line, "expected yes|no, got " + s);
}

// key=value fields of one line, after any positional tokens
struct Fields {
    std::vector<std::pair<std::string, std::string>> kv;
    std::size_t line;

    const std::string* find(const std::string& key) const {
        for (const auto& [k, v] : kv)
            if (k == key) return &v;
        return nullptr;
    }
    const std::string& require(const std::string& key) const {
        if (const std::string* v = find(key)) return *v;
        throw ParseError(line, "missing " + key + "=...");
    }
};

Fields parse_fields(const std::vector<std::string>& toks, std::size_t first, std::size_t line) {
    Fields f;
    f.line = line;
    for (std::size_t i = first; i < toks.size(); ++i) {
        const auto eq = toks[i].find('=');
        if (eq == std::string::npos) throw ParseError(line, "expected key=value, got " + toks[i]);
        f.kv.emplace_back(toks[i].substr(0, eq), toks[i].substr(eq + 1));
    }
    return f;
}

SignalClass parse_class(const std::string& s, std::size_t line) {
    if (s == "digital_high") return SignalClass::DigitalHigh;
    if (s == "digital_low") return SignalClass::DigitalLow;
    if (s == "pull_up") return SignalClass::PullUp;
    if (s == "pull_down") return SignalClass::PullDown;
    if (s == "pwm") return SignalClass::Pwm;
    if (s == "analog_ground") return SignalClass::AnalogGround;
    if (s == "hall") return SignalClass::Hall;
    throw ParseError(line, "unknown signal class: " + s);
}

DeviceKind parse_device_kind(const std::string& s, std::size_t line) {
    if (s == "lamp") return DeviceKind::Lamp;
    if (s == "buzzer") return DeviceKind::Buzzer;
    if (s == "hs_driver") return DeviceKind::HsDriver;
    if (s == "ls_driver") return DeviceKind::LsDriver;
    if (s == "hall") return DeviceKind::Hall;
    if (s == "switch") return DeviceKind::Switch;
    if (s == "mcu") return DeviceKind::Mcu;
    if (s == "motor") return DeviceKind::Motor;
    throw ParseError(line, "unknown device kind: " + s);
}

TestKind parse_test_kind(const std::string& s, std::size_t line) {
    if (s == "dc") return TestKind::Dc;
    if (s == "interconnect") return TestKind::Interconnect;
    if (s == "duty") return TestKind::Duty;
    if (s == "spectrum") return TestKind::Spectrum;
    throw ParseError(line, "unknown test kind: " + s);
}

} // namespace

Waveform parse_waveform_expr(const std::string& expr) {
    const std::string e = trim(expr);
    if (e == "hiz") return Waveform::high_z();
    const auto open = e.find('(');
    if (open == std::string::npos || e.back() != ')')
        throw std::invalid_argument("bad waveform expression: " + e);
    const std::string name = e.substr(0, open);
    const std::string inner = e.substr(open + 1, e.size() - open - 2);
    std::vector<double> args;
    if (!trim(inner).empty()) {
        for (const auto& part : split_commas(inner)) {
            std::size_t pos = 0;
            const std::string p = trim(part);
            double v = std::stod(p, &pos);
            if (pos != p.size()) throw std::invalid_argument("bad number in waveform: " + p);
            args.push_back(v);
        }
    }
    if (name == "dc" && args.size() == 1) return Waveform::dc(args[0]);
    if (name == "sine" && (args.size() == 2 || args.size() == 3))
        return Waveform::sine(args[0], args[1], args.size() == 3 ? args[2] : 0.0);
    if (name == "pwm" && args.size() == 4) {
        if (args[3] < 0.0 || args[3] > 1.0)
            throw std::invalid_argument("pwm duty must be within [0,1]");
        return Waveform::pwm(args[0], args[1], args[2], args[3]);
    }
    if (name == "pulses" && args.size() >= 3)
        return Waveform::pulses(args[0], args[1], {args.begin() + 2, args.end()});
    throw std::invalid_argument("bad waveform expression: " + e);
}

Scenario parse_scenario(const std::string& text) {
    Scenario sc;
    enum class Section { None, Netlist, Chain, Buses, Idr, Faults, Tests, Run };
    Section section = Section::None;
    bool have_run = false;

    struct PendingTest {
        TestDescriptor d;
        std::size_t line;
    };
    std::vector<PendingTest> pending_tests;
    struct PendingFault {
        Fault f;
        std::size_t line;
    };
    std::vector<PendingFault> pending_faults;
    std::vector<std::pair<IdrDecl, std::size_t>> idr_decls;

    std::istringstream in(text);
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        if (const auto h = line.find('#'); h != std::string::npos) line = line.substr(0, h);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line == "[netlist]") section = Section::Netlist;
            else if (line == "[chain]") section = Section::Chain;
            else if (line == "[buses]") section = Section::Buses;
            else if (line == "[idr]") section = Section::Idr;
            else if (line == "[faults]") section = Section::Faults;
            else if (line == "[tests]") section = Section::Tests;
            else if (line == "[run]") section = Section::Run;
            else throw ParseError(lineno, "unknown section " + line);
            continue;
        }

        const auto toks = split_ws(line);
        try {
            switch (section) {
            case Section::None:
                throw ParseError(lineno, "content before any [section]");

            case Section::Netlist: {
                if (toks[0] == "node") {
                    if (toks.size() < 2) throw ParseError(lineno, "node needs a name");
                    const Fields f = parse_fields(toks, 2, lineno);
                    EcuNode n;
                    n.name = toks[1];
                    n.cls = parse_class(f.require("class"), lineno);
                    n.critical = parse_yesno(f.require("critical"), lineno);
                    n.source = parse_waveform_expr(f.require("source"));
                    if (const auto* b = f.find("bias")) n.bias = parse_double(*b, lineno);
                    sc.net.add_node(std::move(n));
                } else if (toks[0] == "link") {
                    if (toks.size() < 2) throw ParseError(lineno, "link needs a name");
                    const Fields f = parse_fields(toks, 2, lineno);
                    Interconnect l;
                    l.name = toks[1];
                    l.from = f.require("from");
                    l.to = f.require("to");
                    l.has_abm = parse_yesno(f.require("abm"), lineno);
                    sc.net.add_link(std::move(l));
                } else if (toks[0] == "device") {
                    if (toks.size() < 2) throw ParseError(lineno, "device needs a name");
                    const Fields f = parse_fields(toks, 2, lineno);
                    EcuDevice d;
                    d.name = toks[1];
                    d.kind = parse_device_kind(f.require("kind"), lineno);
                    for (const auto& p : split_commas(f.require("ports")))
                        d.ports.push_back(trim(p));
                    sc.net.add_device(std::move(d));
                } else {
                    throw ParseError(lineno, "expected node|link|device, got " + toks[0]);
                }
                break;
            }

            case Section::Chain: {
                if (toks[0] != "device" || toks.size() < 2)
                    throw ParseError(lineno, "expected: device <name> ir=<bits> cells=<count>");
                const Fields f = parse_fields(toks, 2, lineno);
                DeviceScanModel d;
                d.name = toks[1];
                d.ir_length = static_cast<unsigned>(parse_u64(f.require("ir"), lineno));
                d.boundary_cells = static_cast<unsigned>(parse_u64(f.require("cells"), lineno));
                for (const auto& other : sc.chain)
                    if (other.name == d.name)
                        throw ParseError(lineno, "duplicate chain device " + d.name);
                sc.chain.push_back(std::move(d));
                break;
            }

            case Section::Buses: {
                if (toks[0] == "segment") {
                    if (toks.size() < 2) throw ParseError(lineno, "segment needs a name");
                    const Fields f = parse_fields(toks, 2, lineno);
                    BusSegment s;
                    s.name = toks[1];
                    s.pair_index = static_cast<std::size_t>(parse_u64(f.require("pair"), lineno));
                    for (const auto& n : split_commas(f.require("nodes")))
                        s.nodes.push_back(trim(n));
                    sc.segments.push_back(std::move(s));
                } else {
                    const Fields f = parse_fields(toks, 0, lineno);
                    sc.bus_pairs = static_cast<std::size_t>(parse_u64(f.require("pairs"), lineno));
                    if (sc.bus_pairs < 1) throw ParseError(lineno, "pairs must be >= 1");
                }
                break;
            }

            case Section::Idr: {
                const Fields f = parse_fields(toks, 0, lineno);
                IdrDecl decl;
                for (const auto& d : split_commas(f.require("drivers")))
                    decl.drivers.push_back(trim(d));
                for (const auto& l : split_commas(f.require("logicals")))
                    decl.logicals.push_back(trim(l));
                decl.frequency = parse_double(f.require("freq"), lineno);
                idr_decls.emplace_back(std::move(decl), lineno);
                break;
            }

            case Section::Faults: {
                const Fields f = parse_fields(toks, 0, lineno);
                Fault flt;
                flt.onset = parse_double(f.require("at"), lineno);
                const std::string kind = f.require("kind");
                if (kind == "open") flt.kind = FaultKind::OpenInterconnect;
                else if (kind == "stuck0") flt.kind = FaultKind::StuckLow;
                else if (kind == "stuck1") flt.kind = FaultKind::StuckHigh;
                else if (kind == "short_gnd") flt.kind = FaultKind::ShortToGround;
                else if (kind == "power_loss") flt.kind = FaultKind::PowerLoss;
                else if (kind.rfind("drift:", 0) == 0) {
                    flt.kind = FaultKind::ParametricDrift;
                    flt.drift_gain = parse_double(kind.substr(6), lineno);
                } else {
                    throw ParseError(lineno, "unknown fault kind: " + kind);
                }
                flt.target = f.require("target");
                if (flt.onset < 0) throw ParseError(lineno, "fault onset must be >= 0");
                pending_faults.push_back({std::move(flt), lineno});
                break;
            }

            case Section::Tests: {
                if (toks[0] != "test" || toks.size() < 2)
                    throw ParseError(lineno, "expected: test <id> kind=... target=...");
                const Fields f = parse_fields(toks, 2, lineno);
                TestDescriptor d;
                d.id = toks[1];
                d.kind = parse_test_kind(f.require("kind"), lineno);
                d.target = f.require("target");
                d.reference = parse_double(f.require("ref"), lineno);
                d.tolerance = parse_double(f.require("tol"), lineno);
                d.period = parse_double(f.require("period"), lineno);
                if (const auto* w = f.find("window")) d.window = parse_double(*w, lineno);
                if (d.period <= 0) throw ParseError(lineno, "test period must be > 0");
                for (const auto& other : pending_tests)
                    if (other.d.id == d.id) throw ParseError(lineno, "duplicate test id " + d.id);
                pending_tests.push_back({std::move(d), lineno});
                break;
            }

            case Section::Run: {
                const Fields f = parse_fields(toks, 0, lineno);
                sc.duration = parse_double(f.require("duration"), lineno);
                if (const auto* s = f.find("seed")) sc.seed = parse_u64(*s, lineno);
                if (const auto* t = f.find("tck")) sc.f_tck = parse_double(*t, lineno);
                if (const auto* r = f.find("reconfig")) {
                    if (*r == "auto") sc.auto_reconfig = true;
                    else if (*r == "off") sc.auto_reconfig = false;
                    else throw ParseError(lineno, "reconfig must be auto|off");
                }
                if (sc.duration <= 0) throw ParseError(lineno, "duration must be > 0");
                if (sc.f_tck <= 0) throw ParseError(lineno, "tck must be > 0");
                have_run = true;
                break;
            }
            }
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception& e) {
            throw ParseError(lineno, e.what());
        }
    }

    if (!have_run) throw ParseError(lineno, "missing [run] section");

    // ---- cross-reference validation -------------------------------------
    if (sc.segments.empty() && !pending_tests.empty()) {
        try {
            sc.segments = plan_segments(sc.net, sc.bus_pairs);
        } catch (const NoAbmNodes&) {
            throw DanglingReference(lineno, "tests declared but no node has bus access");
        }
    }
    for (const auto& s : sc.segments) {
        if (s.pair_index >= sc.bus_pairs)
            throw DanglingReference(lineno, "segment " + s.name + " names pair " +
                                                std::to_string(s.pair_index) + " of " +
                                                std::to_string(sc.bus_pairs));
        for (const auto& n : s.nodes)
            if (!sc.net.find_node(n))
                throw DanglingReference(lineno, "segment node " + n);
    }
    // a node may sit in at most one segment
    {
        std::vector<std::string> seen;
        for (const auto& s : sc.segments)
            for (const auto& n : s.nodes) {
                if (std::find(seen.begin(), seen.end(), n) != seen.end())
                    throw ParseError(lineno, "node " + n + " appears in two segments");
                seen.push_back(n);
            }
    }
    // one pair per segment
    {
        std::vector<std::size_t> used;
        for (const auto& s : sc.segments) {
            if (std::find(used.begin(), used.end(), s.pair_index) != used.end())
                throw ParseError(lineno, "bus pair " + std::to_string(s.pair_index) +
                                             " owned by two segments");
            used.push_back(s.pair_index);
        }
    }

    auto segment_containing = [&](const std::string& node) -> const BusSegment* {
        for (const auto& s : sc.segments)
            if (std::find(s.nodes.begin(), s.nodes.end(), node) != s.nodes.end()) return &s;
        return nullptr;
    };

    for (auto& [d, line] : pending_tests) {
        if (d.kind == TestKind::Interconnect) {
            const Interconnect* l = sc.net.find_link(d.target);
            if (!l) throw DanglingReference(line, "test target link " + d.target);
            const BusSegment* sa = segment_containing(l->from);
            const BusSegment* sb = segment_containing(l->to);
            if (!sa || !sb) throw DanglingReference(line, "link " + d.target + " not on a bus segment");
            if (sa != sb)
                throw ParseError(line, "link " + d.target + " spans two bus segments");
            d.segment = sa->name;
        } else {
            if (!sc.net.find_node(d.target))
                throw DanglingReference(line, "test target node " + d.target);
            const BusSegment* s = segment_containing(d.target);
            if (!s) throw DanglingReference(line, "node " + d.target + " not on a bus segment");
            d.segment = s->name;
        }
        sc.tests.push_back(d);
    }

    if (!pending_tests.empty() && sc.chain.empty())
        throw ParseError(lineno, "tests require a [chain] section");

    for (auto& [f, line] : pending_faults) {
        try {
            EcuNetlist probe = sc.net; // validates the target without keeping it
            probe.inject_fault(f);
        } catch (const UnknownTarget& e) {
            // IDR driver faults target devices; device checks are in inject_fault
            throw DanglingReference(line, e.what());
        }
        sc.faults.push_back(f);
    }
    std::stable_sort(sc.faults.begin(), sc.faults.end(),
                     [](const Fault& a, const Fault& b) { return a.onset < b.onset; });

    if (!idr_decls.empty()) {
        if (idr_decls.size() > 1)
            throw ParseError(idr_decls[1].second, "only one [idr] declaration allowed");
        auto& [decl, line] = idr_decls.front();
        if (!(decl.frequency > 85.0))
            throw ParseError(line, "idr frequency must be above 85 Hz");
        for (const auto& name : decl.drivers)
            if (!sc.net.find_device(name))
                throw DanglingReference(line, "idr driver device " + name);
        sc.idr = decl;
    }

    return sc;
}

Scenario parse_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, "cannot open scenario file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

} // namespace ecusim
