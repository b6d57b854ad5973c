// SPDX-License-Identifier: Apache-2.0
//
// ecusim command line: run scenario files, validate them, or print the
// analytic test-loop timing table.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ecusim/errors.hpp"
#include "ecusim/sim.hpp"
#include "ecusim/timing.hpp"

namespace {

int cmd_run(const std::string& file, const std::optional<std::string>& log_path,
            const std::optional<std::string>& report_path,
            const std::optional<std::uint64_t>& seed, std::size_t idr_log_every) {
    ecusim::Scenario sc = ecusim::parse_scenario_file(file);
    if (seed) sc.seed = *seed;

    ecusim::Simulation sim(std::move(sc));
    sim.set_idr_log_every(idr_log_every);
    sim.run();

    if (log_path && *log_path != "-") {
        std::ofstream out(*log_path);
        if (!out) {
            std::cerr << "cannot write log file: " << *log_path << '\n';
            return 2;
        }
        sim.log().write_csv(out);
    } else {
        sim.log().write_csv(std::cout);
    }

    const std::string report = sim.summarize().to_text();
    if (report_path) {
        if (*report_path == "-") {
            std::cout << report;
        } else {
            std::ofstream out(*report_path);
            if (!out) {
                std::cerr << "cannot write report file: " << *report_path << '\n';
                return 2;
            }
            out << report;
        }
    }
    return 0;
}

int cmd_check(const std::string& file) {
    ecusim::parse_scenario_file(file);
    std::cout << "ok\n";
    return 0;
}

int cmd_timing(std::size_t nodes, double tck, const std::string& mode,
               std::optional<double> config_cycles) {
    ecusim::TimingParams p;
    p.n_nodes = nodes;
    p.f_tck = tck;
    p.mode = (mode == "best") ? ecusim::TimingParams::Mode::Best
                              : ecusim::TimingParams::Mode::Worst;
    if (config_cycles) {
        if (p.mode == ecusim::TimingParams::Mode::Best) p.config_cycles_initial = *config_cycles;
        else p.config_cycles_full = *config_cycles;
    }

    std::printf("mode: %s  nodes: %zu  tck: %.0f Hz\n", mode.c_str(), nodes, tck);
    std::printf("%-12s %14s %14s %14s\n", "test kind", "t_con [s]", "t_test [s]", "t_total [s]");
    for (const auto kind :
         {ecusim::TestKind::Dc, ecusim::TestKind::Duty, ecusim::TestKind::Spectrum}) {
        const auto r = ecusim::t_total(p, kind);
        std::printf("%-12s %14.9f %14.9f %14.9f\n", ecusim::to_string(kind), r.t_con, r.t_test,
                    r.t_total);
    }
    std::printf("loop rate: %.6f Hz\n", ecusim::loop_rate(p));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Boundary-scan ECU on-line monitoring simulator"};
    app.require_subcommand(1);

    std::string file;
    std::optional<std::string> log_path, report_path;
    std::optional<std::uint64_t> seed;
    std::size_t idr_log_every = 0;

    auto* run = app.add_subcommand("run", "Run a scenario and emit the event log");
    run->add_option("file", file, "scenario file")->required();
    run->add_option("--log", log_path, "write the CSV event log here instead of stdout");
    run->add_option("--report", report_path, "write the summary report here ('-' for stdout)");
    run->add_option("--seed", seed, "override the scenario's seed");
    run->add_option("--idr-log", idr_log_every, "log every Nth rotation period (0 = off)");

    auto* check = app.add_subcommand("check", "Validate a scenario file");
    check->add_option("file", file, "scenario file")->required();

    std::size_t nodes = 10;
    double tck = 16e6;
    std::string mode = "worst";
    std::optional<double> config_cycles;
    auto* timing = app.add_subcommand("timing", "Print the analytic test-loop timing table");
    timing->add_option("--nodes", nodes, "monitored nodes per sweep")->capture_default_str();
    timing->add_option("--tck", tck, "test master clock in Hz")->capture_default_str();
    timing->add_option("--mode", mode, "best|worst")
        ->check(CLI::IsMember({"best", "worst"}))
        ->capture_default_str();
    timing->add_option("--config-cycles", config_cycles, "override the configuration cycle count");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(file, log_path, report_path, seed, idr_log_every);
        if (check->parsed()) return cmd_check(file);
        if (timing->parsed()) return cmd_timing(nodes, tck, mode, config_cycles);
    } catch (const ecusim::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return 1;
    } catch (const ecusim::DanglingReference& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return 1;
    } catch (const ecusim::SimError& e) {
        std::cerr << "runtime error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
