// Copyright 2026 The deatool authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "deatool/csv_io.hpp"
#include "deatool/domain.hpp"
#include "deatool/report.hpp"
#include "deatool/scope.hpp"
#include "deatool/synth.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadInput = 1;
constexpr int kExitSolverFailure = 2;
constexpr int kExitBadFlags = 3;

deatool::Cohort load_cohort(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw deatool::CsvError(1, 1, "cannot open '" + path + "'");
    return deatool::validate_cohort(deatool::read_csv(in));
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
    out << content;
}

deatool::ReportFormat parse_format(const std::string& name) {
    if (name == "csv") return deatool::ReportFormat::Csv;
    if (name == "json") return deatool::ReportFormat::Json;
    return deatool::ReportFormat::Text;
}

void print_discrimination(const deatool::Cohort& cohort, std::ostream& out) {
    const auto entries = deatool::check_discrimination(cohort, /*per_group=*/true);
    out << "Discrimination check (Psi >= max(M*N, 3*(M+N)) = "
        << deatool::discrimination_threshold(cohort.n_inputs, cohort.n_outputs) << ")\n";
    for (const auto& e : entries)
        out << "  " << e.scope_label << ": Psi=" << e.psi << " threshold=" << e.threshold
            << " -> " << (e.pass ? "PASS" : "FAIL") << "\n";
}

/// Flat key = value format; `group.<label> = <count>` rows keep file order.
deatool::GenSpec read_gen_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open spec file '" + path + "'");
    deatool::GenSpec spec;
    spec.n_inputs = 0;
    spec.n_outputs = 0;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            if (line.find_first_not_of(" \t\r") != std::string::npos)
                throw std::invalid_argument("spec line " + std::to_string(lineno) +
                                            ": expected key = value");
            continue;
        }
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        bool known = true;
        try {
            if (key == "n_inputs")
                spec.n_inputs = std::stoi(value);
            else if (key == "n_outputs")
                spec.n_outputs = std::stoi(value);
            else if (key == "seed")
                spec.seed = std::stoull(value);
            else if (key == "input_low")
                spec.input_range.first = std::stod(value);
            else if (key == "input_high")
                spec.input_range.second = std::stod(value);
            else if (key == "noise")
                spec.technology_noise = std::stod(value);
            else if (key.starts_with("group."))
                spec.group_sizes.emplace_back(key.substr(6), std::stoi(value));
            else
                known = false;
        } catch (const std::logic_error&) {
            throw std::invalid_argument("spec line " + std::to_string(lineno) +
                                        ": bad value for '" + key + "'");
        }
        if (!known)
            throw std::invalid_argument("spec line " + std::to_string(lineno) +
                                        ": unknown key '" + key + "'");
    }
    return spec;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Input-oriented DEA efficiency and benchmarking toolkit"};
    app.require_subcommand(1);

    std::string input, output, rts = "crs", scope = "group", format = "text";
    std::string excess_mode = "all", spec_path;
    std::uint64_t seed = 0;
    bool paper_default = false;

    auto add_rts = [&](CLI::App* cmd) {
        cmd->add_option("--rts", rts, "returns to scale")
            ->check(CLI::IsMember({"crs", "vrs"}));
    };
    auto add_format = [&](CLI::App* cmd) {
        cmd->add_option("--format", format, "output format")
            ->check(CLI::IsMember({"csv", "json", "text"}));
    };
    auto add_excess = [&](CLI::App* cmd) {
        cmd->add_option("--excess-mode", excess_mode,
                        "denominator of the average excess proportion")
            ->check(CLI::IsMember({"all", "inefficient-only"}));
    };

    auto* analyze = app.add_subcommand("analyze", "score one scope of a cohort");
    analyze->add_option("--input", input, "cohort CSV")->required();
    analyze->add_option("--output", output, "report file (default stdout)");
    analyze->add_option("--scope", scope, "group or global")
        ->check(CLI::IsMember({"group", "global"}));
    add_rts(analyze);
    add_format(analyze);
    add_excess(analyze);

    auto* compare = app.add_subcommand("compare", "local vs global benchmarking");
    compare->add_option("--input", input, "cohort CSV")->required();
    compare->add_option("--output", output, "report file (default stdout)");
    add_rts(compare);
    add_format(compare);
    add_excess(compare);

    auto* generate = app.add_subcommand("generate", "emit a synthetic cohort CSV");
    generate->add_option("--spec", spec_path, "generator spec file");
    generate->add_flag("--paper-default", paper_default,
                       "1000 DMUs, 9 groups, 10 inputs, 6 outputs");
    generate->add_option("--seed", seed, "generator seed");
    generate->add_option("--output", output, "CSV file (default stdout)");

    auto* validate = app.add_subcommand("validate", "check a cohort CSV");
    validate->add_option("--input", input, "cohort CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitBadFlags;
    }

    try {
        if (analyze->parsed() || compare->parsed()) {
            const auto cohort = load_cohort(input);
            deatool::ModelSpec spec;
            spec.rts = rts == "vrs" ? deatool::ReturnsToScale::VRS
                                    : deatool::ReturnsToScale::CRS;
            const auto mode = excess_mode == "all" ? deatool::ExcessMode::AllDmus
                                                   : deatool::ExcessMode::InefficientOnly;
            deatool::ReportBundle bundle;
            if (analyze->parsed()) {
                bundle = deatool::make_analyze_report(cohort, spec, scope, mode);
            } else {
                if (cohort.groups.size() < 2)
                    std::cerr << "warning: single group, local and global scopes "
                                 "coincide\n";
                bundle = deatool::make_compare_report(cohort, spec, mode);
            }
            std::ostringstream buf;
            deatool::render(buf, bundle, parse_format(format));
            write_output(output, buf.str());
            return kExitOk;
        }
        if (generate->parsed()) {
            if (paper_default == !spec_path.empty()) {
                std::cerr << "error: pass exactly one of --spec or --paper-default\n";
                return kExitBadFlags;
            }
            deatool::GenSpec gen_spec;
            try {
                gen_spec = paper_default ? deatool::paper_default_spec(seed)
                                         : read_gen_spec(spec_path);
                if (generate->count("--seed") > 0) gen_spec.seed = seed;
                gen_spec.check();
            } catch (const std::invalid_argument& e) {
                std::cerr << "error: invalid generator spec: " << e.what() << "\n";
                return kExitBadFlags;
            }
            const auto cohort = deatool::generate(gen_spec);
            std::ostringstream buf;
            deatool::write_csv(buf, cohort);
            write_output(output, buf.str());
            // CSV on stdout: keep the check table off the data stream.
            print_discrimination(cohort,
                                 output.empty() || output == "-" ? std::cerr : std::cout);
            return kExitOk;
        }
        if (validate->parsed()) {
            const auto cohort = load_cohort(input);
            std::cout << "K=" << cohort.size() << " N=" << cohort.n_inputs
                      << " M=" << cohort.n_outputs << "\n";
            std::cout << "Groups:\n";
            for (const auto& g : cohort.groups)
                std::cout << "  " << g.label << ": " << g.member_indices.size() << "\n";
            print_discrimination(cohort, std::cout);
            return kExitOk;
        }
    } catch (const deatool::CsvError& e) {
        std::cerr << "error: malformed input: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const deatool::CohortError& e) {
        std::cerr << "error: invalid cohort: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const deatool::SolverFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolverFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    }
    return kExitBadFlags;
}
