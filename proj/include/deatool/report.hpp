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

#ifndef DEATOOL_REPORT_HPP
#define DEATOOL_REPORT_HPP

#include <cstdint>
#include <cstdio>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "deatool/csv_io.hpp"
#include "deatool/domain.hpp"
#include "deatool/scope.hpp"

namespace deatool {

inline constexpr const char* kToolVersion = "0.1.0";

enum class ReportFormat { Csv, Json, Text };

/// Everything a run produced. Summary tables are redundant with per_dmu by
/// construction; they are recomputed, never stored independently.
struct ReportBundle {
    ReturnsToScale rts = ReturnsToScale::CRS;
    ModelSpec spec;
    ExcessMode excess_mode = ExcessMode::AllDmus;
    std::string scope;  // "group", "global" or "compare"
    std::optional<std::uint64_t> seed;

    std::vector<std::pair<std::string, int>> table1;  // group sizes
    std::vector<GroupScopeResult> local;              // table 2/3 analogues
    std::vector<GroupScopeResult> global_by_group;    // table 4/5 analogues
    std::vector<EfficiencyResult> global_results;     // pooled solve, cohort order
    std::optional<ScopeComparison> comparison;
};

inline ReportBundle make_analyze_report(const Cohort& cohort, const ModelSpec& spec,
                                        const std::string& scope, ExcessMode mode) {
    ReportBundle b;
    b.rts = spec.rts;
    b.spec = spec;
    b.excess_mode = mode;
    b.scope = scope;
    for (const auto& g : cohort.groups)
        b.table1.emplace_back(g.label, static_cast<int>(g.member_indices.size()));
    if (scope == "group") {
        b.local = analyze_local(cohort, spec, mode);
    } else {
        auto global = analyze_global(cohort, spec, mode);
        b.global_results = std::move(global.results);
        b.global_by_group = std::move(global.by_group);
    }
    return b;
}

inline ReportBundle make_compare_report(const Cohort& cohort, const ModelSpec& spec,
                                        ExcessMode mode) {
    ReportBundle b;
    b.rts = spec.rts;
    b.spec = spec;
    b.excess_mode = mode;
    b.scope = "compare";
    for (const auto& g : cohort.groups)
        b.table1.emplace_back(g.label, static_cast<int>(g.member_indices.size()));
    b.local = analyze_local(cohort, spec, mode);
    auto global = analyze_global(cohort, spec, mode);
    b.global_results = std::move(global.results);
    b.global_by_group = std::move(global.by_group);

    // Reassemble the comparison from the two runs already in hand.
    ScopeComparison cmp;
    int total = 0;
    for (const auto& [label, psi] : b.table1) total += psi;
    cmp.per_dmu.resize(total);
    int gi = 0;
    for (const auto& g : b.local) {
        GroupComparison gc;
        gc.group = g.group;
        gc.local_summary = g.summary;
        gc.global_summary = b.global_by_group[gi].summary;
        gc.local_slacks = g.slacks;
        gc.global_slacks = b.global_by_group[gi].slacks;
        for (size_t pos = 0; pos < g.results.size(); ++pos) {
            const auto& loc = g.results[pos];
            const auto& glob = b.global_by_group[gi].results[pos];
            if (glob.theta < loc.theta - spec.efficiency_tolerance) ++gc.worse_count;
            if (loc.status == EfficiencyStatus::Efficient &&
                glob.status != EfficiencyStatus::Efficient)
                ++gc.shifted_count;
        }
        gc.worse_pct = 100.0 * gc.worse_count / gc.local_summary.psi;
        gc.shifted_pct = 100.0 * gc.shifted_count / gc.local_summary.psi;
        gc.pivotal_changed =
            gc.local_slacks.pivotal_input != gc.global_slacks.pivotal_input;
        cmp.worse_total += gc.worse_count;
        cmp.shifted_total += gc.shifted_count;
        cmp.groups.push_back(std::move(gc));
        ++gi;
    }
    // Per-DMU pairs: global results are cohort-ordered, match local by id.
    {
        std::map<std::string, std::pair<const EfficiencyResult*, std::string>> local_by_id;
        for (const auto& g : b.local)
            for (const auto& r : g.results) local_by_id[r.dmu_id] = {&r, g.group};
        int idx = 0;
        for (const auto& r : b.global_results) {
            const auto& [loc, group] = local_by_id.at(r.dmu_id);
            cmp.per_dmu[idx++] = {r.dmu_id,   group,    loc->theta,
                                  r.theta,    loc->status, r.status};
        }
    }
    cmp.worse_fraction = static_cast<double>(cmp.worse_total) / total;
    b.comparison = std::move(cmp);
    return b;
}

// ---------------------------------------------------------------------------
// Rendering

inline std::string fmt_fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

namespace detail {

using ordered_json = nlohmann::ordered_json;

inline ordered_json json_vector(const Eigen::VectorXd& v) {
    ordered_json arr = ordered_json::array();
    for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

inline ordered_json json_result(const EfficiencyResult& r) {
    ordered_json j;
    j["dmu_id"] = r.dmu_id;
    j["theta"] = r.theta;
    j["status"] = to_string(r.status);
    ordered_json lambdas = ordered_json::object();
    for (const auto& [peer, w] : r.lambdas) lambdas[peer] = w;
    j["lambdas"] = lambdas;
    j["input_slacks"] = json_vector(r.input_slacks);
    j["output_slacks"] = json_vector(r.output_slacks);
    j["input_targets"] = json_vector(r.input_targets);
    j["output_targets"] = json_vector(r.output_targets);
    return j;
}

inline ordered_json json_group_summary(const GroupSummary& s) {
    ordered_json j;
    j["group"] = s.group;
    j["psi"] = s.psi;
    j["avg_theta"] = s.avg_theta;
    j["std_theta"] = s.std_theta;
    j["min_theta"] = s.min_theta;
    j["efficient_count"] = s.efficient_count;
    j["efficient_pct"] = s.efficient_pct;
    j["frontier_count"] = s.frontier_count;
    j["frontier_pct"] = s.frontier_pct;
    return j;
}

inline ordered_json json_slack_summary(const SlackSummary& s) {
    ordered_json j;
    j["group"] = s.group;
    j["excess_pct"] = json_vector(s.excess_pct);
    j["pivotal_input"] = s.pivotal_input + 1;  // 1-based, matches X1..XN labels
    return j;
}

inline ordered_json json_scope_block(const std::vector<GroupScopeResult>& groups) {
    ordered_json arr = ordered_json::array();
    for (const auto& g : groups) {
        ordered_json j;
        j["group"] = g.group;
        j["summary"] = json_group_summary(g.summary);
        j["slacks"] = json_slack_summary(g.slacks);
        arr.push_back(j);
    }
    return arr;
}

}  // namespace detail

inline nlohmann::ordered_json json_report(const ReportBundle& b) {
    using detail::ordered_json;
    ordered_json doc;

    ordered_json meta;
    meta["tool_version"] = kToolVersion;
    meta["rts"] = b.rts == ReturnsToScale::CRS ? "crs" : "vrs";
    meta["orientation"] = "input";
    meta["scope"] = b.scope;
    meta["excess_mode"] =
        b.excess_mode == ExcessMode::AllDmus ? "all" : "inefficient-only";
    meta["efficiency_tolerance"] = b.spec.efficiency_tolerance;
    meta["zero_tolerance"] = b.spec.zero_tolerance;
    if (b.seed) meta["seed"] = *b.seed;
    ordered_json sizes = ordered_json::object();
    for (const auto& [label, psi] : b.table1) sizes[label] = psi;
    meta["group_sizes"] = sizes;
    doc["metadata"] = meta;

    ordered_json per_dmu = ordered_json::array();
    if (!b.local.empty() && b.global_results.empty()) {
        for (const auto& g : b.local)
            for (const auto& r : g.results) {
                auto j = detail::json_result(r);
                j["group"] = g.group;
                j["scope"] = "local";
                per_dmu.push_back(j);
            }
    } else if (b.local.empty()) {
        for (const auto& r : b.global_results) per_dmu.push_back(detail::json_result(r));
    } else {
        // compare: one entry per DMU with both scopes
        std::map<std::string, const EfficiencyResult*> local_by_id;
        std::map<std::string, std::string> group_by_id;
        for (const auto& g : b.local)
            for (const auto& r : g.results) {
                local_by_id[r.dmu_id] = &r;
                group_by_id[r.dmu_id] = g.group;
            }
        for (const auto& r : b.global_results) {
            ordered_json j;
            j["dmu_id"] = r.dmu_id;
            j["group"] = group_by_id.at(r.dmu_id);
            j["local"] = detail::json_result(*local_by_id.at(r.dmu_id));
            j["global"] = detail::json_result(r);
            per_dmu.push_back(j);
        }
    }
    doc["per_dmu"] = per_dmu;

    doc["local"] = b.local.empty() ? ordered_json() : detail::json_scope_block(b.local);
    doc["global"] = b.global_by_group.empty() ? ordered_json()
                                              : detail::json_scope_block(b.global_by_group);

    if (b.comparison) {
        const auto& cmp = *b.comparison;
        ordered_json j;
        ordered_json groups = ordered_json::array();
        for (const auto& gc : cmp.groups) {
            ordered_json g;
            g["group"] = gc.group;
            g["worse_count"] = gc.worse_count;
            g["worse_pct"] = gc.worse_pct;
            g["shifted_count"] = gc.shifted_count;
            g["shifted_pct"] = gc.shifted_pct;
            g["pivotal_changed"] = gc.pivotal_changed;
            g["pivotal_local"] = gc.local_slacks.pivotal_input + 1;
            g["pivotal_global"] = gc.global_slacks.pivotal_input + 1;
            groups.push_back(g);
        }
        j["groups"] = groups;
        j["worse_total"] = cmp.worse_total;
        j["worse_fraction"] = cmp.worse_fraction;
        j["shifted_total"] = cmp.shifted_total;
        doc["comparison"] = j;
    } else {
        doc["comparison"] = detail::ordered_json();
    }
    return doc;
}

namespace detail {

inline void text_summary_table(std::ostream& out, const std::string& title,
                               const std::vector<GroupScopeResult>& groups,
                               const GroupComparison* cmp_begin, size_t cmp_count) {
    out << title << "\n";
    out << std::left << std::setw(12) << "Group";
    for (const auto& g : groups) out << std::right << std::setw(10) << g.group;
    out << "\n";
    auto row = [&](const std::string& name, auto value_of) {
        out << std::left << std::setw(12) << name;
        for (size_t i = 0; i < groups.size(); ++i)
            out << std::right << std::setw(10) << value_of(i);
        out << "\n";
    };
    row("Psi", [&](size_t i) { return std::to_string(groups[i].summary.psi); });
    row("Avg", [&](size_t i) { return fmt_fixed(groups[i].summary.avg_theta, 3); });
    row("STD", [&](size_t i) { return fmt_fixed(groups[i].summary.std_theta, 3); });
    row("min", [&](size_t i) { return fmt_fixed(groups[i].summary.min_theta, 3); });
    row("Efficient", [&](size_t i) { return std::to_string(groups[i].summary.efficient_count); });
    row("%", [&](size_t i) { return fmt_fixed(groups[i].summary.efficient_pct, 2); });
    row("Frontier", [&](size_t i) { return std::to_string(groups[i].summary.frontier_count); });
    row("Frontier%", [&](size_t i) { return fmt_fixed(groups[i].summary.frontier_pct, 2); });
    if (cmp_begin != nullptr && cmp_count == groups.size()) {
        row("Worse", [&](size_t i) { return std::to_string(cmp_begin[i].worse_count); });
        row("Worse%", [&](size_t i) { return fmt_fixed(cmp_begin[i].worse_pct, 2); });
        row("Shifted", [&](size_t i) { return std::to_string(cmp_begin[i].shifted_count); });
        row("Shifted%", [&](size_t i) { return fmt_fixed(cmp_begin[i].shifted_pct, 2); });
    }
    out << "\n";
}

inline void text_slack_table(std::ostream& out, const std::string& title,
                             const std::vector<GroupScopeResult>& groups,
                             const GroupComparison* cmp_begin, size_t cmp_count) {
    if (groups.empty()) return;
    const int n = static_cast<int>(groups.front().slacks.excess_pct.size());
    out << title << "\n";
    out << std::left << std::setw(12) << "Group";
    for (const auto& g : groups) out << std::right << std::setw(10) << g.group;
    out << "\n";
    for (int i = 0; i < n; ++i) {
        out << std::left << std::setw(12) << ("X" + std::to_string(i + 1));
        for (const auto& g : groups) {
            std::string cell = fmt_fixed(g.slacks.excess_pct[i], 2);
            if (g.slacks.pivotal_input == i) cell += "*";  // pivotal input
            out << std::right << std::setw(10) << cell;
        }
        out << "\n";
    }
    if (cmp_begin != nullptr && cmp_count == groups.size()) {
        out << std::left << std::setw(12) << "Status";
        for (size_t i = 0; i < groups.size(); ++i)
            out << std::right << std::setw(10) << (cmp_begin[i].pivotal_changed ? "X" : "-");
        out << "\n";
    }
    out << "\n";
}

}  // namespace detail

inline void render_text(std::ostream& out, const ReportBundle& b) {
    out << "Group sizes\n";
    for (const auto& [label, psi] : b.table1)
        out << "  " << label << ": " << psi << "\n";
    out << "\n";

    const GroupComparison* cmp = nullptr;
    size_t cmp_count = 0;
    if (b.comparison) {
        cmp = b.comparison->groups.data();
        cmp_count = b.comparison->groups.size();
    }
    if (!b.local.empty()) {
        detail::text_summary_table(out, "Local efficiency summary", b.local, nullptr, 0);
        detail::text_slack_table(out, "Local slack analysis (avg excess input %)",
                                 b.local, nullptr, 0);
    }
    if (!b.global_by_group.empty()) {
        detail::text_summary_table(out, "Global efficiency summary", b.global_by_group,
                                   cmp, cmp_count);
        detail::text_slack_table(out, "Global slack analysis (avg excess input %)",
                                 b.global_by_group, cmp, cmp_count);
    }
    if (b.comparison) {
        out << "Overall: " << b.comparison->worse_total << " DMUs worse globally ("
            << fmt_fixed(100.0 * b.comparison->worse_fraction, 2) << "%), "
            << b.comparison->shifted_total << " shifted off the frontier\n";
    }
}

/// CSV rendering: one block per table separated by `# name` marker lines,
/// full precision so values agree byte-for-byte with the JSON report.
inline void render_csv(std::ostream& out, const ReportBundle& b) {
    auto summary_block = [&](const char* name, const std::vector<GroupScopeResult>& groups,
                             const std::vector<GroupComparison>* cmp) {
        out << "# " << name << "\n";
        out << "group,psi,avg_theta,std_theta,min_theta,efficient_count,efficient_pct,"
               "frontier_count,frontier_pct";
        if (cmp) out << ",worse_count,worse_pct,shifted_count,shifted_pct";
        out << "\n";
        for (size_t i = 0; i < groups.size(); ++i) {
            const auto& s = groups[i].summary;
            out << s.group << ',' << s.psi << ',' << format_double(s.avg_theta) << ','
                << format_double(s.std_theta) << ',' << format_double(s.min_theta) << ','
                << s.efficient_count << ',' << format_double(s.efficient_pct) << ','
                << s.frontier_count << ',' << format_double(s.frontier_pct);
            if (cmp) {
                const auto& c = (*cmp)[i];
                out << ',' << c.worse_count << ',' << format_double(c.worse_pct) << ','
                    << c.shifted_count << ',' << format_double(c.shifted_pct);
            }
            out << "\n";
        }
    };
    auto slack_block = [&](const char* name, const std::vector<GroupScopeResult>& groups,
                           const std::vector<GroupComparison>* cmp) {
        out << "# " << name << "\n";
        out << "group";
        if (!groups.empty())
            for (int i = 1; i <= groups.front().slacks.excess_pct.size(); ++i)
                out << ",x" << i << "_excess_pct";
        out << ",pivotal_input";
        if (cmp) out << ",pivotal_changed";
        out << "\n";
        for (size_t i = 0; i < groups.size(); ++i) {
            const auto& s = groups[i].slacks;
            out << s.group;
            for (int j = 0; j < s.excess_pct.size(); ++j)
                out << ',' << format_double(s.excess_pct[j]);
            out << ',' << (s.pivotal_input + 1);
            if (cmp) out << ',' << ((*cmp)[i].pivotal_changed ? "X" : "-");
            out << "\n";
        }
    };

    out << "# group_sizes\ngroup,psi\n";
    for (const auto& [label, psi] : b.table1) out << label << ',' << psi << "\n";

    const std::vector<GroupComparison>* cmp =
        b.comparison ? &b.comparison->groups : nullptr;
    if (!b.local.empty()) {
        summary_block("local_summary", b.local, nullptr);
        slack_block("local_slacks", b.local, nullptr);
    }
    if (!b.global_by_group.empty()) {
        summary_block("global_summary", b.global_by_group, cmp);
        slack_block("global_slacks", b.global_by_group, cmp);
    }

    out << "# per_dmu\n";
    out << "dmu_id,group,scope,theta,status\n";
    auto dmu_rows = [&](const std::vector<GroupScopeResult>& groups, const char* scope) {
        for (const auto& g : groups)
            for (const auto& r : g.results)
                out << r.dmu_id << ',' << g.group << ',' << scope << ','
                    << format_double(r.theta) << ',' << to_string(r.status) << "\n";
    };
    dmu_rows(b.local, "local");
    dmu_rows(b.global_by_group, "global");
}

inline void render(std::ostream& out, const ReportBundle& b, ReportFormat format) {
    switch (format) {
        case ReportFormat::Json: out << json_report(b).dump(2) << "\n"; break;
        case ReportFormat::Csv: render_csv(out, b); break;
        case ReportFormat::Text: render_text(out, b); break;
    }
}

}  // namespace deatool

#endif  // DEATOOL_REPORT_HPP
