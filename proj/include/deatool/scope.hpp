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

#ifndef DEATOOL_SCOPE_HPP
#define DEATOOL_SCOPE_HPP

#include <Eigen/Core>

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "deatool/domain.hpp"
#include "deatool/engine.hpp"

namespace deatool {

/// Which DMUs enter the denominator of the average excess input proportion.
enum class ExcessMode { AllDmus, InefficientOnly };

/// Efficiency distribution of one group under one scope.
struct GroupSummary {
    std::string group;
    int psi = 0;
    double avg_theta = 0.0;
    double std_theta = 0.0;  // sample standard deviation, divisor psi-1
    double min_theta = 0.0;
    int efficient_count = 0;       // strict: theta = 1 and zero slacks
    double efficient_pct = 0.0;
    int frontier_count = 0;        // theta = 1 including weakly efficient
    double frontier_pct = 0.0;
};

/// Average excess input proportion per input, in percent.
struct SlackSummary {
    std::string group;
    Eigen::VectorXd excess_pct;
    int pivotal_input = 0;  // argmax of excess_pct, lowest index on ties
};

struct GroupScopeResult {
    std::string group;
    std::vector<EfficiencyResult> results;  // group member order
    GroupSummary summary;
    SlackSummary slacks;
};

struct GlobalAnalysis {
    std::vector<EfficiencyResult> results;  // cohort order
    std::vector<GroupScopeResult> by_group;  // summaries disaggregated by group
};

struct DmuScopePair {
    std::string dmu_id;
    std::string group;
    double theta_local = 0.0;
    double theta_global = 0.0;
    EfficiencyStatus status_local = EfficiencyStatus::Efficient;
    EfficiencyStatus status_global = EfficiencyStatus::Efficient;
};

struct GroupComparison {
    std::string group;
    GroupSummary local_summary, global_summary;
    SlackSummary local_slacks, global_slacks;
    int worse_count = 0;
    double worse_pct = 0.0;
    int shifted_count = 0;  // efficient locally, not efficient globally
    double shifted_pct = 0.0;
    bool pivotal_changed = false;
};

struct ScopeComparison {
    std::vector<DmuScopePair> per_dmu;  // cohort order
    std::vector<GroupComparison> groups;
    int worse_total = 0;
    double worse_fraction = 0.0;  // share of all K DMUs scoring worse globally
    int shifted_total = 0;
};

/// Component i: (100/count) * sum_k slack_ik / x_ik. Efficient DMUs
/// contribute zero; under InefficientOnly they also leave the denominator.
inline Eigen::VectorXd excess_proportions(const Cohort& slice,
                                          std::span<const EfficiencyResult> results,
                                          ExcessMode mode = ExcessMode::AllDmus) {
    const int n = slice.n_inputs;
    Eigen::VectorXd sums = Eigen::VectorXd::Zero(n);
    int denom = 0;
    for (size_t k = 0; k < results.size(); ++k) {
        const bool inefficient = results[k].status != EfficiencyStatus::Efficient;
        if (mode == ExcessMode::AllDmus || inefficient) ++denom;
        if (!inefficient) continue;
        sums += results[k].input_slacks.cwiseQuotient(slice.dmus[k].inputs);
    }
    if (denom == 0) return Eigen::VectorXd::Zero(n);
    return 100.0 / denom * sums;
}

inline int pivotal_index(const Eigen::VectorXd& excess_pct) {
    int best = 0;
    for (int i = 1; i < excess_pct.size(); ++i)
        if (excess_pct[i] > excess_pct[best]) best = i;
    return best;
}

inline GroupSummary summarize_group(const std::string& label,
                                    std::span<const EfficiencyResult> results,
                                    const ModelSpec& spec) {
    GroupSummary s;
    s.group = label;
    s.psi = static_cast<int>(results.size());
    double sum = 0.0;
    s.min_theta = 1.0;
    for (const auto& r : results) {
        sum += r.theta;
        s.min_theta = std::min(s.min_theta, r.theta);
        if (r.status == EfficiencyStatus::Efficient) ++s.efficient_count;
        if (r.on_frontier(spec)) ++s.frontier_count;
    }
    s.avg_theta = sum / s.psi;
    double sq = 0.0;
    for (const auto& r : results) sq += (r.theta - s.avg_theta) * (r.theta - s.avg_theta);
    s.std_theta = s.psi > 1 ? std::sqrt(sq / (s.psi - 1)) : 0.0;
    s.efficient_pct = 100.0 * s.efficient_count / s.psi;
    s.frontier_pct = 100.0 * s.frontier_count / s.psi;
    return s;
}

inline SlackSummary summarize_slacks(const std::string& label, const Cohort& slice,
                                     std::span<const EfficiencyResult> results,
                                     ExcessMode mode) {
    SlackSummary s;
    s.group = label;
    s.excess_pct = excess_proportions(slice, results, mode);
    s.pivotal_input = pivotal_index(s.excess_pct);
    return s;
}

/// Solves each group as an isolated cohort.
inline std::vector<GroupScopeResult> analyze_local(const Cohort& cohort,
                                                   const ModelSpec& spec,
                                                   ExcessMode mode = ExcessMode::AllDmus) {
    std::vector<GroupScopeResult> out;
    out.reserve(cohort.groups.size());
    for (const auto& g : cohort.groups) {
        GroupScopeResult entry;
        entry.group = g.label;
        const Cohort slice = cohort.slice(g);
        try {
            entry.results = solve_all(slice, spec);
        } catch (const SolverFailure& e) {
            throw SolverFailure(e.dmu_id(), "group '" + g.label + "': " + e.what());
        }
        entry.summary = summarize_group(g.label, entry.results, spec);
        entry.slacks = summarize_slacks(g.label, slice, entry.results, mode);
        out.push_back(std::move(entry));
    }
    return out;
}

/// One pooled solve over the whole cohort, summaries split back per group.
inline GlobalAnalysis analyze_global(const Cohort& cohort, const ModelSpec& spec,
                                     ExcessMode mode = ExcessMode::AllDmus) {
    GlobalAnalysis out;
    out.results = solve_all(cohort, spec);
    for (const auto& g : cohort.groups) {
        GroupScopeResult entry;
        entry.group = g.label;
        for (int idx : g.member_indices) entry.results.push_back(out.results[idx]);
        const Cohort slice = cohort.slice(g);
        entry.summary = summarize_group(g.label, entry.results, spec);
        entry.slacks = summarize_slacks(g.label, slice, entry.results, mode);
        out.by_group.push_back(std::move(entry));
    }
    return out;
}

inline ScopeComparison compare_scopes(const Cohort& cohort, const ModelSpec& spec,
                                      ExcessMode mode = ExcessMode::AllDmus) {
    const auto local = analyze_local(cohort, spec, mode);
    const auto global = analyze_global(cohort, spec, mode);

    ScopeComparison cmp;
    cmp.per_dmu.resize(cohort.size());
    for (size_t gi = 0; gi < cohort.groups.size(); ++gi) {
        const auto& members = cohort.groups[gi].member_indices;
        for (size_t pos = 0; pos < members.size(); ++pos) {
            const auto& loc = local[gi].results[pos];
            const auto& glob = global.by_group[gi].results[pos];
            cmp.per_dmu[members[pos]] = {loc.dmu_id,
                                         cohort.groups[gi].label,
                                         loc.theta,
                                         glob.theta,
                                         loc.status,
                                         glob.status};
        }
    }

    for (size_t gi = 0; gi < cohort.groups.size(); ++gi) {
        GroupComparison gc;
        gc.group = cohort.groups[gi].label;
        gc.local_summary = local[gi].summary;
        gc.global_summary = global.by_group[gi].summary;
        gc.local_slacks = local[gi].slacks;
        gc.global_slacks = global.by_group[gi].slacks;
        const int psi = gc.local_summary.psi;
        for (int idx : cohort.groups[gi].member_indices) {
            const auto& pair = cmp.per_dmu[idx];
            if (pair.theta_global < pair.theta_local - spec.efficiency_tolerance)
                ++gc.worse_count;
            if (pair.status_local == EfficiencyStatus::Efficient &&
                pair.status_global != EfficiencyStatus::Efficient)
                ++gc.shifted_count;
        }
        gc.worse_pct = 100.0 * gc.worse_count / psi;
        gc.shifted_pct = 100.0 * gc.shifted_count / psi;
        gc.pivotal_changed = gc.local_slacks.pivotal_input != gc.global_slacks.pivotal_input;
        cmp.worse_total += gc.worse_count;
        cmp.shifted_total += gc.shifted_count;
        cmp.groups.push_back(std::move(gc));
    }
    cmp.worse_fraction = static_cast<double>(cmp.worse_total) / cohort.size();
    return cmp;
}

}  // namespace deatool

#endif  // DEATOOL_SCOPE_HPP
