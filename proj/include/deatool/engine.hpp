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

#ifndef DEATOOL_ENGINE_HPP
#define DEATOOL_ENGINE_HPP

#include <Eigen/Core>

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "deatool/domain.hpp"
#include "deatool/lp.hpp"

namespace deatool {

enum class EfficiencyStatus { Efficient, WeaklyEfficient, Inefficient };

inline const char* to_string(EfficiencyStatus s) {
    switch (s) {
        case EfficiencyStatus::Efficient: return "efficient";
        case EfficiencyStatus::WeaklyEfficient: return "weakly_efficient";
        case EfficiencyStatus::Inefficient: return "inefficient";
    }
    return "unknown";
}

/// Per-DMU evaluation: radial score, peer weights, residual slacks and the
/// frontier projection. `lambdas` keeps only peers above the zero tolerance;
/// `lambda_dense` holds the full weight vector in cohort order.
struct EfficiencyResult {
    std::string dmu_id;
    double theta = 1.0;
    std::map<std::string, double> lambdas;
    Eigen::VectorXd lambda_dense;
    Eigen::VectorXd input_slacks;
    Eigen::VectorXd output_slacks;
    EfficiencyStatus status = EfficiencyStatus::Efficient;
    Eigen::VectorXd input_targets;
    Eigen::VectorXd output_targets;

    bool on_frontier(const ModelSpec& spec) const {
        return theta >= 1.0 - spec.efficiency_tolerance;
    }
};

class SolverFailure : public std::runtime_error {
  public:
    SolverFailure(std::string dmu_id, const std::string& message)
        : std::runtime_error("solver failure on DMU '" + dmu_id + "': " + message),
          dmu_id_(std::move(dmu_id)) {}

    const std::string& dmu_id() const { return dmu_id_; }

  private:
    std::string dmu_id_;
};

/// Radial model: variables (lambda_1..lambda_K, theta), objective min theta,
///   sum_k lambda_k x_ik - theta x_if <= 0   for each input i
///   sum_k lambda_k y_jk            >= y_jf  for each output j
///   sum_k lambda_k = 1                      under VRS only.
inline lp::Problem<double> build_phase1(const Cohort& cohort, int target_index,
                                        const ModelSpec& spec) {
    const int k = cohort.size();
    const int n = cohort.n_inputs;
    const int m = cohort.n_outputs;
    const DmuRecord& target = cohort.dmus[target_index];

    lp::Problem<double> p;
    p.sense = lp::Sense::Minimize;
    p.objective = Eigen::VectorXd::Zero(k + 1);
    p.objective[k] = 1.0;

    const int rows = n + m + (spec.rts == ReturnsToScale::VRS ? 1 : 0);
    p.constraints.setZero(rows, k + 1);
    p.rhs.setZero(rows);
    p.relations.assign(rows, lp::Relation::LessEq);

    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < k; ++j) p.constraints(i, j) = cohort.dmus[j].inputs[i];
        p.constraints(i, k) = -target.inputs[i];
    }
    for (int i = 0; i < m; ++i) {
        const int row = n + i;
        for (int j = 0; j < k; ++j) p.constraints(row, j) = cohort.dmus[j].outputs[i];
        p.relations[row] = lp::Relation::GreaterEq;
        p.rhs[row] = target.outputs[i];
    }
    if (spec.rts == ReturnsToScale::VRS) {
        const int row = n + m;
        p.constraints.row(row).head(k).setOnes();
        p.relations[row] = lp::Relation::Equal;
        p.rhs[row] = 1.0;
    }
    return p;
}

/// Slack-maximization stage at fixed theta*: variables
/// (lambda_1..lambda_K, s_in_1..s_in_N, s_out_1..s_out_M), objective
/// max sum(s), with the radial rows turned into equalities.
inline lp::Problem<double> build_phase2(const Cohort& cohort, int target_index,
                                        double theta_star, const ModelSpec& spec) {
    const int k = cohort.size();
    const int n = cohort.n_inputs;
    const int m = cohort.n_outputs;
    const DmuRecord& target = cohort.dmus[target_index];

    lp::Problem<double> p;
    p.sense = lp::Sense::Maximize;
    const int vars = k + n + m;
    p.objective = Eigen::VectorXd::Zero(vars);
    p.objective.tail(n + m).setOnes();

    const int rows = n + m + (spec.rts == ReturnsToScale::VRS ? 1 : 0);
    p.constraints.setZero(rows, vars);
    p.rhs.setZero(rows);
    p.relations.assign(rows, lp::Relation::Equal);

    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < k; ++j) p.constraints(i, j) = cohort.dmus[j].inputs[i];
        p.constraints(i, k + i) = 1.0;
        p.rhs[i] = theta_star * target.inputs[i];
    }
    for (int i = 0; i < m; ++i) {
        const int row = n + i;
        for (int j = 0; j < k; ++j) p.constraints(row, j) = cohort.dmus[j].outputs[i];
        p.constraints(row, k + n + i) = -1.0;
        p.rhs[row] = target.outputs[i];
    }
    if (spec.rts == ReturnsToScale::VRS) {
        const int row = n + m;
        p.constraints.row(row).head(k).setOnes();
        p.rhs[row] = 1.0;
    }
    return p;
}

inline EfficiencyResult solve_dmu(const Cohort& cohort, int target_index,
                                  const ModelSpec& spec) {
    spec.check();
    const int k = cohort.size();
    const int n = cohort.n_inputs;
    const int m = cohort.n_outputs;
    const DmuRecord& target = cohort.dmus[target_index];

    lp::Solution<double> radial;
    try {
        radial = lp::solve(build_phase1(cohort, target_index, spec));
    } catch (const lp::NumericalBreakdown& e) {
        throw SolverFailure(target.id, e.what());
    }
    // lambda_f = 1, theta = 1 is always feasible, so only Optimal is sane here.
    if (radial.status != lp::Status::Optimal)
        throw SolverFailure(target.id, "radial stage did not reach an optimum");

    const double theta = radial.variable_values[k];

    lp::Solution<double> slack;
    try {
        slack = lp::solve(build_phase2(cohort, target_index, theta, spec));
    } catch (const lp::NumericalBreakdown& e) {
        throw SolverFailure(target.id, e.what());
    }
    if (slack.status != lp::Status::Optimal)
        throw SolverFailure(target.id, "slack stage did not reach an optimum");

    EfficiencyResult res;
    res.dmu_id = target.id;
    res.theta = theta;
    res.lambda_dense = slack.variable_values.head(k);
    res.input_slacks = slack.variable_values.segment(k, n).cwiseMax(0.0);
    res.output_slacks = slack.variable_values.tail(m).cwiseMax(0.0);
    for (int j = 0; j < k; ++j)
        if (res.lambda_dense[j] > spec.zero_tolerance)
            res.lambdas[cohort.dmus[j].id] = res.lambda_dense[j];

    const bool radial_efficient = theta >= 1.0 - spec.efficiency_tolerance;
    const bool zero_slack = res.input_slacks.maxCoeff() <= spec.zero_tolerance &&
                            res.output_slacks.maxCoeff() <= spec.zero_tolerance;
    if (radial_efficient)
        res.status = zero_slack ? EfficiencyStatus::Efficient
                                : EfficiencyStatus::WeaklyEfficient;
    else
        res.status = EfficiencyStatus::Inefficient;

    res.input_targets = theta * target.inputs - res.input_slacks;
    res.output_targets = target.outputs + res.output_slacks;
    return res;
}

/// Evaluates every DMU against the cohort frontier, cohort order preserved.
inline std::vector<EfficiencyResult> solve_all(const Cohort& cohort,
                                               const ModelSpec& spec) {
    std::vector<EfficiencyResult> results;
    results.reserve(cohort.size());
    for (int f = 0; f < cohort.size(); ++f)
        results.push_back(solve_dmu(cohort, f, spec));
    return results;
}

}  // namespace deatool

#endif  // DEATOOL_ENGINE_HPP
