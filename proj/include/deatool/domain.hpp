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

#ifndef DEATOOL_DOMAIN_HPP
#define DEATOOL_DOMAIN_HPP

#include <Eigen/Core>

#include <algorithm>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace deatool {

/// One decision-making unit: identifier, group label, input and output bundles.
/// Inputs must be strictly positive; outputs non-negative with at least one
/// positive component.
struct DmuRecord {
    std::string id;
    std::string group;
    Eigen::VectorXd inputs;
    Eigen::VectorXd outputs;
};

struct GroupInfo {
    std::string label;
    std::vector<int> member_indices;  // indices into Cohort::dmus
};

class CohortError : public std::runtime_error {
  public:
    enum class Kind {
        EmptyCohort,
        DimensionMismatch,
        NonPositiveInput,
        AllZeroOutputs,
        DuplicateId,
    };

    CohortError(Kind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    Kind kind() const { return kind_; }

  private:
    Kind kind_;
};

/// A validated, immutable collection of DMUs sharing input/output dimensions.
/// Construct through validate_cohort.
struct Cohort {
    std::vector<DmuRecord> dmus;
    int n_inputs = 0;
    int n_outputs = 0;
    std::vector<GroupInfo> groups;  // first-appearance order

    int size() const { return static_cast<int>(dmus.size()); }

    const GroupInfo* find_group(const std::string& label) const {
        for (const auto& g : groups)
            if (g.label == label) return &g;
        return nullptr;
    }

    /// Sub-cohort containing only the members of one group, order preserved.
    Cohort slice(const GroupInfo& group) const {
        Cohort out;
        out.n_inputs = n_inputs;
        out.n_outputs = n_outputs;
        out.dmus.reserve(group.member_indices.size());
        for (int idx : group.member_indices) out.dmus.push_back(dmus[idx]);
        out.groups.push_back(
            {group.label, [&] {
                 std::vector<int> local(group.member_indices.size());
                 for (size_t i = 0; i < local.size(); ++i) local[i] = static_cast<int>(i);
                 return local;
             }()});
        return out;
    }
};

enum class ReturnsToScale { CRS, VRS };

/// Model configuration. Orientation is fixed input-oriented.
struct ModelSpec {
    ReturnsToScale rts = ReturnsToScale::CRS;
    double efficiency_tolerance = 1e-6;
    double zero_tolerance = 1e-9;

    void check() const {
        if (!(efficiency_tolerance > 0.0 && efficiency_tolerance < 1e-2))
            throw std::invalid_argument("efficiency_tolerance out of range");
        if (!(zero_tolerance > 0.0 && zero_tolerance < 1e-2))
            throw std::invalid_argument("zero_tolerance out of range");
    }
};

inline Cohort validate_cohort(std::vector<DmuRecord> records) {
    if (records.empty())
        throw CohortError(CohortError::Kind::EmptyCohort, "cohort has no records");

    const int n = static_cast<int>(records.front().inputs.size());
    const int m = static_cast<int>(records.front().outputs.size());
    if (n == 0)
        throw CohortError(CohortError::Kind::DimensionMismatch, "record '" + records.front().id + "' has no inputs");
    if (m == 0)
        throw CohortError(CohortError::Kind::DimensionMismatch, "record '" + records.front().id + "' has no outputs");

    std::unordered_set<std::string> seen_ids;
    for (const auto& rec : records) {
        if (rec.id.empty())
            throw CohortError(CohortError::Kind::DuplicateId, "record with empty id");
        if (!seen_ids.insert(rec.id).second)
            throw CohortError(CohortError::Kind::DuplicateId, "duplicate id '" + rec.id + "'");
        if (static_cast<int>(rec.inputs.size()) != n || static_cast<int>(rec.outputs.size()) != m)
            throw CohortError(CohortError::Kind::DimensionMismatch,
                              "record '" + rec.id + "' has mismatched dimensions");
        for (int i = 0; i < n; ++i)
            if (!(rec.inputs[i] > 0.0))
                throw CohortError(CohortError::Kind::NonPositiveInput,
                                  "record '" + rec.id + "' input x" + std::to_string(i + 1) +
                                      " is not strictly positive");
        bool any_positive = false;
        for (int j = 0; j < m; ++j) {
            if (rec.outputs[j] < 0.0)
                throw CohortError(CohortError::Kind::AllZeroOutputs,
                                  "record '" + rec.id + "' output y" + std::to_string(j + 1) +
                                      " is negative");
            any_positive |= rec.outputs[j] > 0.0;
        }
        if (!any_positive)
            throw CohortError(CohortError::Kind::AllZeroOutputs,
                              "record '" + rec.id + "' has all-zero outputs");
    }

    Cohort cohort;
    cohort.n_inputs = n;
    cohort.n_outputs = m;
    cohort.dmus = std::move(records);
    for (int k = 0; k < cohort.size(); ++k) {
        const std::string& label = cohort.dmus[k].group;
        GroupInfo* info = nullptr;
        for (auto& g : cohort.groups)
            if (g.label == label) info = &g;
        if (info == nullptr) {
            cohort.groups.push_back({label, {}});
            info = &cohort.groups.back();
        }
        info->member_indices.push_back(k);
    }
    return cohort;
}

/// Cohort-size guideline: the scope discriminates well when
/// Psi >= max(M*N, 3*(M+N)).
struct DiscriminationEntry {
    std::string scope_label;
    int psi = 0;
    int threshold = 0;
    bool pass = false;
};

inline int discrimination_threshold(int n_inputs, int n_outputs) {
    return std::max(n_inputs * n_outputs, 3 * (n_inputs + n_outputs));
}

inline std::vector<DiscriminationEntry> check_discrimination(const Cohort& cohort,
                                                             bool per_group) {
    const int threshold = discrimination_threshold(cohort.n_inputs, cohort.n_outputs);
    std::vector<DiscriminationEntry> entries;
    if (per_group) {
        for (const auto& g : cohort.groups) {
            const int psi = static_cast<int>(g.member_indices.size());
            entries.push_back({g.label, psi, threshold, psi >= threshold});
        }
    } else {
        entries.push_back({"all", cohort.size(), threshold, cohort.size() >= threshold});
    }
    return entries;
}

}  // namespace deatool

#endif  // DEATOOL_DOMAIN_HPP
