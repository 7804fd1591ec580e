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

#ifndef DEATOOL_TESTS_HELPERS_HPP
#define DEATOOL_TESTS_HELPERS_HPP

#include <algorithm>
#include <string>
#include <vector>

#include "deatool/domain.hpp"
#include "deatool/synth.hpp"

namespace deatool::testing {

inline DmuRecord make_record(std::string id, std::string group,
                             std::vector<double> inputs, std::vector<double> outputs) {
    DmuRecord rec;
    rec.id = std::move(id);
    rec.group = std::move(group);
    rec.inputs = Eigen::Map<Eigen::VectorXd>(inputs.data(), inputs.size());
    rec.outputs = Eigen::Map<Eigen::VectorXd>(outputs.data(), outputs.size());
    return rec;
}

inline bool bit_equal(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return a.size() == b.size() && (a.array() == b.array()).all();
}

/// Closed-form CRS oracle for single-input single-output cohorts:
/// theta_f = (y_f/x_f) / max_k (y_k/x_k). Independent of the LP path.
inline double ratio_oracle(const Cohort& cohort, int f) {
    double best = 0.0;
    for (const auto& d : cohort.dmus)
        best = std::max(best, d.outputs[0] / d.inputs[0]);
    return (cohort.dmus[f].outputs[0] / cohort.dmus[f].inputs[0]) / best;
}

/// Random multi-group cohort with mild inefficiency spread.
inline Cohort random_cohort(SplitMix64& rng, int k, int n, int m, int groups) {
    std::vector<DmuRecord> records;
    for (int i = 0; i < k; ++i) {
        DmuRecord rec;
        rec.id = "D" + std::to_string(i);
        rec.group = "G" + std::to_string(i % groups);
        rec.inputs.resize(n);
        rec.outputs.resize(m);
        for (int a = 0; a < n; ++a) rec.inputs[a] = rng.uniform(1.0, 10.0);
        for (int b = 0; b < m; ++b) rec.outputs[b] = rng.uniform(0.5, 10.0);
        records.push_back(std::move(rec));
    }
    return validate_cohort(std::move(records));
}

}  // namespace deatool::testing

#endif  // DEATOOL_TESTS_HELPERS_HPP
