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

// Release-gate checks. Each criterion prints one pass/fail line; the binary
// exits nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "deatool/csv_io.hpp"
#include "deatool/engine.hpp"
#include "deatool/report.hpp"
#include "deatool/scope.hpp"
#include "deatool/synth.hpp"
#include "helpers.hpp"

using namespace deatool;
using deatool::testing::make_record;
using deatool::testing::random_cohort;
using deatool::testing::ratio_oracle;

namespace {

int g_failures = 0;

void criterion(int number, const std::string& name, const std::function<bool()>& body) {
    const auto start = std::chrono::steady_clock::now();
    bool ok = false;
    std::string detail;
    try {
        ok = body();
    } catch (const std::exception& e) {
        detail = std::string(" (") + e.what() + ")";
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] criterion %d: %s (%.2fs)%s\n", ok ? "PASS" : "FAIL", number,
                name.c_str(), secs, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

const ModelSpec kCrs{ReturnsToScale::CRS};
const ModelSpec kVrs{ReturnsToScale::VRS};

bool ratio_oracle_equivalence() {
    SplitMix64 rng(1001);
    const auto start = std::chrono::steady_clock::now();
    for (int t = 0; t < 200; ++t) {
        const int k = 2 + static_cast<int>(rng.next() % 49);
        auto cohort = random_cohort(rng, k, 1, 1, 1);
        auto results = solve_all(cohort, kCrs);
        for (int f = 0; f < k; ++f)
            if (std::abs(results[f].theta - ratio_oracle(cohort, f)) > 1e-6) return false;
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return secs < 10.0;
}

bool monotonicity_suite() {
    SplitMix64 rng(1002);
    for (int t = 0; t < 100; ++t) {
        const int k = 5 + static_cast<int>(rng.next() % 196);
        const int n = 1 + static_cast<int>(rng.next() % 5);
        const int m = 1 + static_cast<int>(rng.next() % 3);
        const int groups = 2 + static_cast<int>(rng.next() % 4);
        auto cohort = random_cohort(rng, k, n, m, groups);
        auto cmp = compare_scopes(cohort, kCrs);
        for (const auto& p : cmp.per_dmu)
            if (p.theta_global > p.theta_local + 1e-9) return false;
    }
    return true;
}

bool vrs_dominance() {
    SplitMix64 rng(1003);
    for (int t = 0; t < 20; ++t) {
        const int k = 5 + static_cast<int>(rng.next() % 60);
        const int n = 1 + static_cast<int>(rng.next() % 5);
        const int m = 1 + static_cast<int>(rng.next() % 3);
        auto cohort = random_cohort(rng, k, n, m, 1);
        auto crs = solve_all(cohort, kCrs);
        auto vrs = solve_all(cohort, kVrs);
        for (int f = 0; f < k; ++f) {
            if (vrs[f].theta < crs[f].theta - 1e-9) return false;
            if (crs[f].status == EfficiencyStatus::Efficient &&
                vrs[f].status != EfficiencyStatus::Efficient)
                return false;
        }
    }
    return true;
}

bool hand_solved_fixtures() {
    auto weak = validate_cohort({
        make_record("A", "g", {1.0, 4.0}, {1.0}),
        make_record("B", "g", {4.0, 1.0}, {1.0}),
        make_record("C", "g", {6.0, 1.0}, {1.0}),
    });
    auto c = solve_dmu(weak, 2, kCrs);
    if (std::abs(c.theta - 1.0) > 1e-8) return false;
    if (std::abs(c.input_slacks[0] - 2.0) > 1e-8) return false;

    auto shift = validate_cohort({
        make_record("A", "g1", {2.0}, {2.0}),
        make_record("B", "g1", {4.0}, {2.0}),
        make_record("Z", "g2", {1.0}, {2.0}),
    });
    auto cmp = compare_scopes(shift, kCrs);
    const auto& a = cmp.per_dmu[0];
    if (std::abs(a.theta_local - 1.0) > 1e-8) return false;
    if (std::abs(a.theta_global - 0.5) > 1e-8) return false;
    return cmp.groups[0].shifted_count == 1;
}

bool units_invariance() {
    SplitMix64 rng(1005);
    auto cohort = random_cohort(rng, 30, 3, 2, 2);
    auto base_results = solve_all(cohort, kCrs);
    auto base_excess = excess_proportions(cohort, base_results);

    const double factors[] = {0.01, 3.0, 1000.0};
    for (double factor : factors) {
        // scale input column 1
        auto scaled = cohort;
        for (auto& d : scaled.dmus) d.inputs[1] *= factor;
        auto results = solve_all(scaled, kCrs);
        auto excess = excess_proportions(scaled, results);
        for (int f = 0; f < cohort.size(); ++f)
            if (std::abs(results[f].theta - base_results[f].theta) > 1e-6) return false;
        if (std::abs(excess[1] - base_excess[1]) > 1e-6) return false;

        // scale output column 0
        auto out_scaled = cohort;
        for (auto& d : out_scaled.dmus) d.outputs[0] *= factor;
        auto out_results = solve_all(out_scaled, kCrs);
        for (int f = 0; f < cohort.size(); ++f)
            if (std::abs(out_results[f].theta - base_results[f].theta) > 1e-6)
                return false;
    }
    return true;
}

bool paper_shape_reproduction() {
    auto cohort = generate(paper_default_spec(42));
    if (cohort.size() != 1000 || cohort.n_inputs != 10 || cohort.n_outputs != 6)
        return false;
    const int expected[] = {68, 136, 90, 100, 120, 140, 70, 111, 165};
    if (cohort.groups.size() != 9) return false;
    for (int g = 0; g < 9; ++g)
        if (static_cast<int>(cohort.groups[g].member_indices.size()) != expected[g])
            return false;
    for (const auto& e : check_discrimination(cohort, true))
        if (!e.pass || e.threshold != 60) return false;

    const auto start = std::chrono::steady_clock::now();
    auto bundle = make_compare_report(cohort, kCrs, ExcessMode::AllDmus);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs >= 60.0) return false;

    if (bundle.local.size() != 9 || bundle.global_by_group.size() != 9) return false;
    for (const auto& g : bundle.local)
        if (g.slacks.excess_pct.size() != 10) return false;
    if (!bundle.comparison || bundle.comparison->groups.size() != 9) return false;

    std::ostringstream text;
    render_text(text, bundle);
    const std::string doc = text.str();
    return doc.find("Worse") != std::string::npos &&
           doc.find("Shifted") != std::string::npos &&
           doc.find("Status") != std::string::npos && doc.find("X10") != std::string::npos;
}

bool projection_idempotence() {
    SplitMix64 rng(1007);
    for (int t = 0; t < 50; ++t) {
        const int k = 3 + static_cast<int>(rng.next() % 20);
        const int n = 1 + static_cast<int>(rng.next() % 3);
        const int m = 1 + static_cast<int>(rng.next() % 2);
        auto cohort = random_cohort(rng, k, n, m, 1);
        const int f = static_cast<int>(rng.next() % k);
        auto res = solve_dmu(cohort, f, kCrs);

        DmuRecord proj;
        proj.id = "projection";
        proj.group = cohort.dmus[f].group;
        proj.inputs = res.input_targets;
        proj.outputs = res.output_targets;
        auto records = cohort.dmus;
        records.push_back(proj);
        auto extended = validate_cohort(records);
        auto scored = solve_dmu(extended, extended.size() - 1, kCrs);
        if (std::abs(scored.theta - 1.0) > 1e-6) return false;
    }
    return true;
}

bool determinism() {
    auto cohort = generate(paper_default_spec(7));
    // Keep runtime in check: determinism is about the pipeline, not scale.
    std::vector<DmuRecord> records;
    for (const auto& g : cohort.groups)
        for (size_t i = 0; i < 8 && i < g.member_indices.size(); ++i)
            records.push_back(cohort.dmus[g.member_indices[i]]);
    auto small = validate_cohort(records);

    auto run_once = [&] {
        auto bundle = make_compare_report(small, kCrs, ExcessMode::AllDmus);
        bundle.seed = 7;
        return json_report(bundle).dump(2);
    };
    const std::string a = run_once();
    const std::string b = run_once();
    if (a != b) return false;

    std::ostringstream csv_a, csv_b;
    write_csv(csv_a, generate(paper_default_spec(7)));
    write_csv(csv_b, generate(paper_default_spec(7)));
    return csv_a.str() == csv_b.str();
}

}  // namespace

int main() {
    criterion(1, "ratio-oracle equivalence on 200 random 1-in/1-out cohorts",
              ratio_oracle_equivalence);
    criterion(2, "global <= local monotonicity on 100 multi-group cohorts",
              monotonicity_suite);
    criterion(3, "VRS dominance and frontier nesting", vrs_dominance);
    criterion(4, "hand-solved LP fixtures (weak efficiency, scope shift)",
              hand_solved_fixtures);
    criterion(5, "units invariance of theta and excess proportions", units_invariance);
    criterion(6, "paper-shape cohort and full compare under 60s",
              paper_shape_reproduction);
    criterion(7, "projection idempotence on 50 random instances",
              projection_idempotence);
    criterion(8, "byte-identical reports across repeated runs", determinism);

    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
