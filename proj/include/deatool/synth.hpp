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

#ifndef DEATOOL_SYNTH_HPP
#define DEATOOL_SYNTH_HPP

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "deatool/domain.hpp"

namespace deatool {

/// SplitMix64 (Steele, Lea, Flood 2014). Self-contained so that identical
/// seeds reproduce identical cohorts on every platform.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1), 53 mantissa bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double low, double high) { return low + (high - low) * uniform(); }

  private:
    std::uint64_t state_;
};

struct GenSpec {
    std::vector<std::pair<std::string, int>> group_sizes;  // ordered (label, count)
    int n_inputs = 0;
    int n_outputs = 0;
    std::uint64_t seed = 0;
    std::pair<double, double> input_range = {10.0, 100.0};
    double technology_noise = 0.1;

    void check() const {
        if (group_sizes.empty()) throw std::invalid_argument("no groups specified");
        for (const auto& [label, count] : group_sizes) {
            if (label.empty()) throw std::invalid_argument("empty group label");
            if (count < 1) throw std::invalid_argument("group '" + label + "' count < 1");
        }
        if (n_inputs < 1 || n_outputs < 1)
            throw std::invalid_argument("need at least one input and one output");
        if (!(input_range.first > 0.0) || !(input_range.second > input_range.first))
            throw std::invalid_argument("input range must satisfy 0 < low < high");
        if (!(technology_noise >= 0.0 && technology_noise < 1.0))
            throw std::invalid_argument("technology_noise must lie in [0, 1)");
    }
};

/// The experimental shape used throughout the reports: 1000 DMUs over nine
/// groups A..I with 10 inputs and 6 outputs.
inline GenSpec paper_default_spec(std::uint64_t seed = 0) {
    GenSpec spec;
    const int sizes[] = {68, 136, 90, 100, 120, 140, 70, 111, 165};
    for (int g = 0; g < 9; ++g)
        spec.group_sizes.emplace_back(std::string(1, static_cast<char>('A' + g)), sizes[g]);
    spec.n_inputs = 10;
    spec.n_outputs = 6;
    spec.seed = seed;
    return spec;
}

/// Deterministic cohort generation: inputs uniform in input_range, outputs a
/// shared random non-negative technology applied to the inputs, damped per
/// DMU by a multiplicative inefficiency factor 1 - noise * u.
inline Cohort generate(const GenSpec& spec) {
    spec.check();
    SplitMix64 rng(spec.seed);

    // Shared technology: strictly positive entries so outputs stay positive.
    Eigen::MatrixXd technology(spec.n_outputs, spec.n_inputs);
    for (int j = 0; j < spec.n_outputs; ++j)
        for (int i = 0; i < spec.n_inputs; ++i)
            technology(j, i) = rng.uniform(0.1, 1.0);
    technology /= spec.n_inputs;

    std::vector<DmuRecord> records;
    for (const auto& [label, count] : spec.group_sizes) {
        const int width = count >= 100 ? 3 : (count >= 10 ? 2 : 1);
        for (int k = 0; k < count; ++k) {
            DmuRecord rec;
            std::string ordinal = std::to_string(k + 1);
            rec.id = label + "-" + std::string(width - std::min<int>(width, ordinal.size()), '0') + ordinal;
            rec.group = label;
            rec.inputs.resize(spec.n_inputs);
            for (int i = 0; i < spec.n_inputs; ++i)
                rec.inputs[i] = rng.uniform(spec.input_range.first, spec.input_range.second);
            const double efficiency = 1.0 - spec.technology_noise * rng.uniform();
            rec.outputs = efficiency * (technology * rec.inputs);
            records.push_back(std::move(rec));
        }
    }
    return validate_cohort(std::move(records));
}

}  // namespace deatool

#endif  // DEATOOL_SYNTH_HPP
