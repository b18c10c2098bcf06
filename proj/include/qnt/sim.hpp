// Copyright 2026 The qnt Authors
//
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

#pragma once

#include <array>
#include <cstdint>

#include "qnt/errors.hpp"
#include "qnt/network.hpp"
#include "qnt/rng.hpp"

namespace qnt {

/// Bell-measurement outcome probabilities for a probe with effective
/// parameter W: phi00 occurs with (1 + 3W)/4, each other outcome with
/// (1 - W)/4.
inline std::array<double, 4> bell_outcome_probabilities(double w_effective) {
    double p00 = (1.0 + 3.0 * w_effective) / 4.0;
    double rest = (1.0 - w_effective) / 4.0;
    return {p00, rest, rest, rest};
}

/// Tally of the four Bell outcomes for one probe path. Counts are stored as
/// reals so estimator identities can also be exercised at expected (non-
/// integer) counts; simulation always produces integers.
struct MeasurementRecord {
    MonitorPath path;
    long long shots = 0;
    std::array<double, 4> counts{0, 0, 0, 0};
    uint64_t seed = 0;

    double n00() const { return counts[0]; }
};

/// Draws `shots` multinomial Bell outcomes for the probe along `path`.
/// Identical (inputs, seed) give identical counts on every platform.
inline MeasurementRecord simulate_probe(const Network& net, const MonitorPath& path,
                                        long long shots, uint64_t seed) {
    if (shots < 1) throw Error(ErrorCode::ConfigError, "need at least one shot");
    MeasurementRecord rec;
    rec.path = path;
    rec.shots = shots;
    rec.seed = seed;

    const double p00 = bell_outcome_probabilities(path_product(net, path))[0];
    RandomStream rng(seed);
    for (long long s = 0; s < shots; ++s) {
        double u = rng.next_double();
        if (u < p00) {
            rec.counts[0] += 1.0;
        } else {
            double r = (u - p00) / (1.0 - p00);
            int other = 1 + static_cast<int>(r * 3.0);
            if (other > 3) other = 3;
            rec.counts[static_cast<std::size_t>(other)] += 1.0;
        }
    }
    return rec;
}

}  // namespace qnt
