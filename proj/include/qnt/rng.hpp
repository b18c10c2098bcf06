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

#include <cstdint>

namespace qnt {

// Counter-based seeding built on the splitmix64 finalizer. Streams are derived
// purely from (seed, counters), so simulation results do not depend on how
// work is scheduled across threads or batches.
inline uint64_t splitmix64_next(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Mixes a counter into a seed, producing a new independent stream seed.
inline uint64_t mix_seed(uint64_t seed, uint64_t counter) {
    uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL + (counter << 1));
    return splitmix64_next(s);
}

/// Deterministic uniform stream. Identical seeds give identical sequences on
/// every platform (no std:: distributions involved).
class RandomStream {
  public:
    explicit RandomStream(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() { return splitmix64_next(state_); }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double next_double(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    /// Uniform integer in [0, n).
    uint64_t next_below(uint64_t n) { return next_u64() % n; }

  private:
    uint64_t state_;
};

}  // namespace qnt
