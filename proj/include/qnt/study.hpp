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

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "qnt/errors.hpp"
#include "qnt/mle.hpp"
#include "qnt/plan.hpp"
#include "qnt/qfi.hpp"
#include "qnt/rng.hpp"
#include "qnt/sim.hpp"

namespace qnt {

struct MseStudyRow {
    int link = -1;
    long long shots = 0;
    double mse = 0.0;
    double qcrb = 0.0;
    long long trials = 0;
    double clamp_rate = 0.0;
};

namespace detail {

/// Order-insensitive accumulator (compensated summation), so a future
/// parallel split over trials cannot change the reported averages.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        double y = x - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

struct MonitorGroup {
    int direct_link = -1;
    int direct_probe = -1;           // probe index of the monitor's own record
    std::vector<int> target_links;
    std::vector<int> target_probes;  // probe index per target
};

}  // namespace detail

/// Monte-Carlo MSE of the closed-form estimators against the Cramér–Rao
/// reference, over a grid of per-probe sample counts. Supports plans whose
/// indirect paths are two-link routes anchored at the probing monitor's own
/// directly measured link (the star-style geometry the estimators cover).
inline std::vector<MseStudyRow> mse_study(const Network& net, const MonitoringPlan& plan,
                                          const std::vector<long long>& shot_grid,
                                          long long trials, uint64_t seed) {
    validate_plan(net, plan);
    if (trials < 1) throw Error(ErrorCode::ConfigError, "need at least one trial");
    if (shot_grid.empty()) throw Error(ErrorCode::ConfigError, "empty sample grid");

    // Group assignments per monitor and pin the probe indexing: direct
    // assignments first, then indirect, matching plan_probes().
    std::map<int, detail::MonitorGroup> groups;
    int probe_idx = 0;
    for (const auto& d : plan.direct) {
        auto& g = groups[d.monitor];
        if (g.direct_link == -1) {
            g.direct_link = d.link;
            g.direct_probe = probe_idx;
        } else {
            g.direct_link = -2;  // several direct links; fine unless this monitor probes indirectly
        }
        ++probe_idx;
    }
    for (const auto& p : plan.indirect) {
        auto& g = groups[p.monitor];
        if (g.direct_link < 0)
            throw Error(ErrorCode::ConfigError,
                        "monitor " + std::to_string(p.monitor) +
                            " probes indirectly but has no single direct link");
        if (p.path.link_sequence.size() != 2 || p.path.link_sequence[0] != g.direct_link)
            throw Error(ErrorCode::ConfigError,
                        "estimators cover two-link paths through the monitor's own link; link " +
                            std::to_string(p.link) + " is routed differently");
        g.target_links.push_back(p.link);
        g.target_probes.push_back(probe_idx);
        ++probe_idx;
    }

    // Per-shot information matrix gives the reference curve: F(N) = N F(1).
    std::vector<ProbeContribution> unit_probes = plan_probes(net, plan, 1);
    QcrbResult unit_bounds = qcrb(assemble_qfim(unit_probes));

    std::vector<MonitorPath> probe_paths;
    for (const ProbeContribution& p : unit_probes) probe_paths.push_back(p.path);

    std::vector<MseStudyRow> rows;
    for (std::size_t ni = 0; ni < shot_grid.size(); ++ni) {
        long long shots = shot_grid[ni];
        std::map<int, detail::KahanSum> sq_err;
        std::map<int, long long> clamps;

        for (long long trial = 0; trial < trials; ++trial) {
            // One independent stream per (grid point, trial, probe).
            std::vector<MeasurementRecord> records;
            records.reserve(probe_paths.size());
            for (std::size_t pi = 0; pi < probe_paths.size(); ++pi) {
                uint64_t stream =
                    mix_seed(mix_seed(mix_seed(seed, static_cast<uint64_t>(ni)),
                                      static_cast<uint64_t>(trial)),
                             static_cast<uint64_t>(pi));
                records.push_back(simulate_probe(net, probe_paths[pi], shots, stream));
            }

            std::map<int, Estimate> estimates;
            for (const auto& [monitor, group] : groups) {
                if (group.target_links.empty()) continue;
                std::vector<MeasurementRecord> ind;
                for (int tp : group.target_probes) ind.push_back(records[static_cast<std::size_t>(tp)]);
                IndirectEstimates joint =
                    mle_indirect(records[static_cast<std::size_t>(group.direct_probe)], ind);
                estimates[group.direct_link] = joint.monitor_link;
                for (const auto& [link, est] : joint.targets) estimates[link] = est;
            }
            int di = 0;
            for (const auto& d : plan.direct) {
                if (!estimates.count(d.link))
                    estimates[d.link] = mle_direct(records[static_cast<std::size_t>(di)]);
                ++di;
            }

            for (const auto& [link, est] : estimates) {
                double err = est.value - net.werner(link);
                sq_err[link].add(err * err);
                if (est.clamped()) clamps[link]++;
            }
        }

        for (std::size_t li = 0; li < unit_bounds.param_links.size(); ++li) {
            int link = unit_bounds.param_links[li];
            MseStudyRow row;
            row.link = link;
            row.shots = shots;
            row.mse = sq_err[link].sum / static_cast<double>(trials);
            row.qcrb = unit_bounds.variance_bounds[li] / static_cast<double>(shots);
            row.trials = trials;
            row.clamp_rate = static_cast<double>(clamps[link]) / static_cast<double>(trials);
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace qnt
