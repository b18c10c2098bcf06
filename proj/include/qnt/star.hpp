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
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "qnt/errors.hpp"
#include "qnt/network.hpp"
#include "qnt/plan.hpp"
#include "qnt/qfi.hpp"

namespace qnt {

struct OverheadRange {
    int lo = 0;
    int hi = 0;
};

/// Feasible uniform monitoring-overhead bounds for n links and m monitors:
/// ceil((n - m)/m) + 1 <= L* <= n.
inline OverheadRange feasible_overhead_range(int n_links, int m) {
    if (m < 1 || m > n_links)
        throw Error(ErrorCode::ConfigError,
                    "monitor count " + std::to_string(m) + " outside [1, " +
                        std::to_string(n_links) + "]");
    return {(n_links - m + m - 1) / m + 1, n_links};
}

/// Sorted-order partition of the indirectly monitored links: M* = ceil(n/L*)
/// monitors carry indirect sets, the first M* - 1 filled to C_ind = L* - 1
/// links each and the last taking the remainder.
struct StarPartition {
    std::vector<int> sorted_links;          // links in descending w (ties: lower index)
    int m_star = 0;                         // monitors that perform indirect monitoring
    int c_ind = 0;                          // indirect capacity per monitor
    std::vector<std::vector<int>> indirect_sets;  // [monitor] -> links (subset of sorted order)
};

struct StarPartitionSizes {
    int m_star = 0;
    int c_ind = 0;
    std::vector<int> set_sizes;
};

/// Pure arithmetic of the partition. Errors rather than repairing when the
/// published formulas are mutually inconsistent for the given (n, m, L*);
/// see the diagnostic message for the failing count.
inline StarPartitionSizes star_partition_sizes(int n_links, int m, int l_star) {
    OverheadRange range = feasible_overhead_range(n_links, m);
    if (l_star < range.lo || l_star > range.hi)
        throw Error(ErrorCode::PartitionInfeasible,
                    "L* = " + std::to_string(l_star) + " outside [" + std::to_string(range.lo) +
                        ", " + std::to_string(range.hi) + "]");

    StarPartitionSizes sizes;
    sizes.m_star = (n_links + l_star - 1) / l_star;  // ceil(n / L*)
    sizes.c_ind = l_star - 1;
    const int c_star = n_links - m;  // links that must be indirectly monitored

    if (sizes.m_star > m)
        throw Error(ErrorCode::PartitionInfeasible,
                    "M* = " + std::to_string(sizes.m_star) + " exceeds m = " + std::to_string(m));
    int last = c_star - sizes.c_ind * (sizes.m_star - 1);
    if (last < 0 || last > sizes.c_ind)
        throw Error(ErrorCode::PartitionInfeasible,
                    "partition sizes inconsistent: C* = " + std::to_string(c_star) +
                        ", C_ind = " + std::to_string(sizes.c_ind) +
                        ", M* = " + std::to_string(sizes.m_star) + " leave last set of " +
                        std::to_string(last));
    for (int i = 0; i + 1 < sizes.m_star; ++i) sizes.set_sizes.push_back(sizes.c_ind);
    sizes.set_sizes.push_back(last);
    return sizes;
}

/// Descending-w link order with ties broken toward the lower link index.
inline std::vector<int> sorted_star_links(const Network& net) {
    std::vector<int> order(static_cast<std::size_t>(net.link_count()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return net.werner(a) > net.werner(b); });
    return order;
}

inline StarPartition star_partition(const Network& net, int m, int l_star) {
    StarPartitionSizes sizes = star_partition_sizes(net.link_count(), m, l_star);
    StarPartition part;
    part.sorted_links = sorted_star_links(net);
    part.m_star = sizes.m_star;
    part.c_ind = sizes.c_ind;

    // Indirect links are the tail of the sorted order; better ones go to
    // better monitors, sets filled to capacity in monitor order.
    std::size_t cursor = static_cast<std::size_t>(m);
    for (int size : sizes.set_sizes) {
        std::vector<int> set;
        for (int s = 0; s < size; ++s) set.push_back(part.sorted_links[cursor++]);
        part.indirect_sets.push_back(std::move(set));
    }
    return part;
}

/// Provably optimal monitoring strategy for star networks: monitors on the
/// leaves of the m strongest links, each monitoring its own link directly and
/// its partition set through two-hop paths via the hub. Runs in O(n log n).
/// Omitting l_star removes the overhead constraint (L* = n, one indirect set).
inline MonitoringPlan star_optimal_plan(const Network& net, int m,
                                        std::optional<int> l_star = std::nullopt) {
    TopologyClass topo = classify_topology(net);
    if (topo.tag != Topology::Star)
        throw Error(ErrorCode::NotAStar, "fast path needs a star network");
    const int n = net.link_count();
    if (m < 1 || m > n)
        throw Error(ErrorCode::TooManyMonitors,
                    std::to_string(m) + " monitors for a star with " + std::to_string(n) +
                        " leaves");
    StarPartition part = star_partition(net, m, l_star.value_or(n));

    auto leaf_of = [&](int link) {
        const Link& l = net.link(link);
        return l.a == topo.hub ? l.b : l.a;
    };

    MonitoringPlan plan;
    plan.loads.assign(static_cast<std::size_t>(m), 0);
    for (int j = 0; j < m; ++j) {
        int own = part.sorted_links[static_cast<std::size_t>(j)];
        plan.monitor_nodes.push_back(leaf_of(own));
        plan.direct.push_back({own, j});
        plan.loads[static_cast<std::size_t>(j)]++;
        plan.objective += direct_qfi(net.werner(own));
    }
    for (std::size_t g = 0; g < part.indirect_sets.size(); ++g) {
        int j = static_cast<int>(g);
        int own = part.sorted_links[g];
        for (int target : part.indirect_sets[g]) {
            MonitorPath path;
            path.monitor_node = plan.monitor_nodes[g];
            path.target_link = target;
            path.link_sequence = {own, target};
            plan.indirect.push_back({target, j, std::move(path)});
            plan.loads[g]++;
            plan.objective += lemma_indirect_qfi(net.werner(own), net.werner(target));
        }
    }
    plan.canonicalize();
    return plan;
}

}  // namespace qnt
