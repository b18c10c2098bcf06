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
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "qnt/ilp.hpp"
#include "qnt/network.hpp"
#include "qnt/qfi.hpp"
#include "qnt/rng.hpp"

namespace qnt::testutil {

inline Network make_star(const std::vector<double>& weights) {
    std::vector<std::string> nodes{"v0"};
    std::vector<Link> links;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        nodes.push_back("v" + std::to_string(i + 1));
        links.push_back({0, static_cast<int>(i + 1), weights[i]});
    }
    return Network(std::move(nodes), std::move(links));
}

inline Network random_star(RandomStream& rng, int n_links, double w_lo = 0.3,
                           double w_hi = 0.98) {
    std::vector<double> weights;
    for (int i = 0; i < n_links; ++i) weights.push_back(rng.next_double(w_lo, w_hi));
    return make_star(weights);
}

/// Random labelled tree: every new node attaches to a uniformly chosen
/// existing one.
inline Network random_tree(RandomStream& rng, int n_nodes, double w_lo = 0.3,
                           double w_hi = 0.98) {
    std::vector<std::string> nodes;
    std::vector<Link> links;
    for (int v = 0; v < n_nodes; ++v) {
        nodes.push_back("v" + std::to_string(v));
        if (v > 0) {
            int parent = static_cast<int>(rng.next_below(static_cast<uint64_t>(v)));
            links.push_back({parent, v, rng.next_double(w_lo, w_hi)});
        }
    }
    return Network(std::move(nodes), std::move(links));
}

/// Plain queue BFS, written against the adjacency list only; reference for
/// the path-preprocessing distances.
inline int bfs_distance(const Network& net, int from, int to) {
    std::vector<int> dist(static_cast<std::size_t>(net.node_count()), -1);
    std::deque<int> queue{from};
    dist[static_cast<std::size_t>(from)] = 0;
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        if (u == to) return dist[static_cast<std::size_t>(u)];
        for (const auto& [v, li] : net.neighbors(u)) {
            (void)li;
            if (dist[static_cast<std::size_t>(v)] < 0) {
                dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
                queue.push_back(v);
            }
        }
    }
    return -1;
}

/// Exhaustive optimum over every placement and measurement assignment,
/// sharing nothing with the branch-and-bound search. Returns nullopt when no
/// assignment is feasible. Capacities empty = unconstrained (QF).
inline std::optional<double> brute_force_optimum(const Network& net, int m,
                                                 const std::vector<int>& capacities,
                                                 PathSemantics semantics, IndirectMode mode,
                                                 bool exclude_star_hub = true) {
    std::vector<int> candidates;
    TopologyClass topo = classify_topology(net);
    for (int v = 0; v < net.node_count(); ++v) {
        if (exclude_star_hub && topo.tag == Topology::Star && v == topo.hub) continue;
        candidates.push_back(v);
    }
    if (m > static_cast<int>(candidates.size())) return std::nullopt;

    const int E = net.link_count();
    std::optional<double> best;

    std::vector<int> combo;
    auto consider_placement = [&](const std::vector<int>& nodes) {
        // Option lists per link under the endpoint-forcing rule.
        struct Opt {
            bool direct;
            int monitor;
            double coef;
            MonitorPath path;
        };
        std::vector<std::vector<Opt>> options(static_cast<std::size_t>(E));
        for (int i = 0; i < E; ++i) {
            const Link& l = net.link(i);
            for (int j = 0; j < m; ++j)
                if (nodes[static_cast<std::size_t>(j)] == l.a ||
                    nodes[static_cast<std::size_t>(j)] == l.b)
                    options[static_cast<std::size_t>(i)].push_back(
                        {true, j, direct_qfi(net.werner(i)), {}});
            if (options[static_cast<std::size_t>(i)].empty())
                for (int j = 0; j < m; ++j) {
                    MonitorPath path =
                        shortest_monitor_path(net, nodes[static_cast<std::size_t>(j)], i);
                    double coef = assignment_coefficient(net, path, mode);
                    options[static_cast<std::size_t>(i)].push_back({false, j, coef, path});
                }
        }

        std::vector<int> choice(static_cast<std::size_t>(E), 0);
        auto evaluate_leaf = [&]() {
            std::vector<int> load(static_cast<std::size_t>(m), 0);
            double total = 0.0;
            for (int i = 0; i < E; ++i) {
                const Opt& o = options[static_cast<std::size_t>(i)]
                                      [static_cast<std::size_t>(choice[static_cast<std::size_t>(i)])];
                load[static_cast<std::size_t>(o.monitor)]++;
                total += o.coef;
            }
            if (!capacities.empty())
                for (int j = 0; j < m; ++j)
                    if (load[static_cast<std::size_t>(j)] > capacities[static_cast<std::size_t>(j)])
                        return;
            if (semantics == PathSemantics::StrictSameMonitor) {
                for (int i = 0; i < E; ++i) {
                    const Opt& o = options[static_cast<std::size_t>(i)]
                                          [static_cast<std::size_t>(choice[static_cast<std::size_t>(i)])];
                    if (o.direct) continue;
                    for (int h : o.path.link_sequence) {
                        const Opt& ho = options[static_cast<std::size_t>(h)]
                                               [static_cast<std::size_t>(choice[static_cast<std::size_t>(h)])];
                        if (ho.monitor != o.monitor) return;
                    }
                }
            }
            if (!best || total > *best) best = total;
        };

        // Odometer over all option combinations.
        while (true) {
            evaluate_leaf();
            int pos = E - 1;
            while (pos >= 0) {
                choice[static_cast<std::size_t>(pos)]++;
                if (choice[static_cast<std::size_t>(pos)] <
                    static_cast<int>(options[static_cast<std::size_t>(pos)].size()))
                    break;
                choice[static_cast<std::size_t>(pos)] = 0;
                --pos;
            }
            if (pos < 0) break;
        }
    };

    // All ascending m-subsets of the candidate nodes.
    std::vector<int> stack;
    auto recurse = [&](auto&& self, std::size_t start) -> void {
        if (static_cast<int>(stack.size()) == m) {
            consider_placement(stack);
            return;
        }
        for (std::size_t c = start; c < candidates.size(); ++c) {
            stack.push_back(candidates[c]);
            self(self, c + 1);
            stack.pop_back();
        }
    };
    recurse(recurse, 0);
    return best;
}

}  // namespace qnt::testutil
