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
#include <deque>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qnt/errors.hpp"

namespace qnt {

// Werner parameters live in [0, kWernerMax]; the information formulas diverge
// as w -> 1, so values at or above 1 - 1e-9 are rejected on load.
inline constexpr double kWernerMax = 1.0 - 1e-9;

struct Link {
    int a = -1;  // node index, a < b after normalization
    int b = -1;
    double werner = 0.0;
};

/// Undirected simple connected graph with Werner-parameterized links.
/// Immutable after load; node and link indices follow input order.
class Network {
  public:
    Network(std::vector<std::string> node_ids, std::vector<Link> links)
        : node_ids_(std::move(node_ids)), links_(std::move(links)) {
        build_adjacency();
        validate();
    }

    int node_count() const { return static_cast<int>(node_ids_.size()); }
    int link_count() const { return static_cast<int>(links_.size()); }
    const std::vector<std::string>& node_ids() const { return node_ids_; }
    const std::string& node_id(int v) const { return node_ids_.at(static_cast<std::size_t>(v)); }
    const Link& link(int i) const { return links_.at(static_cast<std::size_t>(i)); }
    const std::vector<Link>& links() const { return links_; }
    double werner(int i) const { return link(i).werner; }

    /// (neighbor node, link index) pairs, sorted by neighbor index.
    const std::vector<std::pair<int, int>>& neighbors(int v) const {
        return adjacency_.at(static_cast<std::size_t>(v));
    }

    int degree(int v) const { return static_cast<int>(neighbors(v).size()); }

    int node_index(const std::string& id) const {
        auto it = node_lookup_.find(id);
        if (it == node_lookup_.end())
            throw Error(ErrorCode::UnknownNode, "node '" + id + "' is not declared");
        return it->second;
    }

    /// Hop distances from `src` to every node (breadth-first).
    std::vector<int> hop_distances(int src) const {
        std::vector<int> dist(node_ids_.size(), -1);
        std::deque<int> queue{src};
        dist[static_cast<std::size_t>(src)] = 0;
        while (!queue.empty()) {
            int u = queue.front();
            queue.pop_front();
            for (const auto& [v, li] : neighbors(u)) {
                (void)li;
                if (dist[static_cast<std::size_t>(v)] < 0) {
                    dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
                    queue.push_back(v);
                }
            }
        }
        return dist;
    }

  private:
    void build_adjacency() {
        adjacency_.assign(node_ids_.size(), {});
        for (std::size_t i = 0; i < node_ids_.size(); ++i) {
            if (!node_lookup_.emplace(node_ids_[i], static_cast<int>(i)).second)
                throw Error(ErrorCode::ParseError, "duplicate node id '" + node_ids_[i] + "'");
        }
        for (std::size_t i = 0; i < links_.size(); ++i) {
            Link& l = links_[i];
            if (l.a == l.b)
                throw Error(ErrorCode::SelfLoop,
                            "link " + std::to_string(i) + " connects a node to itself");
            if (l.a < 0 || l.b < 0 || l.a >= node_count() || l.b >= node_count())
                throw Error(ErrorCode::UnknownNode, "link " + std::to_string(i) +
                                                        " references an undeclared node");
            if (l.a > l.b) std::swap(l.a, l.b);
            adjacency_[static_cast<std::size_t>(l.a)].emplace_back(l.b, static_cast<int>(i));
            adjacency_[static_cast<std::size_t>(l.b)].emplace_back(l.a, static_cast<int>(i));
        }
        for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());
    }

    void validate() const {
        std::set<std::pair<int, int>> seen;
        for (std::size_t i = 0; i < links_.size(); ++i) {
            const Link& l = links_[i];
            if (!seen.insert({l.a, l.b}).second)
                throw Error(ErrorCode::DuplicateLink,
                            "parallel link " + std::to_string(i) + " between '" +
                                node_ids_[static_cast<std::size_t>(l.a)] + "' and '" +
                                node_ids_[static_cast<std::size_t>(l.b)] + "'");
            if (l.werner < 0.0 || l.werner >= kWernerMax)
                throw Error(ErrorCode::WernerOutOfRange,
                            "link " + std::to_string(i) + " has w = " +
                                std::to_string(l.werner) + ", outside [0, 1 - 1e-9)");
        }
        if (node_ids_.empty()) throw Error(ErrorCode::ParseError, "network has no nodes");
        std::vector<int> dist = hop_distances(0);
        for (std::size_t v = 0; v < dist.size(); ++v)
            if (dist[v] < 0)
                throw Error(ErrorCode::DisconnectedGraph,
                            "node '" + node_ids_[v] + "' is unreachable");
    }

    std::vector<std::string> node_ids_;
    std::vector<Link> links_;
    std::vector<std::vector<std::pair<int, int>>> adjacency_;
    std::map<std::string, int> node_lookup_;
};

/// Routing path for one (monitor node, target link) pair. The sequence walks
/// from the monitor to the target's nearer endpoint and ends with the target.
struct MonitorPath {
    int monitor_node = -1;
    int target_link = -1;
    std::vector<int> link_sequence;

    bool operator==(const MonitorPath&) const = default;
};

enum class Topology { Star, Tree, General };

struct TopologyClass {
    Topology tag = Topology::General;
    int hub = -1;  // meaningful for Star only
};

inline TopologyClass classify_topology(const Network& net) {
    const int n = net.node_count();
    const int e = net.link_count();
    if (e == n - 1) {
        if (n >= 3) {
            for (int v = 0; v < n; ++v) {
                if (net.degree(v) == n - 1) {
                    bool leaves = true;
                    for (int u = 0; u < n; ++u)
                        if (u != v && net.degree(u) != 1) leaves = false;
                    if (leaves) return {Topology::Star, v};
                }
            }
        }
        return {Topology::Tree, -1};
    }
    return {Topology::General, -1};
}

/// Hop-shortest path from node `k` to link `i`, deterministic under two tie
/// rules: the endpoint of `i` nearer to `k` wins (then the lower node index),
/// and among equal-hop routes the lexicographically smallest node sequence is
/// taken.
inline MonitorPath shortest_monitor_path(const Network& net, int k, int i) {
    const Link& target = net.link(i);
    std::vector<int> dist_k = net.hop_distances(k);
    int u = target.a;
    if (dist_k[static_cast<std::size_t>(target.b)] < dist_k[static_cast<std::size_t>(target.a)])
        u = target.b;

    MonitorPath path;
    path.monitor_node = k;
    path.target_link = i;

    // Walk forward from k guided by distances to u; picking the smallest
    // admissible neighbor index at every step yields the lexicographically
    // smallest node sequence among all hop-shortest routes.
    std::vector<int> dist_u = net.hop_distances(u);
    int cur = k;
    while (cur != u) {
        int best_next = -1, best_link = -1;
        for (const auto& [v, li] : net.neighbors(cur)) {
            if (dist_u[static_cast<std::size_t>(v)] ==
                dist_u[static_cast<std::size_t>(cur)] - 1) {
                best_next = v;
                best_link = li;
                break;  // neighbors are sorted by node index
            }
        }
        path.link_sequence.push_back(best_link);
        cur = best_next;
    }
    path.link_sequence.push_back(i);
    return path;
}

/// Effective probe parameter of a path: the product of squared link Werner
/// parameters along it.
inline double path_product(const Network& net, const MonitorPath& path) {
    double w = 1.0;
    for (int li : path.link_sequence) w *= net.werner(li) * net.werner(li);
    return w;
}

// ---------------------------------------------------------------------------
// File format. Example:
//   { "nodes": ["v0", "v1"], "links": [ { "a": "v0", "b": "v1", "w": 0.9 } ] }
// Unknown fields are rejected so typos never pass silently.
// ---------------------------------------------------------------------------

inline Network load_network_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw Error(ErrorCode::ParseError, "network document must be an object");
    for (const auto& [key, value] : doc.items()) {
        (void)value;
        if (key != "nodes" && key != "links")
            throw Error(ErrorCode::ParseError, "unknown field '" + key + "' in network document");
    }
    if (!doc.contains("nodes") || !doc["nodes"].is_array())
        throw Error(ErrorCode::ParseError, "missing 'nodes' array");
    if (!doc.contains("links") || !doc["links"].is_array())
        throw Error(ErrorCode::ParseError, "missing 'links' array");

    std::vector<std::string> nodes;
    for (const auto& n : doc["nodes"]) {
        if (!n.is_string()) throw Error(ErrorCode::ParseError, "node ids must be strings");
        nodes.push_back(n.get<std::string>());
    }
    std::map<std::string, int> lookup;
    for (std::size_t i = 0; i < nodes.size(); ++i) lookup[nodes[i]] = static_cast<int>(i);

    std::vector<Link> links;
    for (const auto& l : doc["links"]) {
        if (!l.is_object()) throw Error(ErrorCode::ParseError, "links must be objects");
        for (const auto& [key, value] : l.items()) {
            (void)value;
            if (key != "a" && key != "b" && key != "w")
                throw Error(ErrorCode::ParseError, "unknown field '" + key + "' in link");
        }
        if (!l.contains("a") || !l.contains("b") || !l.contains("w"))
            throw Error(ErrorCode::ParseError, "link needs fields a, b, w");
        Link link;
        auto find = [&](const std::string& id) {
            auto it = lookup.find(id);
            if (it == lookup.end())
                throw Error(ErrorCode::UnknownNode, "link endpoint '" + id + "' is not declared");
            return it->second;
        };
        link.a = find(l["a"].get<std::string>());
        link.b = find(l["b"].get<std::string>());
        if (!l["w"].is_number()) throw Error(ErrorCode::ParseError, "link field 'w' must be a number");
        link.werner = l["w"].get<double>();
        links.push_back(link);
    }
    return Network(std::move(nodes), std::move(links));
}

inline Network load_network(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open network file '" + path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, "invalid JSON in '" + path + "': " + e.what());
    }
    return load_network_from_json(doc);
}

inline Network load_network_from_string(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("invalid JSON: ") + e.what());
    }
    return load_network_from_json(doc);
}

}  // namespace qnt
