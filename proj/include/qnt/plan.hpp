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
#include <string>
#include <vector>

#include <json.hpp>

#include "qnt/errors.hpp"
#include "qnt/network.hpp"
#include "qnt/qfi.hpp"

namespace qnt {

/// A complete monitoring design: where the monitors sit, which links they
/// measure directly, and which they probe through multi-link paths.
struct MonitoringPlan {
    struct DirectAssignment {
        int link = -1;
        int monitor = -1;
        bool operator==(const DirectAssignment&) const = default;
    };
    struct IndirectAssignment {
        int link = -1;
        int monitor = -1;
        MonitorPath path;
        bool operator==(const IndirectAssignment&) const = default;
    };

    std::vector<int> monitor_nodes;  // monitor label -> node index
    std::vector<DirectAssignment> direct;
    std::vector<IndirectAssignment> indirect;
    std::vector<int> loads;   // per monitor label
    double objective = 0.0;   // surrogate trace the optimizer maximized

    int max_load() const {
        int m = 0;
        for (int l : loads) m = std::max(m, l);
        return m;
    }

    /// Monitors are interchangeable; relabel them by ascending placed-node
    /// index and sort assignment lists so equivalent plans serialize equally.
    void canonicalize() {
        std::vector<int> order(monitor_nodes.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return monitor_nodes[static_cast<std::size_t>(a)] <
                                             monitor_nodes[static_cast<std::size_t>(b)]; });
        std::vector<int> relabel(monitor_nodes.size());
        for (std::size_t new_label = 0; new_label < order.size(); ++new_label)
            relabel[static_cast<std::size_t>(order[new_label])] = static_cast<int>(new_label);

        std::vector<int> nodes(monitor_nodes.size()), load(monitor_nodes.size(), 0);
        for (std::size_t j = 0; j < monitor_nodes.size(); ++j) {
            nodes[static_cast<std::size_t>(relabel[j])] = monitor_nodes[j];
            if (j < loads.size()) load[static_cast<std::size_t>(relabel[j])] = loads[j];
        }
        monitor_nodes = std::move(nodes);
        loads = std::move(load);
        for (auto& d : direct) d.monitor = relabel[static_cast<std::size_t>(d.monitor)];
        for (auto& p : indirect) p.monitor = relabel[static_cast<std::size_t>(p.monitor)];
        std::sort(direct.begin(), direct.end(),
                  [](const auto& a, const auto& b) { return a.link < b.link; });
        std::sort(indirect.begin(), indirect.end(),
                  [](const auto& a, const auto& b) { return a.link < b.link; });
    }

    nlohmann::ordered_json to_json(const Network& net) const {
        nlohmann::ordered_json doc;
        doc["monitors"] = nlohmann::ordered_json::array();
        for (std::size_t j = 0; j < monitor_nodes.size(); ++j)
            doc["monitors"].push_back({{"monitor", j}, {"node", net.node_id(monitor_nodes[j])}});
        doc["direct"] = nlohmann::ordered_json::array();
        for (const auto& d : direct) doc["direct"].push_back({{"link", d.link}, {"monitor", d.monitor}});
        doc["indirect"] = nlohmann::ordered_json::array();
        for (const auto& p : indirect)
            doc["indirect"].push_back(
                {{"link", p.link}, {"monitor", p.monitor}, {"path", p.path.link_sequence}});
        doc["loads"] = loads;
        doc["objective"] = objective;
        return doc;
    }

    static MonitoringPlan from_json(const Network& net, const nlohmann::json& doc) {
        MonitoringPlan plan;
        try {
            for (const auto& m : doc.at("monitors"))
                plan.monitor_nodes.push_back(net.node_index(m.at("node").get<std::string>()));
            for (const auto& d : doc.at("direct"))
                plan.direct.push_back({d.at("link").get<int>(), d.at("monitor").get<int>()});
            for (const auto& p : doc.at("indirect")) {
                IndirectAssignment ia;
                ia.link = p.at("link").get<int>();
                ia.monitor = p.at("monitor").get<int>();
                ia.path.monitor_node = plan.monitor_nodes.at(static_cast<std::size_t>(ia.monitor));
                ia.path.target_link = ia.link;
                ia.path.link_sequence = p.at("path").get<std::vector<int>>();
                plan.indirect.push_back(std::move(ia));
            }
            plan.loads = doc.value("loads", std::vector<int>{});
            plan.objective = doc.value("objective", 0.0);
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::ParseError, std::string("bad plan document: ") + e.what());
        }
        if (plan.loads.empty()) {
            plan.loads.assign(plan.monitor_nodes.size(), 0);
            for (const auto& d : plan.direct) plan.loads.at(static_cast<std::size_t>(d.monitor))++;
            for (const auto& p : plan.indirect) plan.loads.at(static_cast<std::size_t>(p.monitor))++;
        }
        return plan;
    }
};

/// Checks the structural plan invariants against a network: every link is
/// measured exactly once, direct monitors sit at an endpoint, and indirect
/// paths are valid routes ending at their target.
inline void validate_plan(const Network& net, const MonitoringPlan& plan) {
    std::vector<int> covered(static_cast<std::size_t>(net.link_count()), 0);
    for (const auto& d : plan.direct) {
        covered.at(static_cast<std::size_t>(d.link))++;
        int node = plan.monitor_nodes.at(static_cast<std::size_t>(d.monitor));
        const Link& l = net.link(d.link);
        if (l.a != node && l.b != node)
            throw Error(ErrorCode::ConfigError,
                        "direct monitor " + std::to_string(d.monitor) +
                            " is not at an endpoint of link " + std::to_string(d.link));
    }
    for (const auto& p : plan.indirect) {
        covered.at(static_cast<std::size_t>(p.link))++;
        if (p.path.link_sequence.empty() || p.path.link_sequence.back() != p.link)
            throw Error(ErrorCode::ConfigError,
                        "indirect path for link " + std::to_string(p.link) +
                            " does not end at its target");
    }
    for (int i = 0; i < net.link_count(); ++i)
        if (covered[static_cast<std::size_t>(i)] != 1)
            throw Error(ErrorCode::ConfigError, "link " + std::to_string(i) + " is measured " +
                                                    std::to_string(covered[static_cast<std::size_t>(i)]) +
                                                    " times");
}

/// Builds the per-shot probe list a plan implies (one probe per assignment).
inline std::vector<ProbeContribution> plan_probes(const Network& net,
                                                  const MonitoringPlan& plan,
                                                  long long shots_per_probe = 1) {
    std::vector<ProbeContribution> probes;
    for (const auto& d : plan.direct) {
        MonitorPath path;
        path.monitor_node = plan.monitor_nodes.at(static_cast<std::size_t>(d.monitor));
        path.target_link = d.link;
        path.link_sequence = {d.link};
        probes.push_back(make_probe(net, path, shots_per_probe));
    }
    for (const auto& p : plan.indirect) probes.push_back(make_probe(net, p.path, shots_per_probe));
    return probes;
}

struct PlanMetrics {
    double qfim_trace = 0.0;
    double inverse_trace = 0.0;
    std::vector<int> param_links;
    std::vector<double> per_link_qcrb;
    int max_load = 0;
    double objective_surrogate = 0.0;  // coefficient sum under the given mode
};

/// Scores the coefficient a single assignment contributes to the surrogate
/// objective: direct contributions for one-link probes, mode-scored indirect
/// contributions otherwise.
inline double assignment_coefficient(const Network& net, const MonitorPath& path,
                                     IndirectMode mode) {
    if (path.link_sequence.size() == 1) return direct_qfi(net.werner(path.link_sequence[0]));
    std::vector<double> weights;
    weights.reserve(path.link_sequence.size());
    std::size_t target_pos = 0;
    for (std::size_t pos = 0; pos < path.link_sequence.size(); ++pos) {
        weights.push_back(net.werner(path.link_sequence[pos]));
        if (path.link_sequence[pos] == path.target_link) target_pos = pos;
    }
    return indirect_qfi(weights, target_pos, mode);
}

/// Assembles the full per-shot QFIM of a plan (direct diagonals plus the
/// rank-one blocks of every indirect probe) and reports accuracy and load
/// metrics. SingularQfim propagates when some link is not estimable.
inline PlanMetrics evaluate_plan(const Network& net, const MonitoringPlan& plan,
                                 IndirectMode mode = IndirectMode::ChainRule) {
    validate_plan(net, plan);
    std::vector<ProbeContribution> probes = plan_probes(net, plan);
    QfimModel model = assemble_qfim(probes);
    QcrbResult bounds = qcrb(model);

    PlanMetrics metrics;
    metrics.qfim_trace = model.matrix.trace();
    metrics.inverse_trace = bounds.inverse_trace;
    metrics.param_links = bounds.param_links;
    metrics.per_link_qcrb = bounds.variance_bounds;
    metrics.max_load = plan.max_load();
    for (const auto& d : plan.direct) metrics.objective_surrogate += direct_qfi(net.werner(d.link));
    for (const auto& p : plan.indirect)
        metrics.objective_surrogate += assignment_coefficient(net, p.path, mode);
    return metrics;
}

}  // namespace qnt
