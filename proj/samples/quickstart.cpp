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

// Minimal library walkthrough: build a small star, solve the capacity-
// constrained placement program, and print the plan with its accuracy bound.

#include <iostream>

#include "qnt/qnt.hpp"

int main() {
    qnt::Network net = qnt::load_network_from_string(R"({
        "nodes": ["hub", "a", "b", "c", "d"],
        "links": [
            {"a": "hub", "b": "a", "w": 0.95},
            {"a": "hub", "b": "b", "w": 0.90},
            {"a": "hub", "b": "c", "w": 0.85},
            {"a": "hub", "b": "d", "w": 0.80}
        ]
    })");

    const int monitors = 2;
    qnt::IlpModel model = qnt::build_model(net, monitors, qnt::Formulation::QMF,
                                           {qnt::min_uniform_capacity(net.link_count(), monitors)},
                                           qnt::PathSemantics::Learnable,
                                           qnt::default_indirect_mode(net));
    qnt::SolveResult result = qnt::solve(net, model);

    std::cout << "objective " << result.plan.objective << "\n";
    for (std::size_t j = 0; j < result.plan.monitor_nodes.size(); ++j)
        std::cout << "monitor " << j << " at " << net.node_id(result.plan.monitor_nodes[j]) << "\n";
    for (const auto& d : result.plan.direct)
        std::cout << "link " << d.link << " direct via monitor " << d.monitor << "\n";
    for (const auto& p : result.plan.indirect)
        std::cout << "link " << p.link << " indirect via monitor " << p.monitor << "\n";

    qnt::PlanMetrics metrics = qnt::evaluate_plan(net, result.plan, qnt::IndirectMode::LemmaForm);
    std::cout << "inverse trace " << metrics.inverse_trace << ", max load " << metrics.max_load
              << "\n";

    // The same plan, found without the solver: stars have a closed-form rule.
    qnt::MonitoringPlan fast = qnt::star_optimal_plan(net, monitors, model.capacities[0]);
    std::cout << "fast-path objective " << fast.objective << "\n";
    return 0;
}
