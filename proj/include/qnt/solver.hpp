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
#include <chrono>
#include <cmath>
#include <optional>
#include <vector>

#include "qnt/errors.hpp"
#include "qnt/ilp.hpp"
#include "qnt/network.hpp"
#include "qnt/plan.hpp"

namespace qnt {

struct SolveBudget {
    long long max_nodes = -1;   // < 0: unlimited
    double max_seconds = -1.0;  // < 0: unlimited
};

enum class SolveStatus {
    Optimal,     // search tree exhausted, plan is provably optimal
    BestEffort,  // a budget limit fired; plan is the incumbent at that point
};

struct SolveResult {
    MonitoringPlan plan;
    SolveStatus status = SolveStatus::Optimal;
    long long nodes_explored = 0;
};

namespace detail {

struct LinkOption {
    bool is_direct = false;
    int monitor = -1;
    double coef = 0.0;
};

/// Depth-first branch and bound over the model's binary decisions: monitor
/// placements first (in ascending candidate order), then one measurement pick
/// per link in index order, trying direct before indirect and lower monitor
/// labels first. Branches are cut when the accumulated value plus the sum of
/// the best still-attainable coefficient per unassigned link cannot beat the
/// incumbent, so exploration order makes the first surviving optimum the
/// lexicographically smallest one.
class BranchAndBound {
  public:
    BranchAndBound(const Network& net, const IlpModel& model, SolveBudget budget)
        : net_(net), model_(model), budget_(budget), start_(std::chrono::steady_clock::now()) {}

    SolveResult run() {
        // Placement-phase bound: every link at its best conceivable value.
        static_bound_ = 0.0;
        for (int i = 0; i < model_.n_links; ++i) {
            double best = model_.direct_coef[static_cast<std::size_t>(i)];
            for (int k : model_.candidate_nodes)
                best = std::max(best,
                                model_.indirect_coef[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]);
            static_bound_ += best;
        }
        placement_.assign(static_cast<std::size_t>(model_.n_monitors), -1);
        node_used_.assign(static_cast<std::size_t>(model_.n_nodes), false);

        try {
            place_monitor(0);
        } catch (const BudgetStop&) {
            if (!best_plan_) throw Error(ErrorCode::BudgetExhausted,
                                         "budget exhausted before any feasible plan was found");
            SolveResult result{*best_plan_, SolveStatus::BestEffort, nodes_};
            finalize(result.plan);
            return result;
        }
        if (!best_plan_)
            throw Error(ErrorCode::Infeasible, "no monitor assignment satisfies the constraints");
        SolveResult result{*best_plan_, SolveStatus::Optimal, nodes_};
        finalize(result.plan);
        return result;
    }

  private:
    struct BudgetStop {};

    void tick() {
        ++nodes_;
        if (budget_.max_nodes >= 0 && nodes_ > budget_.max_nodes) throw BudgetStop{};
        if (budget_.max_seconds >= 0 && (nodes_ & 1023) == 0) {
            double elapsed = std::chrono::duration<double>(
                                 std::chrono::steady_clock::now() - start_).count();
            if (elapsed > budget_.max_seconds) throw BudgetStop{};
        }
    }

    // Monitors with identical capacity are interchangeable, so ascending node
    // combinations cover the placement space exactly once. Heterogeneous
    // capacities pin labels to capacities and need ordered selections.
    void place_monitor(int j) {
        if (best_plan_ && static_bound_ <= best_value_ + tol()) return;
        if (j == model_.n_monitors) {
            assign_links();
            return;
        }
        bool symmetric = model_.formulation == Formulation::QF || model_.uniform_capacity();
        int floor_node = (symmetric && j > 0) ? placement_[static_cast<std::size_t>(j - 1)] + 1 : 0;
        for (int k : model_.candidate_nodes) {
            if (k < floor_node || node_used_[static_cast<std::size_t>(k)]) continue;
            tick();
            placement_[static_cast<std::size_t>(j)] = k;
            node_used_[static_cast<std::size_t>(k)] = true;
            place_monitor(j + 1);
            node_used_[static_cast<std::size_t>(k)] = false;
            placement_[static_cast<std::size_t>(j)] = -1;
        }
    }

    void assign_links() {
        const int E = model_.n_links;
        const int M = model_.n_monitors;

        // Option lists for this placement, in canonical order.
        options_.assign(static_cast<std::size_t>(E), {});
        for (int i = 0; i < E; ++i) {
            const Link& l = net_.link(i);
            std::vector<LinkOption>& opts = options_[static_cast<std::size_t>(i)];
            for (int j = 0; j < M; ++j) {
                int node = placement_[static_cast<std::size_t>(j)];
                if (node == l.a || node == l.b)
                    opts.push_back({true, j, model_.direct_coef[static_cast<std::size_t>(i)]});
            }
            if (opts.empty()) {
                // No endpoint monitor: the link can only be probed indirectly.
                for (int j = 0; j < M; ++j) {
                    int node = placement_[static_cast<std::size_t>(j)];
                    opts.push_back({false, j,
                                    model_.indirect_coef[static_cast<std::size_t>(i)]
                                                        [static_cast<std::size_t>(node)]});
                }
            }
        }

        suffix_bound_.assign(static_cast<std::size_t>(E + 1), 0.0);
        for (int i = E - 1; i >= 0; --i) {
            double best = 0.0;
            for (const LinkOption& opt : options_[static_cast<std::size_t>(i)])
                best = std::max(best, opt.coef);
            suffix_bound_[static_cast<std::size_t>(i)] =
                suffix_bound_[static_cast<std::size_t>(i + 1)] + best;
        }

        assigned_monitor_.assign(static_cast<std::size_t>(E), -1);
        assigned_direct_.assign(static_cast<std::size_t>(E), false);
        required_monitor_.assign(static_cast<std::size_t>(E), -1);
        if (model_.formulation == Formulation::QMF)
            remaining_cap_ = model_.capacities;
        assign_link(0, 0.0);
    }

    double tol() const { return 1e-9 + 1e-12 * std::fabs(best_value_); }

    void assign_link(int i, double value) {
        const int E = model_.n_links;
        if (best_plan_ &&
            value + suffix_bound_[static_cast<std::size_t>(i)] <= best_value_ + tol())
            return;
        if (model_.formulation == Formulation::QMF) {
            long long cap_left = 0;
            for (int c : remaining_cap_) cap_left += c;
            if (cap_left < E - i) return;
        }
        if (i == E) {
            record_leaf(value);
            return;
        }

        for (const LinkOption& opt : options_[static_cast<std::size_t>(i)]) {
            if (required_monitor_[static_cast<std::size_t>(i)] >= 0 &&
                required_monitor_[static_cast<std::size_t>(i)] != opt.monitor)
                continue;
            if (model_.formulation == Formulation::QMF &&
                remaining_cap_[static_cast<std::size_t>(opt.monitor)] == 0)
                continue;

            // Strict ownership: crossing links must be measured by the same
            // monitor. Stamp requirements on unassigned links, reject when an
            // already-assigned one disagrees.
            std::vector<int> stamped;
            bool feasible = true;
            if (!opt.is_direct && model_.semantics == PathSemantics::StrictSameMonitor) {
                int node = placement_[static_cast<std::size_t>(opt.monitor)];
                const MonitorPath& path =
                    model_.paths[static_cast<std::size_t>(node)][static_cast<std::size_t>(i)];
                for (int h : path.link_sequence) {
                    if (h == i) continue;
                    if (h < i) {
                        if (assigned_monitor_[static_cast<std::size_t>(h)] != opt.monitor) {
                            feasible = false;
                            break;
                        }
                    } else {
                        int req = required_monitor_[static_cast<std::size_t>(h)];
                        if (req >= 0 && req != opt.monitor) {
                            feasible = false;
                            break;
                        }
                        if (req < 0) {
                            required_monitor_[static_cast<std::size_t>(h)] = opt.monitor;
                            stamped.push_back(h);
                        }
                    }
                }
            }

            if (feasible) {
                tick();
                assigned_monitor_[static_cast<std::size_t>(i)] = opt.monitor;
                assigned_direct_[static_cast<std::size_t>(i)] = opt.is_direct;
                if (model_.formulation == Formulation::QMF)
                    remaining_cap_[static_cast<std::size_t>(opt.monitor)]--;
                assign_link(i + 1, value + opt.coef);
                if (model_.formulation == Formulation::QMF)
                    remaining_cap_[static_cast<std::size_t>(opt.monitor)]++;
                assigned_monitor_[static_cast<std::size_t>(i)] = -1;
            }
            for (int h : stamped) required_monitor_[static_cast<std::size_t>(h)] = -1;
        }
    }

    void record_leaf(double value) {
        if (best_plan_ && value <= best_value_ + tol()) return;
        MonitoringPlan plan;
        plan.monitor_nodes = placement_;
        plan.loads.assign(static_cast<std::size_t>(model_.n_monitors), 0);
        for (int i = 0; i < model_.n_links; ++i) {
            int j = assigned_monitor_[static_cast<std::size_t>(i)];
            plan.loads[static_cast<std::size_t>(j)]++;
            if (assigned_direct_[static_cast<std::size_t>(i)]) {
                plan.direct.push_back({i, j});
            } else {
                int node = placement_[static_cast<std::size_t>(j)];
                plan.indirect.push_back(
                    {i, j, model_.paths[static_cast<std::size_t>(node)][static_cast<std::size_t>(i)]});
            }
        }
        plan.objective = value;
        best_plan_ = std::move(plan);
        best_value_ = value;
    }

    void finalize(MonitoringPlan& plan) const {
        // Capacities pin monitor labels; only symmetric models are relabeled.
        if (model_.formulation == Formulation::QF || model_.uniform_capacity())
            plan.canonicalize();
    }

    const Network& net_;
    const IlpModel& model_;
    SolveBudget budget_;
    std::chrono::steady_clock::time_point start_;

    double static_bound_ = 0.0;
    std::vector<int> placement_;
    std::vector<bool> node_used_;
    std::vector<std::vector<LinkOption>> options_;
    std::vector<double> suffix_bound_;
    std::vector<int> assigned_monitor_;
    std::vector<bool> assigned_direct_;
    std::vector<int> required_monitor_;
    std::vector<int> remaining_cap_;

    std::optional<MonitoringPlan> best_plan_;
    double best_value_ = 0.0;
    long long nodes_ = 0;
};

}  // namespace detail

/// Solves the placement program exactly. Throws Infeasible when no assignment
/// satisfies the constraints and BudgetExhausted when a limit fires before any
/// feasible leaf; a limit firing after an incumbent exists yields a plan
/// flagged BestEffort instead.
inline SolveResult solve(const Network& net, const IlpModel& model, SolveBudget budget = {}) {
    detail::BranchAndBound search(net, model, budget);
    return search.run();
}

}  // namespace qnt
