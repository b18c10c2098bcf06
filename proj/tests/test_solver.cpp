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

#include <gtest/gtest.h>

#include "qnt/solver.hpp"
#include "testutil.hpp"

namespace qnt {
namespace {

TEST(Solver, FourNodeStarHandValue) {
    Network net = testutil::make_star({0.9, 0.9, 0.9});
    IlpModel model = build_model(net, 1, Formulation::QF, {}, PathSemantics::Learnable,
                                 IndirectMode::LemmaForm);
    SolveResult result = solve(net, model);
    EXPECT_EQ(result.status, SolveStatus::Optimal);
    EXPECT_NEAR(result.plan.objective, direct_qfi(0.9) + 2 * lemma_indirect_qfi(0.9, 0.9), 1e-12);
    EXPECT_EQ(result.plan.direct.size(), 1u);
    EXPECT_EQ(result.plan.indirect.size(), 2u);
    CheckResult check = check_plan(model, result.plan);
    EXPECT_TRUE(check.ok);
    // the declarative objective row reproduces the search's value
    EXPECT_NEAR(check.objective, result.plan.objective, 1e-9);
}

TEST(Solver, ConsolidatesIndirectOnBestLinkUnderQf) {
    Network net = testutil::make_star({0.95, 0.92, 0.90, 0.88, 0.85, 0.80, 0.75, 0.70, 0.65});
    IlpModel model = build_model(net, 2, Formulation::QF, {}, PathSemantics::Learnable,
                                 IndirectMode::LemmaForm);
    SolveResult result = solve(net, model);
    // the monitor holding link 0 (w = 0.95, leaf v1 = node 1) takes every indirect job
    int best_monitor = -1;
    for (const auto& d : result.plan.direct)
        if (d.link == 0) best_monitor = d.monitor;
    ASSERT_GE(best_monitor, 0);
    EXPECT_EQ(result.plan.indirect.size(), 7u);
    for (const auto& p : result.plan.indirect) EXPECT_EQ(p.monitor, best_monitor);
}

TEST(Solver, MatchesBruteForceOnRandomStars) {
    RandomStream rng(11);
    for (int round = 0; round < 25; ++round) {
        int n = 3 + static_cast<int>(rng.next_below(5));
        Network net = testutil::random_star(rng, n);
        int m = 1 + static_cast<int>(rng.next_below(static_cast<uint64_t>(n)));
        for (Formulation f : {Formulation::QF, Formulation::QMF}) {
            std::vector<int> caps;
            if (f == Formulation::QMF)
                caps = {min_uniform_capacity(n, m) +
                        static_cast<int>(rng.next_below(static_cast<uint64_t>(
                            n - min_uniform_capacity(n, m) + 1)))};
            IlpModel model = build_model(net, m, f, caps, PathSemantics::Learnable,
                                         IndirectMode::LemmaForm);
            SolveResult result = solve(net, model);
            std::vector<int> oracle_caps =
                caps.empty() ? std::vector<int>{}
                             : std::vector<int>(static_cast<std::size_t>(m), caps[0]);
            auto oracle = testutil::brute_force_optimum(net, m, oracle_caps,
                                                        PathSemantics::Learnable,
                                                        IndirectMode::LemmaForm);
            ASSERT_TRUE(oracle.has_value());
            ASSERT_NEAR(result.plan.objective, *oracle, 1e-9 * (1 + *oracle));
            ASSERT_TRUE(check_plan(model, result.plan).ok);
        }
    }
}

TEST(Solver, MatchesBruteForceOnRandomTrees) {
    RandomStream rng(12);
    for (int round = 0; round < 20; ++round) {
        Network net = testutil::random_tree(rng, 5 + static_cast<int>(rng.next_below(3)));
        int n = net.link_count();
        int m = 1 + static_cast<int>(rng.next_below(3));
        if (m > n) m = n;
        for (PathSemantics sem : {PathSemantics::Learnable, PathSemantics::StrictSameMonitor}) {
            int cap = std::min(min_uniform_capacity(n, m) + 1, n);
            IlpModel model =
                build_model(net, m, Formulation::QMF, {cap}, sem, IndirectMode::ChainRule);
            auto oracle = testutil::brute_force_optimum(
                net, m, std::vector<int>(static_cast<std::size_t>(m), cap), sem,
                IndirectMode::ChainRule);
            try {
                SolveResult result = solve(net, model);
                ASSERT_TRUE(oracle.has_value());
                ASSERT_NEAR(result.plan.objective, *oracle, 1e-9 * (1 + *oracle));
                ASSERT_TRUE(check_plan(model, result.plan).ok);
            } catch (const Error& e) {
                ASSERT_EQ(e.code(), ErrorCode::Infeasible);
                ASSERT_FALSE(oracle.has_value());
            }
        }
    }
}

TEST(Solver, MatchesBruteForceOnCycles) {
    // General topology: rings have two routes per (node, link) pair, so the
    // deterministic path preprocessing is the part under test here.
    RandomStream rng(15);
    for (int round = 0; round < 10; ++round) {
        int n = 4 + static_cast<int>(rng.next_below(3));
        std::vector<std::string> nodes;
        std::vector<Link> links;
        for (int v = 0; v < n; ++v) {
            nodes.push_back("v" + std::to_string(v));
            links.push_back({v, (v + 1) % n, rng.next_double(0.3, 0.95)});
        }
        Network net(nodes, links);
        int m = 1 + static_cast<int>(rng.next_below(2));
        IlpModel model = build_model(net, m, Formulation::QF, {}, PathSemantics::Learnable,
                                     IndirectMode::ChainRule);
        SolveResult result = solve(net, model);
        auto oracle = testutil::brute_force_optimum(net, m, {}, PathSemantics::Learnable,
                                                    IndirectMode::ChainRule);
        ASSERT_TRUE(oracle.has_value());
        ASSERT_NEAR(result.plan.objective, *oracle, 1e-9 * (1 + *oracle));
        ASSERT_TRUE(check_plan(model, result.plan).ok);
    }
}

TEST(Solver, QfDominatesQmf) {
    RandomStream rng(13);
    for (int round = 0; round < 15; ++round) {
        int n = 4 + static_cast<int>(rng.next_below(3));
        Network net = testutil::random_star(rng, n);
        int m = 1 + static_cast<int>(rng.next_below(static_cast<uint64_t>(n)));
        IlpModel qf = build_model(net, m, Formulation::QF, {}, PathSemantics::Learnable,
                                  IndirectMode::LemmaForm);
        double qf_value = solve(net, qf).plan.objective;
        for (int cap = min_uniform_capacity(n, m); cap <= n; ++cap) {
            IlpModel qmf = build_model(net, m, Formulation::QMF, {cap},
                                       PathSemantics::Learnable, IndirectMode::LemmaForm);
            double qmf_value = solve(net, qmf).plan.objective;
            ASSERT_GE(qf_value, qmf_value - 1e-9);
        }
    }
}

TEST(Solver, MonotoneInMonitorCount) {
    RandomStream rng(14);
    Network net = testutil::random_star(rng, 6);
    for (Formulation f : {Formulation::QF, Formulation::QMF}) {
        double prev = 0.0;
        for (int m = 1; m <= 6; ++m) {
            // QMF at the loosest bound stays feasible for every m
            std::vector<int> caps = f == Formulation::QMF ? std::vector<int>{6} : std::vector<int>{};
            IlpModel model = build_model(net, m, f, caps, PathSemantics::Learnable,
                                         IndirectMode::LemmaForm);
            double value = solve(net, model).plan.objective;
            ASSERT_GE(value, prev - 1e-12);
            prev = value;
        }
    }
}

TEST(Solver, InfeasibleWhenMonitorsExceedCandidates) {
    // 4-node star: the hub is not a candidate, so 4 monitors cannot be placed.
    Network net = testutil::make_star({0.9, 0.8, 0.7});
    IlpModel model = build_model(net, 4, Formulation::QF, {}, PathSemantics::Learnable,
                                 IndirectMode::LemmaForm);
    try {
        solve(net, model);
        FAIL() << "expected infeasibility";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Infeasible);
    }
}

TEST(Solver, HeterogeneousCapacitiesPinLabels) {
    Network net = testutil::make_star({0.9, 0.8, 0.7, 0.6});
    // monitor 0 may carry three links, monitor 1 only one
    IlpModel model = build_model(net, 2, Formulation::QMF, {3, 1}, PathSemantics::Learnable,
                                 IndirectMode::LemmaForm);
    SolveResult result = solve(net, model);
    EXPECT_LE(result.plan.loads[0], 3);
    EXPECT_LE(result.plan.loads[1], 1);
    EXPECT_TRUE(check_plan(model, result.plan).ok);
}

TEST(Solver, BudgetExhaustionBeforeAnyLeaf) {
    Network net = testutil::make_star({0.9, 0.8, 0.7, 0.6, 0.5});
    IlpModel model = build_model(net, 2, Formulation::QF, {}, PathSemantics::Learnable,
                                 IndirectMode::LemmaForm);
    SolveBudget budget;
    budget.max_nodes = 1;
    try {
        solve(net, model, budget);
        FAIL() << "expected budget exhaustion";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::BudgetExhausted);
    }
}

TEST(Solver, BudgetAfterIncumbentYieldsBestEffort) {
    Network net = testutil::make_star({0.9, 0.8, 0.7, 0.6, 0.5});
    IlpModel model = build_model(net, 2, Formulation::QF, {}, PathSemantics::Learnable,
                                 IndirectMode::LemmaForm);
    SolveBudget budget;
    budget.max_nodes = 12;  // enough for the first feasible leaf, not the tree
    SolveResult result = solve(net, model, budget);
    EXPECT_EQ(result.status, SolveStatus::BestEffort);
    EXPECT_TRUE(check_plan(model, result.plan).ok);
}

TEST(Solver, DeterministicCanonicalOutput) {
    Network net = testutil::make_star({0.9, 0.9, 0.9, 0.9, 0.9});
    IlpModel model = build_model(net, 2, Formulation::QMF, {3}, PathSemantics::Learnable,
                                 IndirectMode::LemmaForm);
    SolveResult a = solve(net, model);
    SolveResult b = solve(net, model);
    EXPECT_EQ(a.plan.monitor_nodes, b.plan.monitor_nodes);
    EXPECT_EQ(a.plan.direct, b.plan.direct);
    EXPECT_EQ(a.plan.indirect, b.plan.indirect);
    // ties everywhere: canonical plan places monitors on the lowest leaves
    EXPECT_EQ(a.plan.monitor_nodes, (std::vector<int>{1, 2}));
}

}  // namespace
}  // namespace qnt
