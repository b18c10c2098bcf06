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

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qnt/qnt.hpp"

namespace {

struct CliState {
    qnt::Scenario scenario;
    std::string mode_name;       // "", "lemma", "chain", "cross"
    std::string semantics_name = "learnable";
    std::string objective_name = "qmf";
    std::string n_grid_spec;
};

void add_common(CLI::App* cmd, CliState& state) {
    cmd->add_option("--net", state.scenario.network_path, "network file (JSON)")->required();
    cmd->add_option("--out", state.scenario.out_dir, "report bundle directory")->required();
    cmd->add_option("--mode", state.mode_name,
                    "indirect scoring: lemma | chain | cross (default: by topology)");
    cmd->add_option("--semantics", state.semantics_name,
                    "indirect path semantics: learnable | strict");
}

void add_solver(CLI::App* cmd, CliState& state) {
    cmd->add_option("--objective", state.objective_name, "qf | qmf");
    cmd->add_option("--l-star", state.scenario.l_star_spec,
                    "monitoring-overhead bound: min | none | N | comma list");
    cmd->add_option("--node-limit", state.scenario.budget.max_nodes, "search node budget");
    cmd->add_option("--time-limit", state.scenario.budget.max_seconds, "search seconds budget");
}

void finalize(CliState& state) {
    if (!state.mode_name.empty())
        state.scenario.mode = qnt::indirect_mode_from_name(state.mode_name);
    if (state.semantics_name == "learnable")
        state.scenario.semantics = qnt::PathSemantics::Learnable;
    else if (state.semantics_name == "strict")
        state.scenario.semantics = qnt::PathSemantics::StrictSameMonitor;
    else
        throw qnt::Error(qnt::ErrorCode::ConfigError,
                         "unknown semantics '" + state.semantics_name + "'");
    if (state.objective_name == "qf") state.scenario.formulation = qnt::Formulation::QF;
    else if (state.objective_name == "qmf") state.scenario.formulation = qnt::Formulation::QMF;
    else if (state.objective_name == "both" &&
             state.scenario.task == qnt::Task::SweepMonitors)
        state.scenario.both_formulations = true;
    else
        throw qnt::Error(qnt::ErrorCode::ConfigError,
                         "unknown objective '" + state.objective_name + "'");
    if (!state.n_grid_spec.empty()) {
        state.scenario.n_grid.clear();
        std::stringstream ss(state.n_grid_spec);
        std::string item;
        while (std::getline(ss, item, ',')) state.scenario.n_grid.push_back(std::stoll(item));
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monitor placement and estimation toolkit for quantum network tomography"};
    app.require_subcommand(1);

    CliState state;

    CLI::App* optimize = app.add_subcommand("optimize", "solve a placement program exactly");
    add_common(optimize, state);
    add_solver(optimize, state);
    optimize->add_option("--monitors", state.scenario.monitors, "monitor count")->required();
    optimize->callback([&] { state.scenario.task = qnt::Task::Optimize; });

    CLI::App* star = app.add_subcommand("star-fast", "closed-form optimal plan for star networks");
    add_common(star, state);
    star->add_option("--monitors", state.scenario.monitors, "monitor count")->required();
    star->add_option("--l-star", state.scenario.l_star_spec,
                     "overhead bound: min | N (omit for the unconstrained strategy)");
    star->callback([&, star] {
        state.scenario.task = qnt::Task::StarFast;
        if (star->count("--l-star") == 0) state.scenario.l_star_spec = "none";
    });

    CLI::App* evaluate = app.add_subcommand("evaluate", "score an existing plan");
    add_common(evaluate, state);
    evaluate->add_option("--plan", state.scenario.plan_path, "plan file (JSON)")->required();
    evaluate->callback([&] { state.scenario.task = qnt::Task::Evaluate; });

    CLI::App* study = app.add_subcommand("mse-study", "Monte-Carlo estimator benchmark");
    add_common(study, state);
    add_solver(study, state);
    study->add_option("--monitors", state.scenario.monitors, "monitor count");
    study->add_option("--plan", state.scenario.plan_path, "reuse a plan file instead of solving");
    study->add_option("--n-grid", state.n_grid_spec, "sample counts, comma separated");
    study->add_option("--trials", state.scenario.trials, "Monte-Carlo trials per grid point");
    study->add_option("--seed", state.scenario.seed, "RNG seed (required)")->required();
    study->callback([&] {
        state.scenario.task = qnt::Task::MseStudy;
        state.scenario.seed_set = true;
    });

    CLI::App* sweep = app.add_subcommand("sweep-monitors", "solve across a monitor-count range");
    add_common(sweep, state);
    add_solver(sweep, state);
    sweep->add_option("--from", state.scenario.sweep_from, "first monitor count");
    sweep->add_option("--to", state.scenario.sweep_to, "last monitor count (default: max)");
    sweep->callback([&] { state.scenario.task = qnt::Task::SweepMonitors; });

    CLI::App* export_lp = app.add_subcommand("export-lp", "write the program in LP format");
    add_common(export_lp, state);
    add_solver(export_lp, state);
    export_lp->add_option("--monitors", state.scenario.monitors, "monitor count")->required();
    export_lp->callback([&] { state.scenario.task = qnt::Task::ExportLp; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        finalize(state);
        qnt::ReportBundle bundle = qnt::run_scenario(state.scenario);
        std::cout << "wrote " << bundle.files.size() << " files to " << bundle.dir << "\n";
        return 0;
    } catch (const qnt::Error& e) {
        std::cerr << "QNT_ERROR " << qnt::error_code_name(e.code()) << ": " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "QNT_ERROR Internal: " << e.what() << "\n";
        return 3;
    }
}
