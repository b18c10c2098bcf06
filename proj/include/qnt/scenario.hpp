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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qnt/errors.hpp"
#include "qnt/ilp.hpp"
#include "qnt/network.hpp"
#include "qnt/plan.hpp"
#include "qnt/solver.hpp"
#include "qnt/star.hpp"
#include "qnt/study.hpp"

namespace qnt {

enum class Task { Optimize, StarFast, Evaluate, MseStudy, SweepMonitors, ExportLp };

inline const char* task_name(Task t) {
    switch (t) {
        case Task::Optimize: return "optimize";
        case Task::StarFast: return "star-fast";
        case Task::Evaluate: return "evaluate";
        case Task::MseStudy: return "mse-study";
        case Task::SweepMonitors: return "sweep-monitors";
        case Task::ExportLp: return "export-lp";
    }
    return "?";
}

/// One fully specified run: inputs, task, and every knob the modules expose.
/// Reports are plain structured text and depend only on these fields (plus
/// the seed for stochastic tasks), so reruns are byte-identical.
struct Scenario {
    std::string network_path;
    Task task = Task::Optimize;
    Formulation formulation = Formulation::QMF;
    bool both_formulations = false;  // sweep-monitors: run QF and QMF side by side
    int monitors = 1;
    int sweep_from = 1;
    int sweep_to = 0;                 // 0: up to the placement capacity
    std::string l_star_spec = "min";  // "min", "none", an integer, or a comma list
    std::optional<IndirectMode> mode; // defaulted from the topology when absent
    PathSemantics semantics = PathSemantics::Learnable;
    std::string plan_path;            // evaluate / mse-study may reuse a plan file
    std::vector<long long> n_grid = {1000, 10000, 100000};
    long long trials = 500;
    uint64_t seed = 0;
    bool seed_set = false;
    std::string out_dir;
    SolveBudget budget;
};

struct ReportBundle {
    std::string dir;
    std::vector<std::string> files;
};

namespace detail {

inline std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

class ReportWriter {
  public:
    explicit ReportWriter(const std::string& dir) : dir_(dir) {
        std::filesystem::create_directories(dir);
    }

    void write(const std::string& name, const std::string& content) {
        std::filesystem::path path = std::filesystem::path(dir_) / name;
        std::filesystem::create_directories(path.parent_path());
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error(ErrorCode::ConfigError, "cannot write " + path.string());
        out << content;
        bundle_.files.push_back(name);
    }

    void write_json(const std::string& name, const nlohmann::ordered_json& doc) {
        write(name, doc.dump(2) + "\n");
    }

    void log(const std::string& line) { log_ << line << "\n"; }

    ReportBundle finish() {
        write("log.txt", log_.str());
        bundle_.dir = dir_;
        return bundle_;
    }

  private:
    std::string dir_;
    std::ostringstream log_;
    ReportBundle bundle_;
};

inline std::vector<int> parse_l_star(const std::string& spec, int n_links, int m,
                                     Formulation formulation) {
    if (formulation == Formulation::QF || spec == "none" || spec.empty()) return {};
    if (spec == "min") return {min_uniform_capacity(n_links, m)};
    std::vector<int> values;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            values.push_back(std::stoi(item));
        } catch (const std::exception&) {
            throw Error(ErrorCode::ConfigError, "bad monitoring-overhead spec '" + spec + "'");
        }
    }
    if (values.empty()) throw Error(ErrorCode::ConfigError, "empty monitoring-overhead spec");
    return values;
}

inline nlohmann::ordered_json metrics_to_json(const Network& net, const PlanMetrics& metrics,
                                              IndirectMode mode) {
    nlohmann::ordered_json doc;
    doc["qfim_trace"] = metrics.qfim_trace;
    doc["inverse_trace"] = metrics.inverse_trace;
    doc["qcrb"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < metrics.param_links.size(); ++i)
        doc["qcrb"].push_back({{"link", metrics.param_links[i]},
                               {"a", net.node_id(net.link(metrics.param_links[i]).a)},
                               {"b", net.node_id(net.link(metrics.param_links[i]).b)},
                               {"value", metrics.per_link_qcrb[i]}});
    doc["max_load"] = metrics.max_load;
    doc["objective_surrogate"] = metrics.objective_surrogate;
    doc["mode"] = indirect_mode_name(mode);
    return doc;
}

/// Per-link measurement table across a sweep (the placement-figure layout):
/// rows are links in descending parameter order, one column per monitor count,
/// cells are D<monitor> / I<monitor>.
inline std::string assignment_matrix(const Network& net,
                                     const std::vector<MonitoringPlan>& plans,
                                     const std::vector<int>& m_values) {
    std::vector<int> order = sorted_star_links(net);
    std::ostringstream out;
    out << "link\tw";
    for (int m : m_values) out << "\tm" << m;
    out << "\n";
    for (int link : order) {
        out << link << "\t" << fmt(net.werner(link));
        for (const MonitoringPlan& plan : plans) {
            std::string cell = "-";
            for (const auto& d : plan.direct)
                if (d.link == link) cell = "D" + std::to_string(d.monitor);
            for (const auto& p : plan.indirect)
                if (p.link == link) cell = "I" + std::to_string(p.monitor);
            out << "\t" << cell;
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace detail

/// Derives plot-ready series files (x, y, series label) from the reports in a
/// bundle directory. Throws MissingReport when the directory holds nothing a
/// figure can be made of.
inline std::vector<std::string> emit_plot_data(const std::string& bundle_dir) {
    namespace fs = std::filesystem;
    if (!fs::exists(bundle_dir))
        throw Error(ErrorCode::MissingReport, "no report bundle at '" + bundle_dir + "'");

    std::vector<std::string> written;
    auto write_series = [&](const std::string& name, const std::string& content) {
        fs::path path = fs::path(bundle_dir) / "series" / name;
        fs::create_directories(path.parent_path());
        std::ofstream out(path, std::ios::binary);
        out << "x\ty\tseries\n" << content;
        written.push_back("series/" + name);
    };

    // Accuracy/load-versus-monitors panels from sweep tables.
    std::ostringstream acc, load;
    for (const char* variant : {"QF", "QMF"}) {
        fs::path sweep = fs::path(bundle_dir) / ("sweep_" + std::string(variant) + ".tsv");
        if (!fs::exists(sweep)) continue;
        std::ifstream in(sweep);
        std::string line;
        std::getline(in, line);  // header: m objective inverse_trace max_load
        while (std::getline(in, line)) {
            std::istringstream row(line);
            std::string m, objective, inverse_trace, max_load;
            row >> m >> objective >> inverse_trace >> max_load;
            if (m.empty()) continue;
            acc << m << "\t" << inverse_trace << "\t" << variant << "\n";
            load << m << "\t" << max_load << "\t" << variant << "\n";
        }
    }
    if (!acc.str().empty()) {
        write_series("inverse_trace_vs_m.tsv", acc.str());
        write_series("max_load_vs_m.tsv", load.str());
    }

    // MSE / reference-bound versus sample-count panels from a study table.
    fs::path study = fs::path(bundle_dir) / "study.tsv";
    if (fs::exists(study)) {
        std::ifstream in(study);
        std::string line;
        std::getline(in, line);
        std::ostringstream mse, qcrb;
        while (std::getline(in, line)) {
            std::istringstream row(line);
            std::string link, shots, mse_v, qcrb_v;
            row >> link >> shots >> mse_v >> qcrb_v;
            if (link.empty()) continue;
            mse << shots << "\t" << mse_v << "\tw" << link << "\n";
            qcrb << shots << "\t" << qcrb_v << "\tw" << link << "\n";
        }
        write_series("mse_vs_n.tsv", mse.str());
        write_series("qcrb_vs_n.tsv", qcrb.str());
    }

    // Per-link bound panel from standalone metrics.
    fs::path metrics = fs::path(bundle_dir) / "metrics.json";
    if (fs::exists(metrics) && written.empty()) {
        std::ifstream in(metrics);
        nlohmann::json doc;
        in >> doc;
        std::ostringstream qcrb;
        for (const auto& row : doc.value("qcrb", nlohmann::json::array()))
            qcrb << row.at("link").get<int>() << "\t" << row.at("value").get<double>() << "\tqcrb\n";
        write_series("qcrb_per_link.tsv", qcrb.str());
    }

    if (written.empty())
        throw Error(ErrorCode::MissingReport, "bundle '" + bundle_dir + "' holds no reports");
    return written;
}

namespace detail {

struct SolvedInstance {
    MonitoringPlan plan;
    IlpModel model;
    SolveStatus status = SolveStatus::Optimal;
};

inline SolvedInstance solve_instance(const Network& net, const Scenario& s, Formulation f,
                                     int m, ReportWriter& report) {
    IndirectMode mode = s.mode.value_or(default_indirect_mode(net));
    std::vector<int> l_star = parse_l_star(s.l_star_spec, net.link_count(), m, f);
    SolvedInstance out{{}, build_model(net, m, f, l_star, s.semantics, mode), SolveStatus::Optimal};
    SolveResult result = solve(net, out.model, s.budget);
    out.plan = result.plan;
    out.status = result.status;

    CheckResult check = check_plan(out.model, out.plan);
    report.log(std::string(formulation_name(f)) + " m=" + std::to_string(m) +
               " objective=" + fmt(out.plan.objective) +
               (result.status == SolveStatus::Optimal ? " (optimal)" : " (best-effort)") +
               " constraint-check=" + (check.ok ? "ok" : "VIOLATED"));
    if (!check.ok)
        throw Error(ErrorCode::ConfigError, "solver output failed the independent constraint check");
    return out;
}

}  // namespace detail

/// Executes a scenario and writes its report bundle (plan/metrics documents,
/// tables, plot series, and a deterministic run log) under `out_dir`.
inline ReportBundle run_scenario(const Scenario& s) {
    if (s.out_dir.empty()) throw Error(ErrorCode::ConfigError, "scenario needs an output directory");
    Network net = load_network(s.network_path);
    detail::ReportWriter report(s.out_dir);
    IndirectMode mode = s.mode.value_or(default_indirect_mode(net));

    report.log("task=" + std::string(task_name(s.task)) + " network=" + s.network_path +
               " mode=" + indirect_mode_name(mode) +
               " semantics=" + path_semantics_name(s.semantics));

    switch (s.task) {
        case Task::Optimize: {
            detail::SolvedInstance solved =
                detail::solve_instance(net, s, s.formulation, s.monitors, report);
            report.write_json("plan.json", solved.plan.to_json(net));
            PlanMetrics metrics = evaluate_plan(net, solved.plan, mode);
            report.write_json("metrics.json", detail::metrics_to_json(net, metrics, mode));
            break;
        }
        case Task::StarFast: {
            std::optional<int> l_star;
            if (s.l_star_spec != "none" && !s.l_star_spec.empty()) {
                std::vector<int> parsed =
                    detail::parse_l_star(s.l_star_spec, net.link_count(), s.monitors,
                                         Formulation::QMF);
                if (parsed.size() != 1)
                    throw Error(ErrorCode::ConfigError, "star-fast takes a single overhead bound");
                l_star = parsed[0];
            }
            MonitoringPlan plan = star_optimal_plan(net, s.monitors, l_star);
            // Cross-validate against the matching program's constraint rows.
            IlpModel model = l_star ? build_model(net, s.monitors, Formulation::QMF, {*l_star},
                                                  s.semantics, IndirectMode::LemmaForm)
                                    : build_model(net, s.monitors, Formulation::QF, {},
                                                  s.semantics, IndirectMode::LemmaForm);
            CheckResult check = check_plan(model, plan);
            report.log("star-fast m=" + std::to_string(s.monitors) + " objective=" +
                       detail::fmt(plan.objective) + " constraint-check=" +
                       (check.ok ? "ok" : "VIOLATED"));
            if (!check.ok)
                throw Error(ErrorCode::ConfigError, "star plan failed the constraint check");
            report.write_json("plan.json", plan.to_json(net));
            PlanMetrics metrics = evaluate_plan(net, plan, IndirectMode::LemmaForm);
            report.write_json("metrics.json",
                              detail::metrics_to_json(net, metrics, IndirectMode::LemmaForm));
            break;
        }
        case Task::Evaluate: {
            if (s.plan_path.empty())
                throw Error(ErrorCode::ConfigError, "evaluate needs a plan file");
            std::ifstream in(s.plan_path);
            if (!in) throw Error(ErrorCode::ConfigError, "cannot open plan '" + s.plan_path + "'");
            nlohmann::json doc;
            in >> doc;
            MonitoringPlan plan = MonitoringPlan::from_json(net, doc);
            PlanMetrics metrics = evaluate_plan(net, plan, mode);
            report.log("evaluate plan=" + s.plan_path + " inverse_trace=" +
                       detail::fmt(metrics.inverse_trace));
            report.write_json("metrics.json", detail::metrics_to_json(net, metrics, mode));
            break;
        }
        case Task::ExportLp: {
            std::vector<int> l_star =
                detail::parse_l_star(s.l_star_spec, net.link_count(), s.monitors, s.formulation);
            IlpModel model = build_model(net, s.monitors, s.formulation, l_star, s.semantics, mode);
            report.log("export-lp vars=" + std::to_string(model.vars.size()) +
                       " constraints=" + std::to_string(model.constraints.size()));
            report.write("model.lp", export_lp(model));
            break;
        }
        case Task::MseStudy: {
            if (!s.seed_set)
                throw Error(ErrorCode::ConfigError, "mse-study is stochastic; pass a seed");
            MonitoringPlan plan;
            if (!s.plan_path.empty()) {
                std::ifstream in(s.plan_path);
                if (!in)
                    throw Error(ErrorCode::ConfigError, "cannot open plan '" + s.plan_path + "'");
                nlohmann::json doc;
                in >> doc;
                plan = MonitoringPlan::from_json(net, doc);
                validate_plan(net, plan);
                report.log("mse-study plan=" + s.plan_path);
            } else {
                plan = detail::solve_instance(net, s, s.formulation, s.monitors, report).plan;
            }
            report.write_json("plan.json", plan.to_json(net));
            std::vector<MseStudyRow> rows = mse_study(net, plan, s.n_grid, s.trials, s.seed);
            std::ostringstream table;
            table << "link\tshots\tmse\tqcrb\ttrials\tclamp_rate\n";
            for (const MseStudyRow& row : rows)
                table << row.link << "\t" << row.shots << "\t" << detail::fmt(row.mse) << "\t"
                      << detail::fmt(row.qcrb) << "\t" << row.trials << "\t"
                      << detail::fmt(row.clamp_rate) << "\n";
            report.write("study.tsv", table.str());
            report.log("mse-study rows=" + std::to_string(rows.size()) +
                       " trials=" + std::to_string(s.trials) + " seed=" + std::to_string(s.seed));
            break;
        }
        case Task::SweepMonitors: {
            int hi = s.sweep_to;
            IlpModel probe_model = build_model(net, 1, Formulation::QF, {}, s.semantics, mode);
            int max_m = static_cast<int>(probe_model.candidate_nodes.size());
            if (hi <= 0) hi = std::min(max_m, net.link_count());
            std::vector<Formulation> runs;
            if (s.both_formulations) runs = {Formulation::QF, Formulation::QMF};
            else runs = {s.formulation};

            for (Formulation f : runs) {
                std::vector<MonitoringPlan> plans;
                std::vector<int> m_values;
                std::ostringstream table;
                table << "m\tobjective\tinverse_trace\tmax_load\n";
                for (int m = s.sweep_from; m <= hi; ++m) {
                    detail::SolvedInstance solved = detail::solve_instance(net, s, f, m, report);
                    PlanMetrics metrics = evaluate_plan(net, solved.plan, mode);
                    table << m << "\t" << detail::fmt(solved.plan.objective) << "\t"
                          << detail::fmt(metrics.inverse_trace) << "\t" << metrics.max_load << "\n";
                    report.write_json("plans/plan_" + std::string(formulation_name(f)) + "_m" +
                                          std::to_string(m) + ".json",
                                      solved.plan.to_json(net));
                    plans.push_back(std::move(solved.plan));
                    m_values.push_back(m);
                }
                report.write("sweep_" + std::string(formulation_name(f)) + ".tsv", table.str());
                report.write("assignment_" + std::string(formulation_name(f)) + ".tsv",
                             detail::assignment_matrix(net, plans, m_values));
            }
            break;
        }
    }

    ReportBundle bundle = report.finish();
    // Series derivation is part of every figure-producing scenario.
    if (s.task == Task::MseStudy || s.task == Task::SweepMonitors || s.task == Task::Evaluate) {
        std::vector<std::string> series = emit_plot_data(bundle.dir);
        bundle.files.insert(bundle.files.end(), series.begin(), series.end());
    }
    return bundle;
}

}  // namespace qnt
