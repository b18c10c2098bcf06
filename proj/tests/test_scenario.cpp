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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qnt/scenario.hpp"

namespace qnt {
namespace {

namespace fs = std::filesystem;

std::string data_path(const std::string& name) { return std::string(QNT_DATA_DIR) + "/" + name; }

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

fs::path fresh_dir(const std::string& tag) {
    fs::path dir = fs::temp_directory_path() / ("qnt_test_" + tag);
    fs::remove_all(dir);
    return dir;
}

TEST(Scenario, OptimizeWritesPlanMetricsAndLog) {
    fs::path dir = fresh_dir("optimize");
    Scenario s;
    s.network_path = data_path("star10_het.json");
    s.task = Task::Optimize;
    s.formulation = Formulation::QF;
    s.l_star_spec = "none";
    s.monitors = 2;
    s.out_dir = dir.string();
    ReportBundle bundle = run_scenario(s);
    EXPECT_TRUE(fs::exists(dir / "plan.json"));
    EXPECT_TRUE(fs::exists(dir / "metrics.json"));
    EXPECT_TRUE(fs::exists(dir / "log.txt"));
    EXPECT_GE(bundle.files.size(), 3u);

    // the emitted plan re-validates and round-trips
    Network net = load_network(s.network_path);
    std::ifstream in(dir / "plan.json");
    nlohmann::json doc;
    in >> doc;
    MonitoringPlan plan = MonitoringPlan::from_json(net, doc);
    validate_plan(net, plan);
    IlpModel model = build_model(net, 2, Formulation::QF, {}, PathSemantics::Learnable,
                                 IndirectMode::LemmaForm);
    EXPECT_TRUE(check_plan(model, plan).ok);
}

TEST(Scenario, ReportsAreByteIdenticalAcrossRuns) {
    fs::path a = fresh_dir("determinism_a");
    fs::path b = fresh_dir("determinism_b");
    for (const fs::path& dir : {a, b}) {
        Scenario s;
        s.network_path = data_path("star4_uniform.json");
        s.task = Task::MseStudy;
        s.formulation = Formulation::QF;
        s.l_star_spec = "none";
        s.monitors = 2;
        s.n_grid = {1000};
        s.trials = 40;
        s.seed = 11;
        s.seed_set = true;
        s.out_dir = dir.string();
        run_scenario(s);
    }
    for (const char* name : {"plan.json", "study.tsv", "log.txt", "series/mse_vs_n.tsv"})
        EXPECT_EQ(slurp(a / name), slurp(b / name)) << name;
}

TEST(Scenario, SweepEmitsFigureSeries) {
    fs::path dir = fresh_dir("sweep");
    Scenario s;
    s.network_path = data_path("star10_het.json");
    s.task = Task::SweepMonitors;
    s.both_formulations = true;
    s.l_star_spec = "min";
    s.sweep_from = 1;
    s.sweep_to = 3;
    s.out_dir = dir.string();
    run_scenario(s);
    EXPECT_TRUE(fs::exists(dir / "sweep_QF.tsv"));
    EXPECT_TRUE(fs::exists(dir / "sweep_QMF.tsv"));
    EXPECT_TRUE(fs::exists(dir / "assignment_QF.tsv"));
    EXPECT_TRUE(fs::exists(dir / "plans/plan_QF_m2.json"));
    EXPECT_TRUE(fs::exists(dir / "series/inverse_trace_vs_m.tsv"));
    EXPECT_TRUE(fs::exists(dir / "series/max_load_vs_m.tsv"));

    // two series labels in the accuracy panel
    std::string series = slurp(dir / "series/inverse_trace_vs_m.tsv");
    EXPECT_NE(series.find("\tQF"), std::string::npos);
    EXPECT_NE(series.find("\tQMF"), std::string::npos);
}

TEST(Scenario, MseStudySeriesPerLink) {
    fs::path dir = fresh_dir("study");
    Scenario s;
    s.network_path = data_path("star4_uniform.json");
    s.task = Task::MseStudy;
    s.formulation = Formulation::QF;
    s.l_star_spec = "none";
    s.monitors = 3;
    s.n_grid = {1000, 2000};
    s.trials = 20;
    s.seed = 3;
    s.seed_set = true;
    s.out_dir = dir.string();
    run_scenario(s);
    std::string qcrb = slurp(dir / "series/qcrb_vs_n.tsv");
    EXPECT_NE(qcrb.find("\tw0"), std::string::npos);
    EXPECT_NE(qcrb.find("\tw2"), std::string::npos);
}

TEST(Scenario, MseStudyRequiresSeed) {
    Scenario s;
    s.network_path = data_path("star4_uniform.json");
    s.task = Task::MseStudy;
    s.out_dir = fresh_dir("noseed").string();
    try {
        run_scenario(s);
        FAIL() << "expected seed requirement";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ConfigError);
    }
}

TEST(Scenario, EmitPlotDataOnEmptyBundle) {
    fs::path dir = fresh_dir("empty");
    fs::create_directories(dir);
    try {
        emit_plot_data(dir.string());
        FAIL() << "expected missing report";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::MissingReport);
    }
}

TEST(Scenario, ExportLpRoundTrip) {
    fs::path dir = fresh_dir("lp");
    Scenario s;
    s.network_path = data_path("star10_het.json");
    s.task = Task::ExportLp;
    s.formulation = Formulation::QMF;
    s.l_star_spec = "5";
    s.monitors = 2;
    s.out_dir = dir.string();
    run_scenario(s);
    std::string text = slurp(dir / "model.lp");
    Network net = load_network(s.network_path);
    IlpModel model = build_model(net, 2, Formulation::QMF, {5}, PathSemantics::Learnable,
                                 IndirectMode::LemmaForm);
    ParsedLp lp = parse_lp(text);
    EXPECT_EQ(lp.var_names.size(), model.vars.size());
    EXPECT_EQ(lp.rows.size(), model.constraints.size());
}

TEST(Cli, EndToEndOptimizeAndErrorClass) {
    fs::path dir = fresh_dir("cli");
    std::string cli = QNT_CLI_PATH;
    std::string cmd = cli + " optimize --net " + data_path("star10_het.json") +
                      " --objective qmf --l-star min --monitors 3 --out " + dir.string() +
                      " >/dev/null 2>&1";
    ASSERT_EQ(std::system(cmd.c_str()), 0);
    EXPECT_TRUE(fs::exists(dir / "plan.json"));

    // infeasible capacity surfaces as a machine-readable error class
    fs::path dir2 = fresh_dir("cli_err");
    std::string bad = cli + " optimize --net " + data_path("star10_het.json") +
                      " --objective qmf --l-star 1 --monitors 2 --out " + dir2.string() +
                      " 2> " + (dir2.string() + ".err") + " >/dev/null";
    int rc = std::system(bad.c_str());
    EXPECT_NE(rc, 0);
    std::string err = slurp(dir2.string() + ".err");
    EXPECT_NE(err.find("QNT_ERROR CapacityInfeasible"), std::string::npos);
}

}  // namespace
}  // namespace qnt
