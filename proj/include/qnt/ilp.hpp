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
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "qnt/errors.hpp"
#include "qnt/network.hpp"
#include "qnt/plan.hpp"
#include "qnt/qfi.hpp"

namespace qnt {

enum class Formulation { QF, QMF };

inline const char* formulation_name(Formulation f) {
    return f == Formulation::QF ? "QF" : "QMF";
}

/// How indirect assignments may relate to the rest of the design. Learnable
/// allows a probe path to cross links measured by other monitors; the strict
/// variant requires every link on the path to be measured by the same monitor.
enum class PathSemantics { Learnable, StrictSameMonitor };

inline const char* path_semantics_name(PathSemantics s) {
    return s == PathSemantics::Learnable ? "learnable" : "strict";
}

// ---------------------------------------------------------------------------
// Declarative model
// ---------------------------------------------------------------------------

struct IlpVariable {
    std::string name;
    bool is_integer = true;
    double lb = 0.0;
    double ub = 1.0;
};

enum class Sense { LE, GE, EQ };

struct LinearTerm {
    int var = -1;
    double coef = 0.0;
};

struct LinearConstraint {
    std::string name;
    std::vector<LinearTerm> terms;
    Sense sense = Sense::LE;
    double rhs = 0.0;
};

/// Binary program for the monitor placement problem, kept both as structure
/// (index maps, coefficient tables, routing paths) and as a declarative list
/// of variables/constraints that the exporter and the independent checker
/// consume.
struct IlpModel {
    Formulation formulation = Formulation::QMF;
    PathSemantics semantics = PathSemantics::Learnable;
    IndirectMode mode = IndirectMode::ChainRule;
    int n_links = 0;
    int n_nodes = 0;
    int n_monitors = 0;
    std::vector<int> capacities;       // per monitor; empty for QF
    std::vector<int> candidate_nodes;  // nodes eligible for placement

    std::vector<std::vector<MonitorPath>> paths;     // [node][link]
    std::vector<double> direct_coef;                 // [link]
    std::vector<std::vector<double>> indirect_coef;  // [link][node]

    std::vector<IlpVariable> vars;
    std::vector<LinearConstraint> constraints;
    std::vector<double> objective;  // per variable, maximized

    // Index maps; -1 where a family is absent in this formulation/semantics.
    std::vector<int> x_idx;     // [link * M + monitor]
    std::vector<int> p_idx;     // [link * M + monitor]
    std::vector<int> m_idx;     // [node * M + monitor]
    std::vector<int> b_idx;     // [link]
    std::vector<int> y_idx;     // [link * M + monitor]
    std::vector<int> z_idx;     // [(link * M + monitor) * V + node]
    std::vector<int> d_idx;     // [link]
    std::vector<int> load_idx;  // [monitor]

    int x(int i, int j) const { return x_idx[static_cast<std::size_t>(i * n_monitors + j)]; }
    int p(int i, int j) const { return p_idx[static_cast<std::size_t>(i * n_monitors + j)]; }
    int m(int k, int j) const { return m_idx[static_cast<std::size_t>(k * n_monitors + j)]; }
    int b(int i) const { return b_idx.empty() ? -1 : b_idx[static_cast<std::size_t>(i)]; }
    int y(int i, int j) const {
        return y_idx.empty() ? -1 : y_idx[static_cast<std::size_t>(i * n_monitors + j)];
    }
    int z(int i, int j, int k) const {
        return z_idx[static_cast<std::size_t>((i * n_monitors + j) * n_nodes + k)];
    }
    int d(int i) const { return d_idx[static_cast<std::size_t>(i)]; }
    int load(int j) const {
        return load_idx.empty() ? -1 : load_idx[static_cast<std::size_t>(j)];
    }

    bool uniform_capacity() const {
        for (std::size_t j = 1; j < capacities.size(); ++j)
            if (capacities[j] != capacities[0]) return false;
        return true;
    }
};

struct BuildOptions {
    /// Star networks are probed from their end nodes; a hub monitor would
    /// collapse the placement problem to measuring every link directly, which
    /// is outside the probing framework being optimized. Set to false to allow
    /// hub placement anyway (for auditing).
    bool exclude_star_hub = true;
};

/// Scoring mode used when the caller does not pin one: the two-link closed
/// form on stars, the path-derivative form elsewhere.
inline IndirectMode default_indirect_mode(const Network& net) {
    return classify_topology(net).tag == Topology::Star ? IndirectMode::LemmaForm
                                                        : IndirectMode::ChainRule;
}

/// Minimum feasible uniform per-monitor capacity: ceil((E - m) / m) + 1.
inline int min_uniform_capacity(int n_links, int m) {
    return static_cast<int>((n_links - m + m - 1) / m) + 1;
}

inline IlpModel build_model(const Network& net, int n_monitors, Formulation formulation,
                            std::vector<int> l_star = {},
                            PathSemantics semantics = PathSemantics::Learnable,
                            IndirectMode mode = IndirectMode::ChainRule,
                            BuildOptions options = {}) {
    const int E = net.link_count();
    const int V = net.node_count();
    const int M = n_monitors;
    if (M > V)
        throw Error(ErrorCode::TooManyMonitors,
                    std::to_string(M) + " monitors for " + std::to_string(V) + " nodes");
    if (M < 1) throw Error(ErrorCode::ConfigError, "need at least one monitor");

    IlpModel model;
    model.formulation = formulation;
    model.semantics = semantics;
    model.mode = mode;
    model.n_links = E;
    model.n_nodes = V;
    model.n_monitors = M;

    if (formulation == Formulation::QMF) {
        if (l_star.empty())
            throw Error(ErrorCode::ConfigError, "QMF needs a monitoring-overhead bound");
        if (l_star.size() == 1) {
            int cap = l_star[0];
            if (cap < min_uniform_capacity(E, M) || cap > E)
                throw Error(ErrorCode::CapacityInfeasible,
                            "L* = " + std::to_string(cap) + " outside [" +
                                std::to_string(min_uniform_capacity(E, M)) + ", " +
                                std::to_string(E) + "]");
            model.capacities.assign(static_cast<std::size_t>(M), cap);
        } else {
            if (static_cast<int>(l_star.size()) != M)
                throw Error(ErrorCode::ConfigError, "capacity list must have one entry per monitor");
            long long total = 0;
            for (int cap : l_star) {
                if (cap < 0 || cap > E)
                    throw Error(ErrorCode::CapacityInfeasible,
                                "per-monitor capacity " + std::to_string(cap) + " outside [0, " +
                                    std::to_string(E) + "]");
                total += cap;
            }
            if (total < E)
                throw Error(ErrorCode::CapacityInfeasible,
                            "total capacity " + std::to_string(total) + " cannot cover " +
                                std::to_string(E) + " links");
            model.capacities = std::move(l_star);
        }
    }

    // Placement candidates.
    TopologyClass topo = classify_topology(net);
    for (int k = 0; k < V; ++k) {
        if (options.exclude_star_hub && topo.tag == Topology::Star && k == topo.hub) continue;
        model.candidate_nodes.push_back(k);
    }

    // Routing pre-processing: hop-shortest path from every candidate monitor
    // location to every link.
    model.paths.assign(static_cast<std::size_t>(V), {});
    for (int k = 0; k < V; ++k) {
        model.paths[static_cast<std::size_t>(k)].reserve(static_cast<std::size_t>(E));
        for (int i = 0; i < E; ++i)
            model.paths[static_cast<std::size_t>(k)].push_back(shortest_monitor_path(net, k, i));
    }

    // Objective coefficient tables. One-link "indirect" routes score as direct
    // probes; they can never be selected anyway because an endpoint monitor
    // forces a direct measurement.
    model.direct_coef.resize(static_cast<std::size_t>(E));
    for (int i = 0; i < E; ++i) model.direct_coef[static_cast<std::size_t>(i)] = direct_qfi(net.werner(i));
    model.indirect_coef.assign(static_cast<std::size_t>(E), std::vector<double>(static_cast<std::size_t>(V), 0.0));
    for (int k = 0; k < V; ++k)
        for (int i = 0; i < E; ++i) {
            double c = assignment_coefficient(net, model.paths[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)], mode);
            if (!(c >= 0.0) || !std::isfinite(c))
                throw Error(ErrorCode::DomainError, "objective coefficient not finite");
            model.indirect_coef[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = c;
        }

    // --- Variables ---------------------------------------------------------
    auto add_var = [&](const std::string& name, double lb, double ub) {
        model.vars.push_back({name, true, lb, ub});
        model.objective.push_back(0.0);
        return static_cast<int>(model.vars.size()) - 1;
    };
    auto tag2 = [](const char* base, int a, int b) {
        return std::string(base) + "_" + std::to_string(a) + "_" + std::to_string(b);
    };

    bool learnable = semantics == PathSemantics::Learnable;
    model.x_idx.resize(static_cast<std::size_t>(E * M));
    model.p_idx.resize(static_cast<std::size_t>(E * M));
    model.m_idx.resize(static_cast<std::size_t>(V * M));
    model.d_idx.resize(static_cast<std::size_t>(E));
    model.z_idx.resize(static_cast<std::size_t>(E * M * V));
    if (learnable) {
        model.b_idx.resize(static_cast<std::size_t>(E));
        model.y_idx.resize(static_cast<std::size_t>(E * M));
    }
    if (formulation == Formulation::QMF) model.load_idx.resize(static_cast<std::size_t>(M));

    for (int i = 0; i < E; ++i)
        for (int j = 0; j < M; ++j)
            model.x_idx[static_cast<std::size_t>(i * M + j)] = add_var(tag2("x", i, j), 0, 1);
    for (int i = 0; i < E; ++i)
        for (int j = 0; j < M; ++j)
            model.p_idx[static_cast<std::size_t>(i * M + j)] = add_var(tag2("p", i, j), 0, 1);
    for (int k = 0; k < V; ++k) {
        bool allowed = std::find(model.candidate_nodes.begin(), model.candidate_nodes.end(), k) !=
                       model.candidate_nodes.end();
        for (int j = 0; j < M; ++j)
            model.m_idx[static_cast<std::size_t>(k * M + j)] =
                add_var(tag2("m", k, j), 0, allowed ? 1 : 0);
    }
    if (learnable) {
        for (int i = 0; i < E; ++i)
            model.b_idx[static_cast<std::size_t>(i)] = add_var("b_" + std::to_string(i), 0, 1);
        for (int i = 0; i < E; ++i)
            for (int j = 0; j < M; ++j)
                model.y_idx[static_cast<std::size_t>(i * M + j)] = add_var(tag2("y", i, j), 0, 1);
    }
    for (int i = 0; i < E; ++i)
        model.d_idx[static_cast<std::size_t>(i)] = add_var("d_" + std::to_string(i), 0, 1);
    for (int i = 0; i < E; ++i)
        for (int j = 0; j < M; ++j)
            for (int k = 0; k < V; ++k)
                model.z_idx[static_cast<std::size_t>((i * M + j) * V + k)] =
                    add_var("z_" + std::to_string(i) + "_" + std::to_string(j) + "_" +
                                std::to_string(k),
                            0, 1);
    if (formulation == Formulation::QMF)
        for (int j = 0; j < M; ++j)
            model.load_idx[static_cast<std::size_t>(j)] =
                add_var("load_" + std::to_string(j), 0, model.capacities[static_cast<std::size_t>(j)]);

    // Objective: direct picks score on x, indirect picks on the placement-
    // resolved AND variables z.
    for (int i = 0; i < E; ++i)
        for (int j = 0; j < M; ++j)
            model.objective[static_cast<std::size_t>(model.x(i, j))] =
                model.direct_coef[static_cast<std::size_t>(i)];
    for (int i = 0; i < E; ++i)
        for (int j = 0; j < M; ++j)
            for (int k = 0; k < V; ++k)
                model.objective[static_cast<std::size_t>(model.z(i, j, k))] =
                    model.indirect_coef[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];

    // --- Constraints -------------------------------------------------------
    auto add_con = [&](std::string name, std::vector<LinearTerm> terms, Sense sense, double rhs) {
        model.constraints.push_back({std::move(name), std::move(terms), sense, rhs});
    };

    // Each link is measured exactly once, directly or indirectly.
    for (int i = 0; i < E; ++i) {
        std::vector<LinearTerm> terms;
        for (int j = 0; j < M; ++j) {
            terms.push_back({model.x(i, j), 1.0});
            terms.push_back({model.p(i, j), 1.0});
        }
        add_con("measure_once_" + std::to_string(i), std::move(terms), Sense::EQ, 1.0);
    }

    // Direct measurement needs the monitor at an endpoint.
    for (int i = 0; i < E; ++i) {
        const Link& l = net.link(i);
        for (int j = 0; j < M; ++j)
            add_con(tag2("direct_endpoint", i, j),
                    {{model.x(i, j), 1.0}, {model.m(l.a, j), -1.0}, {model.m(l.b, j), -1.0}},
                    Sense::LE, 0.0);
    }

    // d_i tracks whether link i is directly measured; an endpoint monitor
    // forces it to 1 and the absence of endpoint monitors forces it to 0,
    // which linearizes sum_j x_ij = min(1, endpoint monitor count).
    for (int i = 0; i < E; ++i) {
        const Link& l = net.link(i);
        std::vector<LinearTerm> sum_x{{model.d(i), -1.0}};
        for (int j = 0; j < M; ++j) sum_x.push_back({model.x(i, j), 1.0});
        add_con("direct_count_" + std::to_string(i), std::move(sum_x), Sense::EQ, 0.0);
        for (int j = 0; j < M; ++j) {
            add_con("direct_forced_" + std::to_string(i) + "_a" + std::to_string(j),
                    {{model.d(i), 1.0}, {model.m(l.a, j), -1.0}}, Sense::GE, 0.0);
            add_con("direct_forced_" + std::to_string(i) + "_b" + std::to_string(j),
                    {{model.d(i), 1.0}, {model.m(l.b, j), -1.0}}, Sense::GE, 0.0);
        }
        std::vector<LinearTerm> cap{{model.d(i), 1.0}};
        for (int j = 0; j < M; ++j) {
            cap.push_back({model.m(l.a, j), -1.0});
            cap.push_back({model.m(l.b, j), -1.0});
        }
        add_con("direct_cap_" + std::to_string(i), std::move(cap), Sense::LE, 0.0);
    }

    if (learnable) {
        // Learnability bookkeeping. Every link parameter must be estimable, so
        // b_i is pinned to 1.
        for (int i = 0; i < E; ++i) {
            std::vector<LinearTerm> terms{{model.b(i), 2.0 * M}};
            for (int j = 0; j < M; ++j) {
                terms.push_back({model.x(i, j), -1.0});
                terms.push_back({model.y(i, j), -1.0});
            }
            add_con("learnable_evidence_" + std::to_string(i), std::move(terms), Sense::GE, 0.0);
            add_con("estimable_" + std::to_string(i), {{model.b(i), 1.0}}, Sense::EQ, 1.0);
        }
        for (int i = 0; i < E; ++i)
            for (int j = 0; j < M; ++j) {
                add_con(tag2("indirect_implies_learnable", i, j),
                        {{model.p(i, j), 1.0}, {model.y(i, j), -1.0}}, Sense::LE, 0.0);
                for (int k = 0; k < V; ++k) {
                    const MonitorPath& path = model.paths[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
                    double len = static_cast<double>(path.link_sequence.size());
                    std::vector<LinearTerm> terms{{model.y(i, j), len},
                                                  {model.p(i, j), -len},
                                                  {model.m(k, j), len}};
                    for (int h : path.link_sequence) terms.push_back({model.b(h), -1.0});
                    add_con("learnable_path_" + std::to_string(i) + "_" + std::to_string(j) + "_" +
                                std::to_string(k),
                            std::move(terms), Sense::LE, len);
                }
            }
    } else {
        // Strict ownership: an indirect pick needs every link on its routing
        // path measured by the same monitor.
        for (int i = 0; i < E; ++i)
            for (int j = 0; j < M; ++j)
                for (int k = 0; k < V; ++k) {
                    const MonitorPath& path = model.paths[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
                    double len = static_cast<double>(path.link_sequence.size());
                    std::vector<LinearTerm> terms{{model.p(i, j), len}, {model.m(k, j), len}};
                    for (int h : path.link_sequence) {
                        terms.push_back({model.x(h, j), -1.0});
                        terms.push_back({model.p(h, j), -1.0});
                    }
                    add_con("strict_path_" + std::to_string(i) + "_" + std::to_string(j) + "_" +
                                std::to_string(k),
                            std::move(terms), Sense::LE, len);
                }
    }

    // Placement: each monitor on exactly one node, at most one per node.
    for (int j = 0; j < M; ++j) {
        std::vector<LinearTerm> terms;
        for (int k = 0; k < V; ++k) terms.push_back({model.m(k, j), 1.0});
        add_con("place_one_" + std::to_string(j), std::move(terms), Sense::EQ, 1.0);
    }
    for (int k = 0; k < V; ++k) {
        std::vector<LinearTerm> terms;
        for (int j = 0; j < M; ++j) terms.push_back({model.m(k, j), 1.0});
        add_con("node_cap_" + std::to_string(k), std::move(terms), Sense::LE, 1.0);
    }

    // AND-linearization tying indirect picks to the monitor's location so the
    // objective can read the right routing path.
    for (int i = 0; i < E; ++i)
        for (int j = 0; j < M; ++j)
            for (int k = 0; k < V; ++k) {
                std::string base = std::to_string(i) + "_" + std::to_string(j) + "_" + std::to_string(k);
                add_con("z_le_p_" + base, {{model.z(i, j, k), 1.0}, {model.p(i, j), -1.0}},
                        Sense::LE, 0.0);
                add_con("z_le_m_" + base, {{model.z(i, j, k), 1.0}, {model.m(k, j), -1.0}},
                        Sense::LE, 0.0);
                add_con("z_and_" + base,
                        {{model.z(i, j, k), 1.0}, {model.p(i, j), -1.0}, {model.m(k, j), -1.0}},
                        Sense::GE, -1.0);
            }

    // Measurement overhead accounting (QMF only).
    if (formulation == Formulation::QMF) {
        for (int j = 0; j < M; ++j) {
            std::vector<LinearTerm> terms{{model.load(j), 1.0}};
            for (int i = 0; i < E; ++i) {
                terms.push_back({model.x(i, j), -1.0});
                terms.push_back({model.p(i, j), -1.0});
            }
            add_con("load_def_" + std::to_string(j), std::move(terms), Sense::EQ, 0.0);
            add_con("load_cap_" + std::to_string(j), {{model.load(j), 1.0}}, Sense::LE,
                    static_cast<double>(model.capacities[static_cast<std::size_t>(j)]));
        }
    }

    return model;
}

// ---------------------------------------------------------------------------
// Independent constraint checker
// ---------------------------------------------------------------------------

/// Expands a plan into a full variable assignment for the declarative model.
inline std::vector<double> plan_to_assignment(const IlpModel& model, const MonitoringPlan& plan) {
    std::vector<double> value(model.vars.size(), 0.0);
    if (static_cast<int>(plan.monitor_nodes.size()) != model.n_monitors)
        throw Error(ErrorCode::ConfigError, "plan monitor count does not match model");
    for (int j = 0; j < model.n_monitors; ++j)
        value[static_cast<std::size_t>(model.m(plan.monitor_nodes[static_cast<std::size_t>(j)], j))] = 1.0;
    for (const auto& d : plan.direct) value[static_cast<std::size_t>(model.x(d.link, d.monitor))] = 1.0;
    for (const auto& p : plan.indirect) {
        value[static_cast<std::size_t>(model.p(p.link, p.monitor))] = 1.0;
        int node = plan.monitor_nodes[static_cast<std::size_t>(p.monitor)];
        value[static_cast<std::size_t>(model.z(p.link, p.monitor, node))] = 1.0;
        if (model.y(p.link, p.monitor) >= 0)
            value[static_cast<std::size_t>(model.y(p.link, p.monitor))] = 1.0;
    }
    for (int i = 0; i < model.n_links; ++i) {
        double direct = 0.0;
        for (int j = 0; j < model.n_monitors; ++j)
            direct += value[static_cast<std::size_t>(model.x(i, j))];
        value[static_cast<std::size_t>(model.d(i))] = direct;
        if (model.b(i) >= 0) value[static_cast<std::size_t>(model.b(i))] = 1.0;
    }
    if (!model.load_idx.empty())
        for (int j = 0; j < model.n_monitors; ++j)
            value[static_cast<std::size_t>(model.load(j))] =
                static_cast<double>(plan.loads[static_cast<std::size_t>(j)]);
    return value;
}

struct CheckResult {
    bool ok = true;
    double objective = 0.0;
    std::vector<std::string> violations;
};

/// Evaluates every declarative row and bound against an assignment. This path
/// shares nothing with the branch-and-bound search, so it independently
/// certifies solver output.
inline CheckResult check_assignment(const IlpModel& model, const std::vector<double>& value,
                                    double tol = 1e-9) {
    CheckResult result;
    for (std::size_t v = 0; v < model.vars.size(); ++v) {
        const IlpVariable& var = model.vars[v];
        if (value[v] < var.lb - tol || value[v] > var.ub + tol) {
            result.ok = false;
            result.violations.push_back("bound " + var.name);
        }
        if (var.is_integer && std::fabs(value[v] - std::round(value[v])) > tol) {
            result.ok = false;
            result.violations.push_back("integrality " + var.name);
        }
        result.objective += model.objective[v] * value[v];
    }
    for (const LinearConstraint& con : model.constraints) {
        double lhs = 0.0;
        for (const LinearTerm& t : con.terms) lhs += t.coef * value[static_cast<std::size_t>(t.var)];
        bool ok = con.sense == Sense::LE   ? lhs <= con.rhs + tol
                  : con.sense == Sense::GE ? lhs >= con.rhs - tol
                                           : std::fabs(lhs - con.rhs) <= tol;
        if (!ok) {
            result.ok = false;
            result.violations.push_back(con.name);
        }
    }
    return result;
}

inline CheckResult check_plan(const IlpModel& model, const MonitoringPlan& plan) {
    return check_assignment(model, plan_to_assignment(model, plan));
}

// ---------------------------------------------------------------------------
// LP-format export and re-parse
// ---------------------------------------------------------------------------

inline std::string format_coef(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Serializes the model in the LP text format understood by common solvers.
inline std::string export_lp(const IlpModel& model) {
    std::ostringstream out;
    out << "\\ monitor placement (" << formulation_name(model.formulation) << ", "
        << path_semantics_name(model.semantics) << ", mode " << indirect_mode_name(model.mode)
        << ")\n";
    out << "Maximize\n obj:";
    int written = 0;
    for (std::size_t v = 0; v < model.vars.size(); ++v) {
        if (model.objective[v] == 0.0) continue;
        out << (written ? " + " : " ") << format_coef(model.objective[v]) << " "
            << model.vars[v].name;
        if (++written % 8 == 0) out << "\n   ";
    }
    if (written == 0) out << " 0 " << model.vars.front().name;
    out << "\nSubject To\n";
    for (const LinearConstraint& con : model.constraints) {
        out << " " << con.name << ":";
        bool first = true;
        int terms_on_line = 0;
        for (const LinearTerm& t : con.terms) {
            double c = t.coef;
            if (first) {
                out << " " << format_coef(c) << " " << model.vars[static_cast<std::size_t>(t.var)].name;
                first = false;
            } else if (c >= 0) {
                out << " + " << format_coef(c) << " " << model.vars[static_cast<std::size_t>(t.var)].name;
            } else {
                out << " - " << format_coef(-c) << " " << model.vars[static_cast<std::size_t>(t.var)].name;
            }
            if (++terms_on_line % 8 == 0) out << "\n   ";
        }
        out << (con.sense == Sense::LE ? " <= " : con.sense == Sense::GE ? " >= " : " = ")
            << format_coef(con.rhs) << "\n";
    }
    out << "Bounds\n";
    std::ostringstream binaries, generals;
    for (const IlpVariable& var : model.vars) {
        bool is_binary = var.is_integer && var.lb == 0.0 && var.ub <= 1.0;
        if (is_binary) {
            if (var.ub == 0.0) out << " " << var.name << " = 0\n";
            binaries << " " << var.name << "\n";
        } else {
            out << " " << format_coef(var.lb) << " <= " << var.name << " <= "
                << format_coef(var.ub) << "\n";
            generals << " " << var.name << "\n";
        }
    }
    if (binaries.str().size()) out << "Binaries\n" << binaries.str();
    if (generals.str().size()) out << "Generals\n" << generals.str();
    out << "End\n";
    return out.str();
}

/// Subset LP parser covering what export_lp emits; used for round-trip tests
/// and for inspecting exported models.
struct ParsedLp {
    std::vector<std::string> var_names;
    std::map<std::string, double> objective;
    struct Row {
        std::string name;
        std::map<std::string, double> terms;
        Sense sense;
        double rhs;
    };
    std::vector<Row> rows;
    std::map<std::string, std::pair<double, double>> bounds;
    std::vector<std::string> binaries;
    std::vector<std::string> generals;
};

inline ParsedLp parse_lp(const std::string& text) {
    ParsedLp lp;
    std::istringstream in(text);
    std::string line;
    enum Section { None, Objective, Rows, Bounds, Binaries, Generals };
    std::vector<std::pair<Section, std::string>> entries;
    auto classify = [&](const std::string& s) -> int {
        if (s == "Maximize" || s == "Minimize") return Objective;
        if (s == "Subject To") return Rows;
        if (s == "Bounds") return Bounds;
        if (s == "Binaries") return Binaries;
        if (s == "Generals") return Generals;
        if (s == "End") return None;
        return -1;
    };
    std::string acc;
    Section cur = None;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] == '\\') continue;
        // Trim.
        auto bgn = line.find_first_not_of(" \t\r");
        if (bgn == std::string::npos) continue;
        auto end = line.find_last_not_of(" \t\r");
        std::string t = line.substr(bgn, end - bgn + 1);
        int cls = classify(t);
        if (cls >= 0) {
            if (!acc.empty()) entries.push_back({cur, acc});
            acc.clear();
            cur = static_cast<Section>(cls);
            continue;
        }
        // Logical lines start with "name:" in the objective/constraint
        // sections and are standalone elsewhere.
        bool starts_entry = (cur == Bounds || cur == Binaries || cur == Generals) ||
                            t.find(':') != std::string::npos;
        if (starts_entry && !acc.empty()) {
            entries.push_back({cur, acc});
            acc.clear();
        }
        acc += (acc.empty() ? "" : " ") + t;
    }
    if (!acc.empty()) entries.push_back({cur, acc});

    auto parse_terms = [](const std::string& body, std::map<std::string, double>& out) {
        std::istringstream ts(body);
        std::string tok;
        double sign = 1.0;
        double coef = 1.0;
        bool have_coef = false;
        while (ts >> tok) {
            if (tok == "+") { sign = 1.0; continue; }
            if (tok == "-") { sign = -1.0; continue; }
            char* endp = nullptr;
            double v = std::strtod(tok.c_str(), &endp);
            if (endp && *endp == '\0') {
                coef = v;
                have_coef = true;
            } else {
                out[tok] += sign * (have_coef ? coef : 1.0);
                sign = 1.0;
                coef = 1.0;
                have_coef = false;
            }
        }
    };

    for (auto& [sec, body] : entries) {
        switch (sec) {
            case Objective: {
                auto colon = body.find(':');
                parse_terms(body.substr(colon + 1), lp.objective);
                break;
            }
            case Rows: {
                ParsedLp::Row row;
                auto colon = body.find(':');
                row.name = body.substr(0, colon);
                std::string rest = body.substr(colon + 1);
                std::size_t pos;
                if ((pos = rest.find("<=")) != std::string::npos) row.sense = Sense::LE;
                else if ((pos = rest.find(">=")) != std::string::npos) row.sense = Sense::GE;
                else { pos = rest.rfind('='); row.sense = Sense::EQ; }
                std::string lhs = rest.substr(0, pos);
                std::string rhs = rest.substr(pos + (row.sense == Sense::EQ ? 1 : 2));
                parse_terms(lhs, row.terms);
                row.rhs = std::strtod(rhs.c_str(), nullptr);
                lp.rows.push_back(std::move(row));
                break;
            }
            case Bounds: {
                // "lo <= name <= hi" or "name = v"
                std::istringstream bs(body);
                std::string a, b, c, d2, e;
                if (body.find("<=") != std::string::npos) {
                    bs >> a >> b >> c >> d2 >> e;
                    lp.bounds[c] = {std::strtod(a.c_str(), nullptr), std::strtod(e.c_str(), nullptr)};
                } else {
                    bs >> a >> b >> c;
                    double v = std::strtod(c.c_str(), nullptr);
                    lp.bounds[a] = {v, v};
                }
                break;
            }
            case Binaries: {
                std::istringstream vs(body);
                std::string name;
                while (vs >> name) lp.binaries.push_back(name);
                break;
            }
            case Generals: {
                std::istringstream vs(body);
                std::string name;
                while (vs >> name) lp.generals.push_back(name);
                break;
            }
            case None: break;
        }
    }
    for (const auto& name : lp.binaries) lp.var_names.push_back(name);
    for (const auto& name : lp.generals) lp.var_names.push_back(name);
    return lp;
}

}  // namespace qnt
