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
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qnt/errors.hpp"
#include "qnt/linalg.hpp"
#include "qnt/network.hpp"

namespace qnt {

/// Quantum Fisher information of a Werner state about its own mixing
/// parameter W: 3 / ((1 + 3W)(1 - W)).
inline double werner_state_qfi(double w_effective) {
    if (w_effective < 0.0 || w_effective >= 1.0)
        throw Error(ErrorCode::DomainError,
                    "effective Werner parameter must lie in [0, 1), got " +
                        std::to_string(w_effective));
    return 3.0 / ((1.0 + 3.0 * w_effective) * (1.0 - w_effective));
}

/// Diagonal QFI contribution of directly monitoring a link with parameter w:
/// 12 w^2 / ((1 + 3 w^2)(1 - w^2)). Strictly increasing on (0, 1).
inline double direct_qfi(double w) {
    if (w < 0.0 || w >= 1.0)
        throw Error(ErrorCode::DomainError,
                    "link Werner parameter must lie in [0, 1), got " + std::to_string(w));
    return 12.0 * w * w / ((1.0 + 3.0 * w * w) * (1.0 - w * w));
}

/// Two-link indirect contribution in the closed form the star optimality
/// proofs are built on: 12 w_m^2 w_t^4 / ((1 + 3 w_m^2 w_t^2)(1 - w_m^2 w_t^2)),
/// where w_m is the monitor's own link and w_t the target.
inline double lemma_indirect_qfi(double w_monitor, double w_target) {
    double prod = w_monitor * w_monitor * w_target * w_target;
    if (w_monitor < 0.0 || w_target < 0.0 || prod >= 1.0)
        throw Error(ErrorCode::DomainError, "weights must lie in [0, 1)");
    return 12.0 * w_monitor * w_monitor * std::pow(w_target, 4) /
           ((1.0 + 3.0 * prod) * (1.0 - prod));
}

/// How the indirect contribution of a probe path is scored.
enum class IndirectMode {
    /// Cross-sensitivity term of the path information matrix between the
    /// target link i and the monitor-incident link j:
    /// 12 w_i w_j (prod_{l!=i} w_l^2)(prod_{l!=j} w_l^2) / ((1+3W)(1-W)).
    /// The indices coincide on one-link paths, where this reduces to the
    /// direct contribution.
    CrossForm,
    /// The two-link closed form used by the star optimality proofs. Arity is
    /// fixed at exactly two links.
    LemmaForm,
    /// Diagonal QFI of the target parameter obtained by differentiating the
    /// effective path parameter W = prod w^2: (dW/dw_t)^2 * qfi(W). Defined
    /// for paths of any length; equals direct_qfi on one-link paths.
    ChainRule,
};

inline const char* indirect_mode_name(IndirectMode m) {
    switch (m) {
        case IndirectMode::CrossForm: return "cross";
        case IndirectMode::LemmaForm: return "lemma";
        case IndirectMode::ChainRule: return "chain";
    }
    return "?";
}

inline IndirectMode indirect_mode_from_name(const std::string& s) {
    if (s == "cross") return IndirectMode::CrossForm;
    if (s == "lemma") return IndirectMode::LemmaForm;
    if (s == "chain") return IndirectMode::ChainRule;
    throw Error(ErrorCode::ConfigError, "unknown indirect mode '" + s + "'");
}

/// Indirect QFI of the link at `target` within a probe path described by its
/// link weights, under the chosen mode.
inline double indirect_qfi(std::span<const double> path_weights, std::size_t target,
                           IndirectMode mode) {
    if (path_weights.empty() || target >= path_weights.size())
        throw Error(ErrorCode::ConfigError, "target position outside path");
    double prod = 1.0;
    for (double w : path_weights) {
        if (w < 0.0 || w >= 1.0)
            throw Error(ErrorCode::DomainError, "path weights must lie in [0, 1)");
        prod *= w * w;
    }
    if (prod >= 1.0) throw Error(ErrorCode::DomainError, "path product reached 1");

    switch (mode) {
        case IndirectMode::LemmaForm: {
            if (path_weights.size() != 2)
                throw Error(ErrorCode::ModeArityMismatch,
                            "lemma form needs exactly two links, got " +
                                std::to_string(path_weights.size()));
            double w_target = path_weights[target];
            double w_other = path_weights[1 - target];
            return lemma_indirect_qfi(w_other, w_target);
        }
        case IndirectMode::ChainRule: {
            double wt = path_weights[target];
            double rest = 1.0;
            for (std::size_t l = 0; l < path_weights.size(); ++l)
                if (l != target) rest *= path_weights[l] * path_weights[l];
            double sensitivity = 2.0 * wt * rest;  // dW/dw_target
            return sensitivity * sensitivity * werner_state_qfi(prod);
        }
        case IndirectMode::CrossForm: {
            std::size_t j = (target == 0) ? (path_weights.size() > 1 ? 1 : 0) : 0;
            double wi = path_weights[target];
            double wj = path_weights[j];
            double prod_not_i = 1.0, prod_not_j = 1.0;
            for (std::size_t l = 0; l < path_weights.size(); ++l) {
                if (l != target) prod_not_i *= path_weights[l] * path_weights[l];
                if (l != j) prod_not_j *= path_weights[l] * path_weights[l];
            }
            return 12.0 * wi * wj * prod_not_i * prod_not_j /
                   ((1.0 + 3.0 * prod) * (1.0 - prod));
        }
    }
    throw Error(ErrorCode::ConfigError, "unreachable indirect mode");
}

// ---------------------------------------------------------------------------
// QFIM assembly
// ---------------------------------------------------------------------------

/// One probe: a routing path measured `sample_count` times. The per-parameter
/// sensitivities are the derivatives of the effective path parameter with
/// respect to each traversed link.
struct ProbeContribution {
    MonitorPath path;
    long long sample_count = 1;
    double effective_w = 1.0;                          // prod of squared weights
    std::vector<std::pair<int, double>> sensitivities; // (link index, dW/dw_l)
};

inline ProbeContribution make_probe(const Network& net, const MonitorPath& path,
                                    long long sample_count = 1) {
    if (sample_count < 1)
        throw Error(ErrorCode::ConfigError, "sample count must be positive");
    ProbeContribution probe;
    probe.path = path;
    probe.sample_count = sample_count;
    probe.effective_w = path_product(net, path);
    for (std::size_t pos = 0; pos < path.link_sequence.size(); ++pos) {
        int li = path.link_sequence[pos];
        double rest = 1.0;
        for (std::size_t other = 0; other < path.link_sequence.size(); ++other)
            if (other != pos) {
                double w = net.werner(path.link_sequence[other]);
                rest *= w * w;
            }
        probe.sensitivities.emplace_back(li, 2.0 * net.werner(li) * rest);
    }
    return probe;
}

/// Symmetric information matrix over a set of link parameters, together with
/// the probes that produced it. Additive across probe sets.
struct QfimModel {
    std::vector<int> param_links;  // sorted link indices
    SymMatrix matrix;              // indexed by position within param_links
    std::vector<ProbeContribution> provenance;

    int param_position(int link) const {
        auto it = std::lower_bound(param_links.begin(), param_links.end(), link);
        if (it == param_links.end() || *it != link)
            throw Error(ErrorCode::ConfigError,
                        "link " + std::to_string(link) + " is not a model parameter");
        return static_cast<int>(it - param_links.begin());
    }
};

/// Entry-wise sum of the rank-one blocks contributed by each probe:
/// F_ab += N * (dW/dw_a)(dW/dw_b) * qfi(W) for links a, b on the probe path.
inline QfimModel assemble_qfim(std::span<const ProbeContribution> probes) {
    if (probes.empty()) throw Error(ErrorCode::EmptyProbeSet, "no probes to assemble");

    QfimModel model;
    for (const ProbeContribution& p : probes)
        for (const auto& [link, s] : p.sensitivities) {
            (void)s;
            model.param_links.push_back(link);
        }
    std::sort(model.param_links.begin(), model.param_links.end());
    model.param_links.erase(std::unique(model.param_links.begin(), model.param_links.end()),
                            model.param_links.end());

    const std::size_t n = model.param_links.size();
    model.matrix = SymMatrix(n);
    for (const ProbeContribution& p : probes) {
        double f = werner_state_qfi(p.effective_w) * static_cast<double>(p.sample_count);
        for (const auto& [la, sa] : p.sensitivities) {
            int ia = model.param_position(la);
            for (const auto& [lb, sb] : p.sensitivities) {
                int ib = model.param_position(lb);
                model.matrix.at(static_cast<std::size_t>(ia), static_cast<std::size_t>(ib)) +=
                    f * sa * sb;
            }
        }
    }
    model.provenance.assign(probes.begin(), probes.end());

    // Assembly noise guard: the matrix is a sum of PSD rank-one terms.
    EigenDecomposition ed = eigen_symmetric(model.matrix);
    if (!ed.values.empty() && ed.values.front() < -1e-10)
        throw Error(ErrorCode::DomainError,
                    "assembled QFIM lost positive semidefiniteness (min eigenvalue " +
                        std::to_string(ed.values.front()) + ")");
    return model;
}

struct QcrbResult {
    std::vector<int> param_links;
    std::vector<double> variance_bounds;  // diag of the inverse, per parameter
    double inverse_trace = 0.0;
};

/// Cramér–Rao variance lower bounds. Throws SingularQfim naming the links
/// spanning the null space when some parameter is not estimable.
inline QcrbResult qcrb(const QfimModel& model, double rel_tol = 1e-10) {
    const std::size_t n = model.param_links.size();
    EigenDecomposition ed = eigen_symmetric(model.matrix);
    double lmax = 0.0;
    for (double l : ed.values) lmax = std::max(lmax, std::fabs(l));
    double cutoff = rel_tol * std::max(lmax, 1.0);

    std::vector<int> null_links;
    for (std::size_t k = 0; k < n; ++k) {
        if (ed.values[k] > cutoff) continue;
        for (std::size_t r = 0; r < n; ++r)
            if (std::fabs(ed.vectors[r * n + k]) > 1e-8) null_links.push_back(model.param_links[r]);
    }
    if (!null_links.empty()) {
        std::sort(null_links.begin(), null_links.end());
        null_links.erase(std::unique(null_links.begin(), null_links.end()), null_links.end());
        std::string msg = "non-estimable link parameters:";
        for (int l : null_links) msg += " " + std::to_string(l);
        throw Error(ErrorCode::SingularQfim, msg, null_links);
    }

    QcrbResult out;
    out.param_links = model.param_links;
    out.variance_bounds.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k)
            s += ed.vectors[i * n + k] * ed.vectors[i * n + k] / ed.values[k];
        out.variance_bounds[i] = s;
        out.inverse_trace += s;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Spectral oracle
// ---------------------------------------------------------------------------

/// QFI of the two-qubit Werner state about W, computed from first principles:
/// eigendecompose the 4x4 density matrix and sum the symmetric-logarithmic-
/// derivative terms 2 |<k| drho |l>|^2 / (lambda_k + lambda_l). Serves as an
/// independent check of the rational closed forms above.
inline double werner_qfi_oracle(double w_effective) {
    if (w_effective < 0.0 || w_effective >= 1.0)
        throw Error(ErrorCode::DomainError, "oracle needs W in [0, 1)");

    // rho = W |phi+><phi+| + (1 - W) I/4 in the computational basis.
    SymMatrix rho(4), drho(4);
    const double half = 0.5;
    rho.at(0, 0) = w_effective * half + (1.0 - w_effective) * 0.25;
    rho.at(3, 3) = rho.at(0, 0);
    rho.at(0, 3) = rho.at(3, 0) = w_effective * half;
    rho.at(1, 1) = rho.at(2, 2) = (1.0 - w_effective) * 0.25;

    drho.at(0, 0) = half - 0.25;
    drho.at(3, 3) = half - 0.25;
    drho.at(0, 3) = drho.at(3, 0) = half;
    drho.at(1, 1) = drho.at(2, 2) = -0.25;

    EigenDecomposition ed = eigen_symmetric(rho);
    double fisher = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        for (std::size_t l = 0; l < 4; ++l) {
            double denom = ed.values[k] + ed.values[l];
            if (denom <= 1e-14) continue;
            // <v_k | drho | v_l>
            double elem = 0.0;
            for (std::size_t r = 0; r < 4; ++r)
                for (std::size_t c = 0; c < 4; ++c)
                    elem += ed.vectors[r * 4 + k] * drho.at(r, c) * ed.vectors[c * 4 + l];
            fisher += 2.0 * elem * elem / denom;
        }
    }
    return fisher;
}

}  // namespace qnt
