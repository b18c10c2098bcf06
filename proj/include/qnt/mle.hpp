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
#include <limits>
#include <span>
#include <vector>

#include "qnt/errors.hpp"
#include "qnt/sim.hpp"

namespace qnt {

/// Point estimate with boundary bookkeeping: estimators clamp into [0, 1]
/// instead of failing when finite-sample noise pushes a radicand outside the
/// physical range.
struct Estimate {
    double value = 0.0;
    bool clamped_low = false;
    bool clamped_high = false;

    bool clamped() const { return clamped_low || clamped_high; }
};

namespace detail {

inline Estimate clamp01_sqrt(double radicand) {
    Estimate e;
    if (radicand <= 0.0) {
        e.value = 0.0;
        e.clamped_low = radicand < 0.0;
        return e;
    }
    if (radicand >= 1.0) {
        e.value = 1.0;
        e.clamped_high = radicand > 1.0;
        return e;
    }
    e.value = std::sqrt(radicand);
    return e;
}

/// Log-likelihood of one record under effective parameter W; the three
/// non-phi00 outcomes share one probability, so only the n00 split matters.
inline double record_loglik(double shots, double n00, double w_effective) {
    double p00 = (1.0 + 3.0 * w_effective) / 4.0;
    double rest = (1.0 - w_effective) / 4.0;
    double ll = 0.0;
    if (n00 > 0.0) {
        if (p00 <= 0.0) return -std::numeric_limits<double>::infinity();
        ll += n00 * std::log(p00);
    }
    if (shots - n00 > 0.0) {
        if (rest <= 0.0) return -std::numeric_limits<double>::infinity();
        ll += (shots - n00) * std::log(rest);
    }
    return ll;
}

}  // namespace detail

/// Plug-in estimate of the effective path parameter: (4 N00 - N) / (3N).
inline double effective_parameter_estimate(double shots, double n00) {
    return (4.0 * n00 - shots) / (3.0 * shots);
}

/// Closed-form MLE for a directly monitored link: w = sqrt((4 N00 - N)/(3N)),
/// clamped into [0, 1] with flags when the radicand leaves the range.
inline Estimate mle_direct_counts(double shots, double n00) {
    if (shots <= 0.0) throw Error(ErrorCode::ConfigError, "record has no shots");
    return detail::clamp01_sqrt(effective_parameter_estimate(shots, n00));
}

inline Estimate mle_direct(const MeasurementRecord& rec) {
    if (rec.path.link_sequence.size() != 1)
        throw Error(ErrorCode::ConfigError, "direct estimator needs a one-link record");
    return mle_direct_counts(static_cast<double>(rec.shots), rec.n00());
}

/// Joint estimates from one monitor's records: the monitor's own link and one
/// entry per two-link indirect path through it.
struct IndirectEstimates {
    Estimate monitor_link;
    std::vector<std::pair<int, Estimate>> targets;  // (link index, estimate)
};

struct IndirectCounts {
    double shots = 0.0;
    double n00 = 0.0;
};

/// Closed-form joint MLE for star-style monitoring: a direct record on the
/// monitor's link i plus indirect records on paths {i, j}. The stationarity
/// condition in u = w_i^2 is the quadratic a u^2 + b u + c = 0 with
///   c = sum_j [ 24 N00_j k_j / (1 + 3 k_j) - 8 (N_j - N00_j) k_j / (1 - k_j) ]
///   a = -3c - 24 N00_i - 24 (N_i - N00_i)
///   b = 24 N00_i - 8 (N_i - N00_i) + 2c
/// with k_j = (4 N00_j - N_j)/(3 N_j); the root with u in [0, 1] wins, ties
/// resolved by the joint likelihood. Each w_j is then sqrt(k_j)/w_i.
inline IndirectEstimates mle_indirect_counts(IndirectCounts direct,
                                             std::span<const IndirectCounts> indirect) {
    if (direct.shots <= 0.0) throw Error(ErrorCode::ConfigError, "direct record has no shots");

    std::vector<double> k(indirect.size());
    std::vector<bool> k_clamped(indirect.size(), false);
    for (std::size_t j = 0; j < indirect.size(); ++j) {
        if (indirect[j].shots <= 0.0)
            throw Error(ErrorCode::ConfigError, "indirect record has no shots");
        double kj = effective_parameter_estimate(indirect[j].shots, indirect[j].n00);
        if (kj < 0.0) {
            kj = 0.0;
            k_clamped[j] = true;
        }
        k[j] = kj;
    }

    // Each indirect record contributes 24 N00 k/(1 + 3k) - 8 (N - N00) k/(1 - k)
    // to c. With k = (4 N00 - N)/(3N) one has 1 + 3k = 4 N00/N and
    // 1 - k = 4 (N - N00)/(3N), so both fractions equal 6 N k and every
    // contribution cancels exactly; evaluating the raw fractions instead
    // leaves ~1e-13 of noise that the root extraction amplifies.
    const double c = 0.0;
    const double n_i = direct.shots, n00_i = direct.n00;
    const double a = -3.0 * c - 24.0 * n_i;
    const double b = 24.0 * n00_i - 8.0 * (n_i - n00_i) + 2.0 * c;
    double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) disc = 0.0;
    double sq = std::sqrt(disc);

    // Candidate values of u = w_i^2, kept if within [0, 1] (up to noise).
    std::vector<double> candidates;
    for (double u : {(-b + sq) / (2.0 * a), (-b - sq) / (2.0 * a)}) {
        if (u > -1e-9 && u < 1.0 + 1e-9) candidates.push_back(std::clamp(u, 0.0, 1.0));
    }
    bool forced_clamp = false;
    if (candidates.empty()) {
        // No admissible root: the optimum sits on the boundary of [0, 1].
        candidates = {0.0, 1.0};
        forced_clamp = true;
    }

    auto joint_loglik = [&](double u) {
        double wi = std::sqrt(u);
        double ll = detail::record_loglik(n_i, n00_i, u);
        for (std::size_t j = 0; j < indirect.size(); ++j) {
            double wj = (wi > 0.0) ? std::min(1.0, std::sqrt(k[j]) / wi) : (k[j] > 0.0 ? 1.0 : 0.0);
            ll += detail::record_loglik(indirect[j].shots, indirect[j].n00, u * wj * wj);
        }
        return ll;
    };

    double best_u = candidates.front();
    double best_ll = joint_loglik(best_u);
    for (std::size_t ci = 1; ci < candidates.size(); ++ci) {
        double ll = joint_loglik(candidates[ci]);
        if (ll > best_ll + 1e-12) {
            best_ll = ll;
            best_u = candidates[ci];
        }
    }
    // c is analytically zero whenever the k_j come from the same counts, so a
    // root this small is quadratic noise around the boundary solution.
    if (best_u <= 1e-12) best_u = 0.0;

    IndirectEstimates out;
    out.monitor_link = detail::clamp01_sqrt(best_u);
    out.monitor_link.clamped_low = out.monitor_link.clamped_low || (forced_clamp && best_u == 0.0);
    out.monitor_link.clamped_high = out.monitor_link.clamped_high || (forced_clamp && best_u == 1.0);
    double wi = out.monitor_link.value;

    for (std::size_t j = 0; j < indirect.size(); ++j) {
        if (wi == 0.0 && k[j] > 0.0)
            throw Error(ErrorCode::DegenerateLikelihood,
                        "monitor link estimated at zero; companion parameters unidentifiable");
        Estimate e;
        if (k[j] == 0.0) {
            e.value = 0.0;
            e.clamped_low = k_clamped[j];
        } else {
            double wj = std::sqrt(k[j]) / wi;
            if (wj > 1.0) {
                e.value = 1.0;
                e.clamped_high = true;
            } else {
                e.value = wj;
            }
        }
        out.targets.emplace_back(static_cast<int>(j), e);
    }
    return out;
}

/// Record-based wrapper: `direct_rec` spans only the monitor's link, every
/// indirect record spans {that link, target}. Target indices in the result
/// are the actual link indices from the records.
inline IndirectEstimates mle_indirect(const MeasurementRecord& direct_rec,
                                      std::span<const MeasurementRecord> indirect_recs) {
    if (direct_rec.path.link_sequence.size() != 1)
        throw Error(ErrorCode::ConfigError, "monitor record must span exactly its own link");
    int own = direct_rec.path.link_sequence[0];
    std::vector<IndirectCounts> counts;
    std::vector<int> targets;
    for (const MeasurementRecord& rec : indirect_recs) {
        if (rec.path.link_sequence.size() != 2 || rec.path.link_sequence[0] != own)
            throw Error(ErrorCode::ConfigError,
                        "indirect record must traverse the monitor link first");
        counts.push_back({static_cast<double>(rec.shots), rec.n00()});
        targets.push_back(rec.path.link_sequence[1]);
    }
    IndirectEstimates est =
        mle_indirect_counts({static_cast<double>(direct_rec.shots), direct_rec.n00()}, counts);
    for (std::size_t j = 0; j < est.targets.size(); ++j) est.targets[j].first = targets[j];
    return est;
}

// ---------------------------------------------------------------------------
// Numeric likelihood oracle
// ---------------------------------------------------------------------------

namespace detail {

/// Deterministic multi-round grid refinement of a unimodal-enough 1-D
/// function on [lo, hi]; resolution after the rounds is ~1e-8.
template <typename F>
double grid_maximize(F&& f, double lo, double hi) {
    double best_x = lo;
    double best_v = -std::numeric_limits<double>::infinity();
    double step = (hi - lo) / 256.0;
    for (int round = 0; round < 5; ++round) {
        for (double x = lo; x <= hi + 1e-15; x += step) {
            double xx = std::min(x, hi);
            double v = f(xx);
            if (v > best_v) {
                best_v = v;
                best_x = xx;
            }
        }
        lo = std::max(0.0, best_x - 2.0 * step);
        hi = std::min(1.0, best_x + 2.0 * step);
        step /= 16.0;
    }
    return best_x;
}

}  // namespace detail

/// Maximizes the joint multinomial log-likelihood by dense grid refinement,
/// sharing no algebra with the closed forms above. Validation only: slow.
inline IndirectEstimates mle_numeric_oracle(IndirectCounts direct,
                                            std::span<const IndirectCounts> indirect) {
    auto profile = [&](double wi) {
        double ll = detail::record_loglik(direct.shots, direct.n00, wi * wi);
        for (const IndirectCounts& rec : indirect) {
            double best = detail::grid_maximize(
                [&](double wj) { return detail::record_loglik(rec.shots, rec.n00,
                                                              wi * wi * wj * wj); },
                0.0, 1.0);
            ll += detail::record_loglik(rec.shots, rec.n00, wi * wi * best * best);
        }
        return ll;
    };
    double wi = detail::grid_maximize(profile, 0.0, 1.0);

    IndirectEstimates out;
    out.monitor_link.value = wi;
    out.monitor_link.clamped_low = wi == 0.0;
    out.monitor_link.clamped_high = wi == 1.0;
    int idx = 0;
    for (const IndirectCounts& rec : indirect) {
        double wj = detail::grid_maximize(
            [&](double w) { return detail::record_loglik(rec.shots, rec.n00, wi * wi * w * w); },
            0.0, 1.0);
        Estimate e;
        e.value = wj;
        e.clamped_low = wj == 0.0;
        e.clamped_high = wj == 1.0;
        out.targets.emplace_back(idx++, e);
    }
    return out;
}

/// Direct-only variant of the oracle.
inline Estimate mle_numeric_oracle_direct(double shots, double n00) {
    double w = detail::grid_maximize(
        [&](double x) { return detail::record_loglik(shots, n00, x * x); }, 0.0, 1.0);
    Estimate e;
    e.value = w;
    e.clamped_low = w == 0.0;
    e.clamped_high = w == 1.0;
    return e;
}

}  // namespace qnt
