// Time-dependent evaluation: cumulative/dynamic AUC and (integrated)
// Brier score with inverse-probability-of-censoring weights. The
// censoring distribution is estimated on the training set by default.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "survstack/dataset.hpp"
#include "survstack/estimators.hpp"
#include "survstack/step_function.hpp"

namespace survstack {

struct EvaluationReport {
    std::vector<double> grid;
    std::vector<double> auc_per_time;   // NaN where a time was omitted
    double mean_auc = 0.0;
    std::vector<double> brier_per_time;
    double integrated_brier = 0.0;
    std::string censoring_weight_source = "train";
    std::vector<std::string> warnings;
};

struct AucResult {
    std::vector<double> per_time;  // NaN for omitted times
    double mean_auc = 0.0;
    std::vector<std::string> warnings;
};

// Cumulative/dynamic AUC at each grid time. Cases at t are test records
// with T <= t and an event, weighted by 1/G(T-); controls are records
// with T > t. Ties in scores count 1/2. The mean aggregates over the
// grid weighted by the Kaplan-Meier event mass on the test set
// (event-weighted mean); set event_weighted_mean = false for the plain
// average over valid grid times.
inline AucResult cumulative_dynamic_auc(const SurvivalDataset& train,
                                        const SurvivalDataset& test,
                                        const std::vector<double>& risk_scores,
                                        const std::vector<double>& times,
                                        bool event_weighted_mean = true) {
    if (risk_scores.size() != test.size())
        throw std::invalid_argument("cumulative_dynamic_auc: score size mismatch");
    for (double s : risk_scores)
        if (!std::isfinite(s))
            throw std::invalid_argument("cumulative_dynamic_auc: non-finite score");
    const StepFunction G = censoring_kaplan_meier(train);

    AucResult out;
    out.per_time.assign(times.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double t = times[k];
        double num = 0.0, den_cases = 0.0;
        std::size_t n_cases = 0, n_controls = 0;
        for (std::size_t i = 0; i < test.size(); ++i)
            n_controls += (test.time(i) > t);
        for (std::size_t i = 0; i < test.size(); ++i) {
            if (!(test.time(i) <= t && test.event(i))) continue;
            ++n_cases;
            const double g = G.left_limit(test.time(i));
            if (g <= 0.0)
                throw std::runtime_error(
                    "cumulative_dynamic_auc: zero censoring weight at time " +
                    std::to_string(test.time(i)));
            const double w = 1.0 / g;
            den_cases += w;
            for (std::size_t j = 0; j < test.size(); ++j) {
                if (!(test.time(j) > t)) continue;
                if (risk_scores[i] > risk_scores[j]) num += w;
                else if (risk_scores[i] == risk_scores[j]) num += 0.5 * w;
            }
        }
        if (n_cases == 0 || n_controls == 0) {
            out.warnings.push_back("AUC omitted at t=" + std::to_string(t) +
                                   " (no cases or no controls)");
            continue;
        }
        out.per_time[k] = num / (den_cases * static_cast<double>(n_controls));
    }

    std::vector<std::size_t> valid;
    for (std::size_t k = 0; k < times.size(); ++k)
        if (std::isfinite(out.per_time[k])) valid.push_back(k);
    if (valid.empty())
        throw std::runtime_error("cumulative_dynamic_auc: no valid grid times");

    if (valid.size() == 1) {
        out.mean_auc = out.per_time[valid[0]];
    } else if (event_weighted_mean) {
        // integral of AUC against the KM event mass on the test set,
        // normalized by the mass inside the grid range
        const StepFunction S = kaplan_meier(test);
        double integral = 0.0, prev_s = 1.0, last_s = 1.0;
        for (std::size_t k : valid) {
            const double s = S(times[k]);
            integral += out.per_time[k] * (prev_s - s);
            prev_s = s;
            last_s = s;
        }
        if (last_s >= 1.0) {
            // no event mass inside the grid; fall back to the plain mean
            double acc = 0.0;
            for (std::size_t k : valid) acc += out.per_time[k];
            out.mean_auc = acc / static_cast<double>(valid.size());
        } else {
            out.mean_auc = integral / (1.0 - last_s);
        }
    } else {
        double acc = 0.0;
        for (std::size_t k : valid) acc += out.per_time[k];
        out.mean_auc = acc / static_cast<double>(valid.size());
    }
    return out;
}

// IPCW Brier score at time t:
//   BS(t) = 1/m * sum_i [ S_hat_i^2 * 1{T_i <= t, event} / G(T_i-)
//                       + (1 - S_hat_i)^2 * 1{T_i > t} / G(t) ]
// Records censored before t contribute 0.
inline double brier_score(const SurvivalDataset& train, const SurvivalDataset& test,
                          const std::vector<double>& predicted_survival, double t) {
    if (predicted_survival.size() != test.size())
        throw std::invalid_argument("brier_score: prediction size mismatch");
    const StepFunction G = censoring_kaplan_meier(train);
    double acc = 0.0;
    const double g_t = G(t);
    for (std::size_t i = 0; i < test.size(); ++i) {
        const double s = predicted_survival[i];
        if (!(s >= 0.0 && s <= 1.0))
            throw std::invalid_argument("brier_score: prediction outside [0,1]");
        if (test.time(i) <= t && test.event(i)) {
            const double g = G.left_limit(test.time(i));
            if (g <= 0.0)
                throw std::runtime_error("brier_score: zero censoring weight at time " +
                                         std::to_string(test.time(i)));
            acc += s * s / g;
        } else if (test.time(i) > t) {
            if (g_t <= 0.0)
                throw std::runtime_error("brier_score: zero censoring weight at time " +
                                         std::to_string(t));
            acc += (1.0 - s) * (1.0 - s) / g_t;
        }
    }
    return acc / static_cast<double>(test.size());
}

// Trapezoidal integral of BS(t) over [range_lo, range_hi] divided by the
// range length. Each curve must share the grid of the first curve.
inline double integrated_brier(const SurvivalDataset& train, const SurvivalDataset& test,
                               const std::vector<SurvivalCurve>& curves, double range_lo,
                               double range_hi) {
    if (!(range_hi > range_lo))
        throw std::invalid_argument("integrated_brier: empty range");
    if (curves.size() != test.size())
        throw std::invalid_argument("integrated_brier: curve count mismatch");
    const auto& grid = curves.front().times;
    for (const auto& c : curves)
        if (c.times != grid)
            throw std::invalid_argument("integrated_brier: curves must share one grid");

    std::vector<double> ts, bs;
    std::vector<double> preds(test.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (grid[k] < range_lo || grid[k] > range_hi) continue;
        for (std::size_t i = 0; i < test.size(); ++i)
            preds[i] = curves[i].probabilities[k];
        ts.push_back(grid[k]);
        bs.push_back(brier_score(train, test, preds, grid[k]));
    }
    if (ts.size() < 2)
        throw std::invalid_argument("integrated_brier: need >= 2 grid times in range");
    double integral = 0.0;
    for (std::size_t k = 1; k < ts.size(); ++k)
        integral += 0.5 * (bs[k] + bs[k - 1]) * (ts[k] - ts[k - 1]);
    return integral / (ts.back() - ts.front());
}

// Default grid: equally spaced times between the 10th and 90th
// percentile of observed test event times.
inline std::vector<double> default_metric_grid(const SurvivalDataset& test,
                                               std::size_t n_points = 21) {
    std::vector<double> ev;
    for (std::size_t i = 0; i < test.size(); ++i)
        if (test.event(i)) ev.push_back(test.time(i));
    if (ev.empty()) throw std::runtime_error("default_metric_grid: no events in test set");
    std::sort(ev.begin(), ev.end());
    auto pct = [&](double q) {
        double pos = q * static_cast<double>(ev.size() - 1);
        auto lo = static_cast<std::size_t>(pos);
        auto hi = std::min(lo + 1, ev.size() - 1);
        double frac = pos - static_cast<double>(lo);
        return ev[lo] * (1.0 - frac) + ev[hi] * frac;
    };
    const double lo = pct(0.10), hi = pct(0.90);
    if (!(hi > lo)) return {lo};
    std::vector<double> grid(n_points);
    for (std::size_t k = 0; k < n_points; ++k)
        grid[k] = lo + (hi - lo) * static_cast<double>(k) /
                           static_cast<double>(n_points - 1);
    return grid;
}

}  // namespace survstack
