#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "survstack/dataset.hpp"
#include "survstack/step_function.hpp"

namespace survstack {

namespace detail {

// Product-limit estimator over times with the given "event" marks.
// Knots are placed at distinct marked times only; censored records at a
// marked time remain in the risk set for that time (T_j >= t).
inline StepFunction product_limit(const std::vector<double>& times,
                                  const std::vector<char>& marks) {
    const std::size_t n = times.size();
    // counts of marked / total exits per distinct time
    std::map<double, std::pair<std::size_t, std::size_t>> at;  // time -> (d, exits)
    for (std::size_t i = 0; i < n; ++i) {
        auto& a = at[times[i]];
        a.first += (marks[i] != 0);
        a.second += 1;
    }
    std::vector<double> knots, values;
    double s = 1.0;
    std::size_t n_risk = n;
    for (const auto& [t, dc] : at) {
        const auto [d, exits] = dc;
        if (d > 0 && n_risk > 0) {
            s *= 1.0 - static_cast<double>(d) / static_cast<double>(n_risk);
            knots.push_back(t);
            values.push_back(s);
        }
        n_risk -= exits;
    }
    return StepFunction(std::move(knots), std::move(values), 1.0);
}

}  // namespace detail

// Kaplan-Meier estimator of S(t) = P(T > t).
inline StepFunction kaplan_meier(const SurvivalDataset& data) {
    return detail::product_limit(data.times(), data.events());
}

// Kaplan-Meier estimator of the censoring distribution G(t): the event
// indicator is flipped, so censorings count as "events". Used for
// inverse-probability-of-censoring weights in the metrics module.
inline StepFunction censoring_kaplan_meier(const SurvivalDataset& data) {
    std::vector<char> flipped(data.size());
    for (std::size_t i = 0; i < data.size(); ++i)
        flipped[i] = data.event(i) ? 0 : 1;
    return detail::product_limit(data.times(), flipped);
}

// Nelson-Aalen cumulative hazard estimator (used as an oracle for the
// Breslow baseline at beta = 0).
inline StepFunction nelson_aalen(const SurvivalDataset& data) {
    std::map<double, std::pair<std::size_t, std::size_t>> at;
    for (std::size_t i = 0; i < data.size(); ++i) {
        auto& a = at[data.time(i)];
        a.first += data.event(i);
        a.second += 1;
    }
    std::vector<double> knots, values;
    double h = 0.0;
    std::size_t n_risk = data.size();
    for (const auto& [t, dc] : at) {
        const auto [d, exits] = dc;
        if (d > 0 && n_risk > 0) {
            h += static_cast<double>(d) / static_cast<double>(n_risk);
            knots.push_back(t);
            values.push_back(h);
        }
        n_risk -= exits;
    }
    return StepFunction(std::move(knots), std::move(values), 0.0);
}

}  // namespace survstack
