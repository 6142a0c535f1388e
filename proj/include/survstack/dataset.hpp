#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace survstack {

// One subject: covariate vector, follow-up time, event indicator.
// event = true means the event of interest occurred at `time`;
// event = false means right-censoring at `time`.
struct SurvivalRecord {
    std::vector<double> covariates;
    double time = 0.0;
    bool event = false;
};

// Per-feature tag. Members of the same one-hot group share a group id and
// are selected or dropped atomically during feature selection.
struct FeatureKind {
    bool one_hot = false;
    int group = -1;  // >= 0 for one-hot group members
};

class SurvivalDataset {
  public:
    SurvivalDataset() = default;

    SurvivalDataset(std::vector<double> x_row_major, std::size_t n_features,
                    std::vector<double> time, std::vector<char> event,
                    std::vector<std::string> feature_names,
                    std::vector<FeatureKind> feature_kinds = {})
        : x_(std::move(x_row_major)),
          d_(n_features),
          time_(std::move(time)),
          event_(std::move(event)),
          feature_names_(std::move(feature_names)),
          feature_kinds_(std::move(feature_kinds)) {
        if (feature_kinds_.empty()) feature_kinds_.resize(d_);
        const std::size_t n = time_.size();
        if (event_.size() != n || x_.size() != n * d_ ||
            feature_names_.size() != d_ || feature_kinds_.size() != d_)
            throw std::invalid_argument("SurvivalDataset: inconsistent sizes");
        for (std::size_t i = 0; i < n; ++i) {
            if (!(time_[i] >= 0.0) || !std::isfinite(time_[i]))
                throw std::invalid_argument(
                    "SurvivalDataset: non-finite or negative time at row " +
                    std::to_string(i));
        }
        for (double v : x_)
            if (!std::isfinite(v))
                throw std::invalid_argument("SurvivalDataset: non-finite covariate");
    }

    std::size_t size() const { return time_.size(); }
    std::size_t n_features() const { return d_; }

    std::span<const double> row(std::size_t i) const {
        return std::span<const double>(x_.data() + i * d_, d_);
    }
    double time(std::size_t i) const { return time_[i]; }
    bool event(std::size_t i) const { return event_[i] != 0; }

    const std::vector<double>& x() const { return x_; }
    const std::vector<double>& times() const { return time_; }
    const std::vector<char>& events() const { return event_; }
    const std::vector<std::string>& feature_names() const { return feature_names_; }
    const std::vector<FeatureKind>& feature_kinds() const { return feature_kinds_; }

    std::size_t n_events() const {
        std::size_t k = 0;
        for (char e : event_) k += (e != 0);
        return k;
    }
    std::size_t n_censored() const { return size() - n_events(); }
    double event_prevalence() const {
        return size() == 0 ? 0.0
                           : static_cast<double>(n_events()) / static_cast<double>(size());
    }

    // All fitting operations require at least one observed event.
    void require_events() const {
        if (n_events() == 0)
            throw std::invalid_argument("degenerate dataset: no observed events");
    }

    SurvivalDataset subset(const std::vector<std::size_t>& idx) const {
        std::vector<double> x;
        x.reserve(idx.size() * d_);
        std::vector<double> t;
        std::vector<char> e;
        for (std::size_t i : idx) {
            auto r = row(i);
            x.insert(x.end(), r.begin(), r.end());
            t.push_back(time_[i]);
            e.push_back(event_[i]);
        }
        return SurvivalDataset(std::move(x), d_, std::move(t), std::move(e),
                               feature_names_, feature_kinds_);
    }

    // Keep only the given feature columns (in the given order).
    SurvivalDataset select_columns(const std::vector<std::size_t>& cols) const {
        std::vector<double> x;
        x.reserve(size() * cols.size());
        std::vector<std::string> names;
        std::vector<FeatureKind> kinds;
        for (std::size_t j : cols) {
            if (j >= d_) throw std::out_of_range("select_columns: bad index");
            names.push_back(feature_names_[j]);
            kinds.push_back(feature_kinds_[j]);
        }
        for (std::size_t i = 0; i < size(); ++i) {
            auto r = row(i);
            for (std::size_t j : cols) x.push_back(r[j]);
        }
        return SurvivalDataset(std::move(x), cols.size(), time_, event_,
                               std::move(names), std::move(kinds));
    }

    // Distinct event times, ascending.
    std::vector<double> distinct_event_times() const {
        std::vector<double> t;
        for (std::size_t i = 0; i < size(); ++i)
            if (event(i)) t.push_back(time_[i]);
        std::sort(t.begin(), t.end());
        t.erase(std::unique(t.begin(), t.end()), t.end());
        return t;
    }

  private:
    std::vector<double> x_;  // row-major, size n * d
    std::size_t d_ = 0;
    std::vector<double> time_;
    std::vector<char> event_;
    std::vector<std::string> feature_names_;
    std::vector<FeatureKind> feature_kinds_;
};

// R(t) = { j : T_j >= t }, regardless of the event indicator.
inline std::vector<std::size_t> risk_set(const SurvivalDataset& data, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("risk_set: t must be >= 0");
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < data.size(); ++i)
        if (data.time(i) >= t) idx.push_back(i);
    return idx;
}

}  // namespace survstack
