// Survival stacking with majority-class subsampling.
//
// For each distinct event time t (ascending): every record with an event
// at t contributes a positive row (X || t, 1); every record with T > t is
// kept as a negative row (X || t, 0) independently with probability gamma.
// The time feature is the last column and is never standardized.
#pragma once

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "survstack/csv.hpp"
#include "survstack/dataset.hpp"
#include "survstack/rng.hpp"

namespace survstack {

struct StackingConfig {
    double gamma = 0.01;  // subsampling ratio in (0, 1]
    std::uint64_t seed = 0;
};

struct StackedRow {
    std::size_t source_record;  // index into the source dataset
    double risk_time;           // the event time defining the risk set
};

class StackedDataset {
  public:
    StackedDataset(std::vector<double> x_row_major, std::size_t n_features,
                   std::vector<char> labels, std::vector<StackedRow> provenance,
                   std::vector<std::string> feature_names)
        : x_(std::move(x_row_major)),
          d_(n_features),
          labels_(std::move(labels)),
          provenance_(std::move(provenance)),
          feature_names_(std::move(feature_names)) {
        if (labels_.size() * d_ != x_.size() || provenance_.size() != labels_.size())
            throw std::invalid_argument("StackedDataset: inconsistent sizes");
    }

    std::size_t size() const { return labels_.size(); }
    // feature count including the trailing time feature
    std::size_t n_features() const { return d_; }

    std::span<const double> row(std::size_t i) const {
        return std::span<const double>(x_.data() + i * d_, d_);
    }
    bool label(std::size_t i) const { return labels_[i] != 0; }
    const StackedRow& provenance(std::size_t i) const { return provenance_[i]; }

    const std::vector<double>& x() const { return x_; }
    const std::vector<char>& labels() const { return labels_; }
    const std::vector<std::string>& feature_names() const { return feature_names_; }

    std::size_t n_positives() const {
        std::size_t k = 0;
        for (char l : labels_) k += (l != 0);
        return k;
    }

  private:
    std::vector<double> x_;  // row-major, d columns, time feature last
    std::size_t d_;
    std::vector<char> labels_;
    std::vector<StackedRow> provenance_;
    std::vector<std::string> feature_names_;  // source names + "stack_time"
};

inline StackedDataset stack(const SurvivalDataset& data, const StackingConfig& config) {
    if (!(config.gamma > 0.0 && config.gamma <= 1.0))
        throw std::invalid_argument("stack: gamma must be in (0, 1]");
    data.require_events();

    const std::size_t d = data.n_features();
    const auto event_times = data.distinct_event_times();

    std::vector<double> x;
    std::vector<char> labels;
    std::vector<StackedRow> prov;
    Rng base(config.seed);

    auto push_row = [&](std::size_t i, double t, bool label) {
        auto r = data.row(i);
        x.insert(x.end(), r.begin(), r.end());
        x.push_back(t);
        labels.push_back(label);
        prov.push_back(StackedRow{i, t});
    };

    for (std::size_t k = 0; k < event_times.size(); ++k) {
        const double t = event_times[k];
        for (std::size_t i = 0; i < data.size(); ++i)
            if (data.event(i) && data.time(i) == t) push_row(i, t, true);
        // per-event-time RNG substream: output is reproducible regardless
        // of how the loop is scheduled
        Rng rng = base.split(k);
        for (std::size_t j = 0; j < data.size(); ++j)
            if (data.time(j) > t && rng.bernoulli(config.gamma)) push_row(j, t, false);
    }

    auto names = data.feature_names();
    names.push_back("stack_time");
    return StackedDataset(std::move(x), d + 1, std::move(labels), std::move(prov),
                          std::move(names));
}

// Row-count planning: positives are exact, negatives are an expectation.
struct StackedSize {
    std::size_t positives = 0;
    double expected_negatives = 0.0;
};

inline StackedSize expected_size(const SurvivalDataset& data, double gamma) {
    StackedSize out;
    out.positives = data.n_events();
    for (double t : data.distinct_event_times()) {
        std::size_t at_risk_after = 0;
        for (std::size_t j = 0; j < data.size(); ++j) at_risk_after += (data.time(j) > t);
        out.expected_negatives += gamma * static_cast<double>(at_risk_after);
    }
    return out;
}

inline void write_stacked_csv(std::ostream& out, const StackedDataset& stacked) {
    for (std::size_t j = 0; j + 1 < stacked.n_features(); ++j)
        out << stacked.feature_names()[j] << ',';
    out << "stack_time,label\n";
    for (std::size_t i = 0; i < stacked.size(); ++i) {
        for (double v : stacked.row(i)) out << format_double(v) << ',';
        out << (stacked.label(i) ? 1 : 0) << '\n';
    }
}

}  // namespace survstack
