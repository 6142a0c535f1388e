// Feature standardization, mean imputation and one-hot encoding.
//
// Continuous features are standardized across the observed entries;
// missing entries map to 0 after standardization, which is equivalent to
// mean imputation. Categorical features are one-hot encoded; a category
// unseen at fit time maps to the all-zero indicator group.
#pragma once

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "survstack/csv.hpp"
#include "survstack/dataset.hpp"
#include "survstack/rng.hpp"

namespace survstack {

class PreprocessModel {
  public:
    struct ContinuousStats {
        double mean = 0.0;
        double sd = 1.0;
        bool zero_variance = false;
    };
    struct Column {
        std::string name;
        bool categorical = false;
        ContinuousStats stats;                 // when continuous
        std::vector<std::string> categories;   // when categorical, in first-appearance order
    };

    bool fitted() const { return fitted_; }
    const std::vector<Column>& columns() const { return columns_; }
    const std::vector<std::string>& warnings() const { return warnings_; }

    // Feature schema of the transformed matrix.
    std::vector<std::string> output_names() const {
        std::vector<std::string> names;
        for (const auto& col : columns_) {
            if (col.categorical)
                for (const auto& cat : col.categories)
                    names.push_back(col.name + "=" + cat);
            else
                names.push_back(col.name);
        }
        return names;
    }

    std::vector<FeatureKind> output_kinds() const {
        std::vector<FeatureKind> kinds;
        int group = 0;
        for (const auto& col : columns_) {
            if (col.categorical) {
                for (std::size_t k = 0; k < col.categories.size(); ++k)
                    kinds.push_back(FeatureKind{true, group});
                ++group;
            } else {
                kinds.push_back(FeatureKind{});
            }
        }
        return kinds;
    }

    friend PreprocessModel fit_preprocess(const RawTable& raw);
    friend std::vector<double> transform(const PreprocessModel& model,
                                         const RawTable& raw,
                                         std::size_t* out_n_features);

  private:
    std::vector<Column> columns_;
    std::vector<std::string> warnings_;
    bool fitted_ = false;
};

// Fit on the feature columns of a raw table (`time`/`event` are skipped
// when present).
inline PreprocessModel fit_preprocess(const RawTable& raw) {
    PreprocessModel model;
    for (std::size_t j = 0; j < raw.n_columns(); ++j) {
        const std::string& name = raw.column_names[j];
        if (name == "time" || name == "event") continue;
        PreprocessModel::Column col;
        col.name = name;
        bool any_observed = false;
        bool all_numeric = true;
        for (const auto& row : raw.rows) {
            const std::string& cell = row[j];
            if (cell.empty()) continue;
            any_observed = true;
            if (!detail::parse_double(cell)) all_numeric = false;
        }
        if (!any_observed)
            throw std::runtime_error("feature '" + name + "' has zero observed entries");
        if (all_numeric) {
            double sum = 0.0, sum2 = 0.0;
            std::size_t count = 0;
            for (const auto& row : raw.rows) {
                auto v = detail::parse_double(row[j]);
                if (!v) continue;
                sum += *v;
                sum2 += *v * *v;
                ++count;
            }
            col.stats.mean = sum / static_cast<double>(count);
            double var = sum2 / static_cast<double>(count) - col.stats.mean * col.stats.mean;
            if (var < 1e-24) {
                col.stats.sd = 1.0;
                col.stats.zero_variance = true;
                model.warnings_.push_back("feature '" + name +
                                          "' has zero variance; sd set to 1");
            } else {
                // sample sd over observed entries
                double n = static_cast<double>(count);
                col.stats.sd = std::sqrt(std::max(var * n / std::max(n - 1.0, 1.0), 0.0));
            }
        } else {
            col.categorical = true;
            for (const auto& row : raw.rows) {
                const std::string& cell = row[j];
                if (cell.empty()) continue;
                bool seen = false;
                for (const auto& c : col.categories) seen = seen || (c == cell);
                if (!seen) col.categories.push_back(cell);
            }
        }
        model.columns_.push_back(std::move(col));
    }
    model.fitted_ = true;
    return model;
}

// Transform raw rows into a row-major numeric matrix matching the fitted
// schema. Returns the flat matrix; the width goes to *out_n_features.
inline std::vector<double> transform(const PreprocessModel& model,
                                     const RawTable& raw,
                                     std::size_t* out_n_features) {
    if (!model.fitted()) throw std::runtime_error("transform: model not fitted");
    // map fitted columns to table columns by name; all must be present
    std::vector<std::size_t> src(model.columns_.size());
    for (std::size_t c = 0; c < model.columns_.size(); ++c) {
        auto j = raw.column_index(model.columns_[c].name);
        if (!j)
            throw std::runtime_error("transform: schema mismatch, missing column '" +
                                     model.columns_[c].name + "'");
        src[c] = *j;
    }
    std::size_t width = 0;
    for (const auto& col : model.columns_)
        width += col.categorical ? col.categories.size() : 1;
    if (out_n_features) *out_n_features = width;

    std::vector<double> x;
    x.reserve(raw.n_rows() * width);
    for (const auto& row : raw.rows) {
        for (std::size_t c = 0; c < model.columns_.size(); ++c) {
            const auto& col = model.columns_[c];
            const std::string& cell = row[src[c]];
            if (col.categorical) {
                for (const auto& cat : col.categories)
                    x.push_back(cell == cat ? 1.0 : 0.0);
            } else if (cell.empty()) {
                x.push_back(0.0);  // mean imputation post-standardization
            } else {
                auto v = detail::parse_double(cell);
                if (!v)
                    throw std::runtime_error("transform: non-numeric value '" + cell +
                                             "' in continuous column '" + col.name + "'");
                x.push_back((*v - col.stats.mean) / col.stats.sd);
            }
        }
    }
    return x;
}

// Fit + transform a raw survival table into a ready-to-model dataset.
inline SurvivalDataset preprocess_survival_table(const RawTable& raw,
                                                 PreprocessModel& model_out) {
    auto time_col = raw.column_index("time");
    auto event_col = raw.column_index("event");
    if (!time_col || !event_col)
        throw std::runtime_error("dataset requires `time` and `event` columns");
    model_out = fit_preprocess(raw);
    std::size_t width = 0;
    auto x = transform(model_out, raw, &width);
    std::vector<double> times(raw.n_rows());
    std::vector<char> events(raw.n_rows());
    for (std::size_t i = 0; i < raw.n_rows(); ++i) {
        auto t = detail::parse_double(raw.rows[i][*time_col]);
        if (!t || !(*t >= 0.0) || !std::isfinite(*t))
            throw std::runtime_error("invalid time at data row " + std::to_string(i));
        auto e = detail::parse_double(raw.rows[i][*event_col]);
        if (!e || (*e != 0.0 && *e != 1.0))
            throw std::runtime_error("invalid event indicator at data row " +
                                     std::to_string(i));
        times[i] = *t;
        events[i] = (*e == 1.0);
    }
    SurvivalDataset data(std::move(x), width, std::move(times), std::move(events),
                         model_out.output_names(), model_out.output_kinds());
    data.require_events();
    return data;
}

// Reproducible train/test split, stratified by the event indicator so
// that prevalence stays comparable. Both sides must end up with at least
// one event; resampling is retried a bounded number of times.
inline std::pair<SurvivalDataset, SurvivalDataset> train_test_split(
    const SurvivalDataset& data, double test_fraction, std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw std::invalid_argument("train_test_split: test_fraction must be in (0,1)");
    data.require_events();

    std::vector<std::size_t> ev, cen;
    for (std::size_t i = 0; i < data.size(); ++i)
        (data.event(i) ? ev : cen).push_back(i);

    const std::size_t n = data.size();
    const auto total_test = static_cast<std::size_t>(
        std::llround(test_fraction * static_cast<double>(n)));
    // proportional allocation; remainder goes to the larger stratum
    auto n_test_ev = static_cast<std::size_t>(
        std::llround(test_fraction * static_cast<double>(ev.size())));
    n_test_ev = std::min(n_test_ev, total_test);
    std::size_t n_test_cen = total_test - n_test_ev;
    n_test_cen = std::min(n_test_cen, cen.size());

    Rng rng(seed);
    constexpr int kMaxRetries = 100;
    for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
        auto shuffle = [&](std::vector<std::size_t>& v) {
            for (std::size_t i = v.size(); i > 1; --i)
                std::swap(v[i - 1], v[rng.uniform_index(i)]);
        };
        shuffle(ev);
        shuffle(cen);
        std::vector<std::size_t> test_idx(ev.begin(),
                                          ev.begin() + static_cast<long>(n_test_ev));
        test_idx.insert(test_idx.end(), cen.begin(),
                        cen.begin() + static_cast<long>(n_test_cen));
        std::vector<std::size_t> train_idx(ev.begin() + static_cast<long>(n_test_ev),
                                           ev.end());
        train_idx.insert(train_idx.end(), cen.begin() + static_cast<long>(n_test_cen),
                         cen.end());
        std::sort(test_idx.begin(), test_idx.end());
        std::sort(train_idx.begin(), train_idx.end());
        auto train = data.subset(train_idx);
        auto test = data.subset(test_idx);
        if (train.n_events() >= 1 && test.n_events() >= 1) return {train, test};
    }
    throw std::runtime_error(
        "train_test_split: could not produce a split with events on both sides");
}

}  // namespace survstack
