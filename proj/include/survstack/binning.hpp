#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace survstack {

// Quantile-binned view of a numeric matrix. Features with fewer distinct
// values than max_bins get one bin per value; binary features therefore
// pass through as 2 bins. Bin i covers (cuts[i-1], cuts[i]]; values
// outside the observed range clamp to the end bins.
class BinnedMatrix {
  public:
    static BinnedMatrix build(const double* x, std::size_t n_rows, std::size_t n_features,
                              int max_bins) {
        if (max_bins < 2) throw std::invalid_argument("bin_features: max_bins must be >= 2");
        if (n_rows == 0 || n_features == 0)
            throw std::invalid_argument("bin_features: empty matrix");
        BinnedMatrix bm;
        bm.n_rows_ = n_rows;
        bm.n_features_ = n_features;
        bm.cuts_.resize(n_features);
        bm.observed_min_.resize(n_features);
        bm.observed_max_.resize(n_features);
        bm.bins_.resize(n_rows * n_features);
        std::vector<double> col(n_rows);
        for (std::size_t j = 0; j < n_features; ++j) {
            for (std::size_t i = 0; i < n_rows; ++i) col[i] = x[i * n_features + j];
            std::sort(col.begin(), col.end());
            bm.observed_min_[j] = col.front();
            bm.observed_max_[j] = col.back();
            bm.cuts_[j] = make_cuts(col, max_bins);
            for (std::size_t i = 0; i < n_rows; ++i)
                bm.bins_[i * n_features + j] =
                    bin_index(bm.cuts_[j], x[i * n_features + j]);
        }
        return bm;
    }

    static std::uint16_t bin_index(const std::vector<double>& cuts, double v) {
        auto it = std::lower_bound(cuts.begin(), cuts.end(), v);
        return static_cast<std::uint16_t>(it - cuts.begin());
    }

    std::size_t n_rows() const { return n_rows_; }
    std::size_t n_features() const { return n_features_; }
    std::size_t n_bins(std::size_t j) const { return cuts_[j].size() + 1; }
    const std::vector<double>& cuts(std::size_t j) const { return cuts_[j]; }
    double observed_min(std::size_t j) const { return observed_min_[j]; }
    double observed_max(std::size_t j) const { return observed_max_[j]; }

    std::uint16_t bin(std::size_t i, std::size_t j) const {
        return bins_[i * n_features_ + j];
    }

    // (low, high] span of a bin, using observed extremes at the ends
    std::pair<double, double> bin_span(std::size_t j, std::size_t b) const {
        double lo = b == 0 ? observed_min_[j] : cuts_[j][b - 1];
        double hi = b == cuts_[j].size() ? observed_max_[j] : cuts_[j][b];
        return {lo, hi};
    }

  private:
    static std::vector<double> make_cuts(const std::vector<double>& sorted, int max_bins) {
        std::vector<double> distinct(sorted);
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        std::vector<double> cuts;
        if (distinct.size() <= static_cast<std::size_t>(max_bins)) {
            for (std::size_t k = 1; k < distinct.size(); ++k)
                cuts.push_back(0.5 * (distinct[k - 1] + distinct[k]));
            return cuts;
        }
        const std::size_t n = sorted.size();
        for (int q = 1; q < max_bins; ++q) {
            std::size_t k = static_cast<std::size_t>(
                static_cast<double>(q) * static_cast<double>(n) /
                static_cast<double>(max_bins));
            k = std::min(std::max<std::size_t>(k, 1), n - 1);
            double cut = 0.5 * (sorted[k - 1] + sorted[k]);
            if (cuts.empty() || cut > cuts.back()) cuts.push_back(cut);
        }
        return cuts;
    }

    std::size_t n_rows_ = 0;
    std::size_t n_features_ = 0;
    std::vector<std::vector<double>> cuts_;
    std::vector<double> observed_min_, observed_max_;
    std::vector<std::uint16_t> bins_;  // row-major
};

inline BinnedMatrix bin_features(const std::vector<double>& x_row_major,
                                 std::size_t n_features, int max_bins) {
    if (n_features == 0 || x_row_major.empty())
        throw std::invalid_argument("bin_features: empty matrix");
    return BinnedMatrix::build(x_row_major.data(), x_row_major.size() / n_features,
                               n_features, max_bins);
}

}  // namespace survstack
