// ControlBurn-style feature selection: grow a forest of shallow trees
// (bagged, incremental-depth boosting), weight the trees with a LASSO
// solved by cyclic coordinate descent, and keep the features appearing
// in trees with nonzero weight. One-hot groups are selected or dropped
// atomically.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <set>
#include <stdexcept>
#include <vector>

#include "survstack/dataset.hpp"
#include "survstack/rng.hpp"

namespace survstack {

struct ForestConfig {
    int n_trees = 100;
    int max_depth = 3;
    double bag_fraction = 0.8;
    double shrinkage = 0.1;  // boosting step between trees
    std::size_t min_leaf = 5;
    std::uint64_t seed = 0;
};

struct TreeNode {
    int feature = -1;  // -1 for leaves
    double threshold = 0.0;
    int left = -1, right = -1;
    double value = 0.0;
};

struct SelectionTree {
    std::vector<TreeNode> nodes;  // node 0 is the root
    std::vector<std::size_t> feature_set;
    std::vector<std::size_t> split_counts;  // parallel to feature_set
    std::vector<double> predictions;        // centered over the selection set
    int depth = 0;

    double predict(std::span<const double> x) const {
        int idx = 0;
        while (nodes[static_cast<std::size_t>(idx)].feature >= 0) {
            const auto& node = nodes[static_cast<std::size_t>(idx)];
            idx = x[static_cast<std::size_t>(node.feature)] <= node.threshold
                      ? node.left
                      : node.right;
        }
        return nodes[static_cast<std::size_t>(idx)].value;
    }
};

struct Forest {
    std::vector<SelectionTree> trees;
    std::size_t n_rows = 0;
    std::size_t n_features = 0;
};

namespace detail {

struct TreeBuilder {
    const double* x;
    std::size_t n_features;
    const std::vector<double>* target;
    std::size_t min_leaf;
    SelectionTree* tree;

    // exhaustive best split by squared-error gain; candidate thresholds
    // are midpoints between adjacent distinct values of the rows in the
    // node; ties broken toward the lowest feature index / threshold
    int build(std::vector<std::size_t>& rows, int depth_left) {
        double sum = 0.0;
        for (std::size_t i : rows) sum += (*target)[i];
        const double mean = sum / static_cast<double>(rows.size());

        int best_feature = -1;
        double best_threshold = 0.0, best_gain = 1e-12;
        if (depth_left > 0 && rows.size() >= 2 * min_leaf) {
            std::vector<std::pair<double, double>> vals(rows.size());
            for (std::size_t j = 0; j < n_features; ++j) {
                for (std::size_t k = 0; k < rows.size(); ++k)
                    vals[k] = {x[rows[k] * n_features + j], (*target)[rows[k]]};
                std::sort(vals.begin(), vals.end());
                double left_sum = 0.0;
                const double total = sum;
                for (std::size_t k = 0; k + 1 < vals.size(); ++k) {
                    left_sum += vals[k].second;
                    if (vals[k].first == vals[k + 1].first) continue;
                    const std::size_t nl = k + 1, nr = vals.size() - nl;
                    if (nl < min_leaf || nr < min_leaf) continue;
                    const double right_sum = total - left_sum;
                    const double gain =
                        left_sum * left_sum / static_cast<double>(nl) +
                        right_sum * right_sum / static_cast<double>(nr) -
                        total * total / static_cast<double>(vals.size());
                    if (gain > best_gain) {
                        best_gain = gain;
                        best_feature = static_cast<int>(j);
                        best_threshold = 0.5 * (vals[k].first + vals[k + 1].first);
                    }
                }
            }
        }

        const int idx = static_cast<int>(tree->nodes.size());
        tree->nodes.emplace_back();
        if (best_feature < 0) {
            tree->nodes[static_cast<std::size_t>(idx)].value = mean;
            return idx;
        }
        std::vector<std::size_t> left_rows, right_rows;
        for (std::size_t i : rows) {
            if (x[i * n_features + static_cast<std::size_t>(best_feature)] <=
                best_threshold)
                left_rows.push_back(i);
            else
                right_rows.push_back(i);
        }
        tree->nodes[static_cast<std::size_t>(idx)].feature = best_feature;
        tree->nodes[static_cast<std::size_t>(idx)].threshold = best_threshold;
        const int l = build(left_rows, depth_left - 1);
        tree->nodes[static_cast<std::size_t>(idx)].left = l;
        const int r = build(right_rows, depth_left - 1);
        tree->nodes[static_cast<std::size_t>(idx)].right = r;
        return idx;
    }
};

}  // namespace detail

inline Forest grow_forest(const std::vector<double>& x_row_major, std::size_t n_features,
                          const std::vector<char>& labels, const ForestConfig& config) {
    const std::size_t n = labels.size();
    if (x_row_major.size() != n * n_features)
        throw std::invalid_argument("grow_forest: size mismatch");
    {
        std::size_t pos = 0;
        for (char y : labels) pos += (y != 0);
        if (pos == 0 || pos == n)
            throw std::invalid_argument("grow_forest: labels must contain both classes");
    }
    double ybar = 0.0;
    for (char y : labels) ybar += (y != 0);
    ybar /= static_cast<double>(n);

    Forest forest;
    forest.n_rows = n;
    forest.n_features = n_features;

    std::vector<double> boosted(n, 0.0);  // running ensemble prediction
    std::vector<double> residual(n);
    Rng rng(config.seed);

    // incremental-depth schedule: shallow trees first
    std::vector<int> depths;
    for (int t = 0; t < config.n_trees; ++t)
        depths.push_back(1 + t * config.max_depth / config.n_trees);

    const auto bag_size = std::max<std::size_t>(
        static_cast<std::size_t>(config.bag_fraction * static_cast<double>(n)), 2);
    std::vector<std::size_t> order(n);
    for (int t = 0; t < config.n_trees; ++t) {
        for (std::size_t i = 0; i < n; ++i)
            residual[i] = ((labels[i] ? 1.0 : 0.0) - ybar) - boosted[i];
        std::iota(order.begin(), order.end(), 0);
        for (std::size_t i = n; i > 1; --i)
            std::swap(order[i - 1], order[rng.uniform_index(i)]);
        std::vector<std::size_t> bag(order.begin(), order.begin() + static_cast<long>(bag_size));

        SelectionTree tree;
        tree.depth = depths[static_cast<std::size_t>(t)];
        detail::TreeBuilder builder{x_row_major.data(), n_features, &residual,
                                    config.min_leaf, &tree};
        builder.build(bag, tree.depth);

        // feature set and split counts
        std::vector<std::size_t> counts(n_features, 0);
        for (const auto& node : tree.nodes)
            if (node.feature >= 0) ++counts[static_cast<std::size_t>(node.feature)];
        for (std::size_t j = 0; j < n_features; ++j)
            if (counts[j] > 0) {
                tree.feature_set.push_back(j);
                tree.split_counts.push_back(counts[j]);
            }

        // full-set predictions, centered
        tree.predictions.resize(n);
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            tree.predictions[i] = tree.predict(
                std::span<const double>(x_row_major.data() + i * n_features, n_features));
            mean += tree.predictions[i];
        }
        mean /= static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            boosted[i] += config.shrinkage * tree.predictions[i];
            tree.predictions[i] -= mean;
        }
        forest.trees.push_back(std::move(tree));
    }
    return forest;
}

// max lambda: any larger value zeroes all weights
inline double lasso_lambda_max(const Forest& forest, const std::vector<char>& labels) {
    const std::size_t n = forest.n_rows;
    double ybar = 0.0;
    for (char y : labels) ybar += (y != 0);
    ybar /= static_cast<double>(n);
    double lmax = 0.0;
    for (const auto& tree : forest.trees) {
        double dot = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            dot += tree.predictions[i] * ((labels[i] ? 1.0 : 0.0) - ybar);
        lmax = std::max(lmax, std::abs(dot) / static_cast<double>(n));
    }
    return lmax;
}

// min_w (1/2m) ||y_c - P w||^2 + lambda ||w||_1 by cyclic coordinate
// descent with soft thresholding; P's columns are the trees' centered
// prediction vectors.
inline double lasso_objective(const Forest& forest, const std::vector<char>& labels,
                              const std::vector<double>& w, double lambda);

// objective_trace, when given, records the objective value after every
// coordinate-descent sweep.
inline std::vector<double> lasso_prune(const Forest& forest, const std::vector<char>& labels,
                                       double lambda,
                                       const std::vector<double>* warm_start = nullptr,
                                       std::vector<double>* objective_trace = nullptr) {
    if (lambda < 0.0) throw std::invalid_argument("lasso_prune: lambda must be >= 0");
    const std::size_t n = forest.n_rows;
    const std::size_t p = forest.trees.size();
    if (labels.size() != n) throw std::invalid_argument("lasso_prune: label size mismatch");

    double ybar = 0.0;
    for (char y : labels) ybar += (y != 0);
    ybar /= static_cast<double>(n);

    const double m = static_cast<double>(n);
    std::vector<double> col_norm(p);  // ||P_j||^2 / m
    for (std::size_t j = 0; j < p; ++j) {
        double s = 0.0;
        for (double v : forest.trees[j].predictions) s += v * v;
        col_norm[j] = s / m;
    }

    std::vector<double> w(p, 0.0);
    std::vector<double> residual(n);
    for (std::size_t i = 0; i < n; ++i) residual[i] = (labels[i] ? 1.0 : 0.0) - ybar;
    if (warm_start && warm_start->size() == p) {
        w = *warm_start;
        for (std::size_t j = 0; j < p; ++j)
            if (w[j] != 0.0)
                for (std::size_t i = 0; i < n; ++i)
                    residual[i] -= forest.trees[j].predictions[i] * w[j];
    }

    constexpr double kTol = 1e-7;
    constexpr int kMaxSweeps = 10000;
    double max_update = 0.0;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        max_update = 0.0;
        for (std::size_t j = 0; j < p; ++j) {
            if (col_norm[j] < 1e-18) continue;  // constant tree, stays at 0
            const auto& pj = forest.trees[j].predictions;
            double rho = 0.0;
            for (std::size_t i = 0; i < n; ++i) rho += pj[i] * residual[i];
            rho = rho / m + col_norm[j] * w[j];
            double w_new;
            if (rho > lambda) w_new = (rho - lambda) / col_norm[j];
            else if (rho < -lambda) w_new = (rho + lambda) / col_norm[j];
            else w_new = 0.0;
            const double delta = w_new - w[j];
            if (delta != 0.0) {
                for (std::size_t i = 0; i < n; ++i) residual[i] -= pj[i] * delta;
                w[j] = w_new;
                max_update = std::max(max_update, std::abs(delta));
            }
        }
        if (objective_trace)
            objective_trace->push_back(lasso_objective(forest, labels, w, lambda));
        if (max_update < kTol) return w;
    }
    throw std::runtime_error("lasso_prune: no convergence, final max update " +
                             std::to_string(max_update));
}

inline double lasso_objective(const Forest& forest, const std::vector<char>& labels,
                              const std::vector<double>& w, double lambda) {
    const std::size_t n = forest.n_rows;
    double ybar = 0.0;
    for (char y : labels) ybar += (y != 0);
    ybar /= static_cast<double>(n);
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = (labels[i] ? 1.0 : 0.0) - ybar;
        for (std::size_t j = 0; j < forest.trees.size(); ++j)
            r -= forest.trees[j].predictions[i] * w[j];
        sse += r * r;
    }
    double l1 = 0.0;
    for (double v : w) l1 += std::abs(v);
    return 0.5 * sse / static_cast<double>(n) + lambda * l1;
}

struct SelectionResult {
    std::vector<std::size_t> selected_features;  // expanded column indices
    std::vector<double> tree_weights;
    double lambda = 0.0;
    std::vector<std::pair<std::size_t, double>> group_scores;  // (group rep, score)
};

struct SelectConfig {
    ForestConfig forest;
    int max_bisection_steps = 40;
};

// Fixed-size selection: bisection on lambda for the largest lambda whose
// surviving feature-group union has size >= k, then truncation to
// exactly k groups by aggregate |weight| * split-count score.
inline SelectionResult select_features(const std::vector<double>& x_row_major,
                                       std::size_t n_features,
                                       const std::vector<char>& labels,
                                       const std::vector<FeatureKind>& kinds, std::size_t k,
                                       const SelectConfig& config) {
    if (k < 1 || k > n_features)
        throw std::invalid_argument("select_features: k out of range");
    Forest forest = grow_forest(x_row_major, n_features, labels, config.forest);

    // group id per column: one-hot groups collapse; continuous features
    // are their own group
    std::vector<long> group_of(n_features);
    long next_group = 0;
    {
        std::vector<long> onehot_map;
        for (std::size_t j = 0; j < n_features; ++j) {
            if (j < kinds.size() && kinds[j].one_hot) {
                const auto g = static_cast<std::size_t>(kinds[j].group);
                if (onehot_map.size() <= g) onehot_map.resize(g + 1, -1);
                if (onehot_map[g] < 0) onehot_map[g] = next_group++;
                group_of[j] = onehot_map[g];
            } else {
                group_of[j] = next_group++;
            }
        }
    }

    auto groups_at = [&](const std::vector<double>& w) {
        std::set<long> groups;
        for (std::size_t t = 0; t < forest.trees.size(); ++t)
            if (w[t] != 0.0)
                for (std::size_t j : forest.trees[t].feature_set)
                    groups.insert(group_of[j]);
        return groups;
    };

    auto w0 = lasso_prune(forest, labels, 0.0);
    if (groups_at(w0).size() < k)
        throw std::runtime_error(
            "select_features: forest covers fewer than k features even at lambda=0; "
            "increase n_trees");

    const double lmax = lasso_lambda_max(forest, labels);
    double lo = 0.0, hi = lmax;  // lo always reaches >= k groups
    std::vector<double> w_lo = w0;
    for (int step = 0; step < config.max_bisection_steps; ++step) {
        const double mid = 0.5 * (lo + hi);
        auto w_mid = lasso_prune(forest, labels, mid, &w_lo);
        if (groups_at(w_mid).size() >= k) {
            lo = mid;
            w_lo = w_mid;
        } else {
            hi = mid;
        }
    }

    // aggregate group scores: sum over trees of |weight| * split count
    std::map<long, double> score;
    for (std::size_t t = 0; t < forest.trees.size(); ++t) {
        if (w_lo[t] == 0.0) continue;
        const auto& tree = forest.trees[t];
        for (std::size_t s = 0; s < tree.feature_set.size(); ++s)
            score[group_of[tree.feature_set[s]]] +=
                std::abs(w_lo[t]) * static_cast<double>(tree.split_counts[s]);
    }
    std::vector<std::pair<long, double>> ranked(score.begin(), score.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (ranked.size() > k) ranked.resize(k);

    SelectionResult result;
    result.lambda = lo;
    result.tree_weights = w_lo;
    std::set<long> kept;
    for (const auto& [g, s] : ranked) {
        kept.insert(g);
        result.group_scores.emplace_back(static_cast<std::size_t>(g), s);
    }
    for (std::size_t j = 0; j < n_features; ++j)
        if (kept.count(group_of[j])) result.selected_features.push_back(j);
    return result;
}

// Fixed-horizon classification proxy: label 1 if the event occurred by
// the horizon, 0 if follow-up exceeds it; records censored before the
// horizon are dropped (the known limitation this proxy inherits).
inline std::pair<std::vector<std::size_t>, std::vector<char>> fixed_horizon_labels(
    const SurvivalDataset& data, double horizon) {
    if (!(horizon > 0.0))
        throw std::invalid_argument("fixed_horizon_labels: horizon must be > 0");
    std::vector<std::size_t> kept;
    std::vector<char> labels;
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (data.event(i) && data.time(i) <= horizon) {
            kept.push_back(i);
            labels.push_back(1);
        } else if (data.time(i) > horizon) {
            kept.push_back(i);
            labels.push_back(0);
        }
    }
    if (kept.empty())
        throw std::runtime_error("fixed_horizon_labels: all rows dropped at horizon " +
                                 std::to_string(horizon));
    return {std::move(kept), std::move(labels)};
}

}  // namespace survstack
