#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "survstack/feature_select.hpp"
#include "survstack/rng.hpp"

using namespace survstack;

namespace {

// labels = 1{x3 > 0} over d standard-normal features
struct IndicatorData {
    std::vector<double> x;
    std::vector<char> labels;
    std::size_t d;
};

IndicatorData indicator_x3(std::size_t n, std::size_t d, std::uint64_t seed) {
    Rng rng(seed);
    IndicatorData out;
    out.d = d;
    out.x.resize(n * d);
    out.labels.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) out.x[i * d + j] = rng.normal();
        out.labels[i] = out.x[i * d + 2] > 0.0;
    }
    return out;
}

}  // namespace

TEST_CASE("single stump splits on the dominant feature") {
    auto data = indicator_x3(400, 4, 1);
    ForestConfig fc;
    fc.n_trees = 1;
    fc.max_depth = 1;
    auto forest = grow_forest(data.x, data.d, data.labels, fc);
    REQUIRE(forest.trees.size() == 1);
    REQUIRE(forest.trees[0].feature_set.size() == 1);
    CHECK(forest.trees[0].feature_set[0] == 2);
    CHECK(std::abs(forest.trees[0].nodes[0].threshold) < 0.2);
}

TEST_CASE("every depth-1 tree splits on feature 3 when it determines the label") {
    auto data = indicator_x3(500, 5, 2);
    ForestConfig fc;
    fc.n_trees = 20;
    fc.max_depth = 1;
    for (const auto& tree : grow_forest(data.x, data.d, data.labels, fc).trees) {
        REQUIRE(tree.feature_set.size() == 1);
        CHECK(tree.feature_set[0] == 2);
    }
}

TEST_CASE("grow_forest rejects single-class labels and size mismatches") {
    std::vector<double> x = {1, 2, 3, 4};
    CHECK_THROWS_AS(grow_forest(x, 1, {1, 1, 1, 1}, ForestConfig{}),
                    std::invalid_argument);
    CHECK_THROWS_AS(grow_forest(x, 1, {1, 0, 1}, ForestConfig{}), std::invalid_argument);
}

TEST_CASE("lambda=0 with a single perfect tree matches univariate least squares") {
    auto data = indicator_x3(300, 3, 3);
    ForestConfig fc;
    fc.n_trees = 1;
    fc.max_depth = 1;
    auto forest = grow_forest(data.x, data.d, data.labels, fc);

    // closed-form univariate regression of centered y on the centered column
    const std::size_t n = forest.n_rows;
    double ybar = 0.0;
    for (char y : data.labels) ybar += (y != 0);
    ybar /= static_cast<double>(n);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double p = forest.trees[0].predictions[i];
        num += p * ((data.labels[i] ? 1.0 : 0.0) - ybar);
        den += p * p;
    }
    const double oracle = num / den;
    auto w = lasso_prune(forest, data.labels, 0.0);
    REQUIRE(w.size() == 1);
    CHECK(w[0] == Catch::Approx(oracle).margin(1e-6));
}

TEST_CASE("lambda at or above lambda_max zeroes every weight") {
    auto data = indicator_x3(200, 3, 4);
    ForestConfig fc;
    fc.n_trees = 15;
    auto forest = grow_forest(data.x, data.d, data.labels, fc);
    const double lmax = lasso_lambda_max(forest, data.labels);
    for (double lambda : {lmax, 2.0 * lmax})
        for (double w : lasso_prune(forest, data.labels, lambda)) CHECK(w == 0.0);
    CHECK_THROWS_AS(lasso_prune(forest, data.labels, -0.5), std::invalid_argument);
}

TEST_CASE("coordinate-descent objective is non-increasing each sweep") {
    auto data = indicator_x3(250, 4, 5);
    ForestConfig fc;
    fc.n_trees = 25;
    auto forest = grow_forest(data.x, data.d, data.labels, fc);
    const double lmax = lasso_lambda_max(forest, data.labels);
    for (double lambda : {0.0, 0.2 * lmax, 0.6 * lmax}) {
        std::vector<double> trace;
        (void)lasso_prune(forest, data.labels, lambda, nullptr, &trace);
        REQUIRE(!trace.empty());
        for (std::size_t s = 1; s < trace.size(); ++s)
            CHECK(trace[s] <= trace[s - 1] + 1e-12);
    }
}

TEST_CASE("duplicate trees share the single-tree weight") {
    auto data = indicator_x3(300, 3, 6);
    ForestConfig fc;
    fc.n_trees = 1;
    fc.max_depth = 1;
    auto forest = grow_forest(data.x, data.d, data.labels, fc);
    const double lambda = 0.05 * lasso_lambda_max(forest, data.labels);
    auto w_single = lasso_prune(forest, data.labels, lambda);

    Forest doubled = forest;
    doubled.trees.push_back(forest.trees[0]);
    auto w_pair = lasso_prune(doubled, data.labels, lambda);
    CHECK(w_pair[0] + w_pair[1] == Catch::Approx(w_single[0]).margin(1e-5));
}

TEST_CASE("k=1 on labels determined by x3 selects exactly feature 3") {
    auto data = indicator_x3(400, 5, 7);
    SelectConfig sc;
    sc.forest.n_trees = 40;
    auto result = select_features(data.x, data.d, data.labels,
                                  std::vector<FeatureKind>(data.d), 1, sc);
    REQUIRE(result.selected_features.size() == 1);
    CHECK(result.selected_features[0] == 2);
}

TEST_CASE("k = feature count returns every feature the forest uses") {
    auto data = indicator_x3(300, 3, 8);
    SelectConfig sc;
    sc.forest.n_trees = 60;
    sc.forest.max_depth = 3;
    auto result = select_features(data.x, data.d, data.labels,
                                  std::vector<FeatureKind>(data.d), 3, sc);
    CHECK(result.selected_features == std::vector<std::size_t>({0, 1, 2}));
    CHECK_THROWS_AS(select_features(data.x, data.d, data.labels,
                                    std::vector<FeatureKind>(data.d), 0, sc),
                    std::invalid_argument);
    CHECK_THROWS_AS(select_features(data.x, data.d, data.labels,
                                    std::vector<FeatureKind>(data.d), 4, sc),
                    std::invalid_argument);
}

TEST_CASE("one-hot groups are kept or dropped atomically") {
    // columns 0,1 one-hot encode a 3-level factor (reference dropped);
    // the label depends on the factor, so selecting k=1 group keeps both
    Rng rng(9);
    const std::size_t n = 500, d = 3;
    std::vector<double> x(n * d);
    std::vector<char> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto level = rng.uniform_index(3);
        x[i * d] = level == 1 ? 1.0 : 0.0;
        x[i * d + 1] = level == 2 ? 1.0 : 0.0;
        x[i * d + 2] = rng.normal();
        labels[i] = rng.bernoulli(level == 0 ? 0.9 : (level == 1 ? 0.5 : 0.1));
    }
    std::vector<FeatureKind> kinds(d);
    kinds[0] = {true, 0};
    kinds[1] = {true, 0};
    SelectConfig sc;
    sc.forest.n_trees = 40;
    auto result = select_features(x, d, labels, kinds, 1, sc);
    CHECK(result.selected_features == std::vector<std::size_t>({0, 1}));
}

TEST_CASE("selection is invariant to feature permutation up to relabeling") {
    auto data = indicator_x3(400, 4, 10);
    SelectConfig sc;
    sc.forest.n_trees = 30;
    auto base = select_features(data.x, data.d, data.labels,
                                std::vector<FeatureKind>(data.d), 2, sc);

    // swap columns 0 and 2
    std::vector<double> swapped = data.x;
    for (std::size_t i = 0; i < 400; ++i)
        std::swap(swapped[i * data.d], swapped[i * data.d + 2]);
    auto perm = select_features(swapped, data.d, data.labels,
                                std::vector<FeatureKind>(data.d), 2, sc);

    auto relabel = [](std::size_t j) { return j == 0 ? 2 : (j == 2 ? std::size_t{0} : j); };
    std::set<std::size_t> base_set(base.selected_features.begin(),
                                   base.selected_features.end());
    std::set<std::size_t> perm_set;
    for (std::size_t j : perm.selected_features) perm_set.insert(relabel(j));
    CHECK(base_set == perm_set);
}

TEST_CASE("fixed-horizon labels follow the keep/drop rules") {
    std::vector<double> times = {3.0, 7.0, 2.0, 5.0};
    std::vector<char> events = {1, 0, 0, 1};
    SurvivalDataset data(std::vector<double>(4, 0.0), 1, times, events, {"x1"});
    auto [kept, labels] = fixed_horizon_labels(data, 5.0);
    // (T=3, event) -> label 1; (T=7, censored) -> label 0;
    // (T=2, censored) -> dropped; (T=5, event) -> label 1
    REQUIRE(kept == std::vector<std::size_t>({0, 1, 3}));
    CHECK(labels == std::vector<char>({1, 0, 1}));

    CHECK_THROWS_AS(fixed_horizon_labels(data, 0.0), std::invalid_argument);
    SurvivalDataset all_dropped(std::vector<double>(1, 0.0), 1, {2.0}, {0}, {"x1"});
    CHECK_THROWS_AS(fixed_horizon_labels(all_dropped, 5.0), std::runtime_error);
}
