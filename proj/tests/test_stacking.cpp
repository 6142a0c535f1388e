#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>
#include <sstream>

#include "survstack/stacking.hpp"

using namespace survstack;

namespace {

SurvivalDataset three_records() {
    // (x1=0.5, T=1, event), (x2=-1, T=2, event), (x3=2, T=3, censored)
    return SurvivalDataset({0.5, -1.0, 2.0}, 1, {1.0, 2.0, 3.0}, {1, 1, 0}, {"x1"});
}

}  // namespace

TEST_CASE("gamma=1 hand enumeration of the 3-record dataset") {
    auto stacked = stack(three_records(), StackingConfig{1.0, 7});
    // t=1: positive x1, negatives x2 and x3; t=2: positive x2, negative x3
    REQUIRE(stacked.size() == 5);
    REQUIRE(stacked.n_features() == 2);

    const double expected[5][2] = {
        {0.5, 1.0}, {-1.0, 1.0}, {2.0, 1.0}, {-1.0, 2.0}, {2.0, 2.0}};
    const bool expected_label[5] = {true, false, false, true, false};
    const std::size_t expected_source[5] = {0, 1, 2, 1, 2};
    for (std::size_t i = 0; i < 5; ++i) {
        auto r = stacked.row(i);
        CHECK(r[0] == expected[i][0]);
        CHECK(r[1] == expected[i][1]);
        CHECK(stacked.label(i) == expected_label[i]);
        CHECK(stacked.provenance(i).source_record == expected_source[i]);
        CHECK(stacked.provenance(i).risk_time == expected[i][1]);
    }
    CHECK(stacked.feature_names().back() == "stack_time");
}

TEST_CASE("tiny gamma keeps only the positive rows") {
    for (std::uint64_t seed : {0ULL, 1ULL, 42ULL}) {
        auto stacked = stack(three_records(), StackingConfig{1e-12, seed});
        REQUIRE(stacked.size() == stacked.n_positives());
        CHECK(stacked.size() == 2);  // one row per event record
    }
}

TEST_CASE("single event record stacks to exactly one positive row") {
    SurvivalDataset data({1.5}, 1, {4.0}, {1}, {"x1"});
    auto stacked = stack(data, StackingConfig{1.0, 0});
    REQUIRE(stacked.size() == 1);
    CHECK(stacked.label(0));
    CHECK(stacked.row(0)[0] == 1.5);
    CHECK(stacked.row(0)[1] == 4.0);
}

TEST_CASE("expected_size hand counts") {
    auto data = three_records();
    auto s1 = expected_size(data, 1.0);
    CHECK(s1.positives == 2);
    CHECK(s1.expected_negatives == 3.0);

    auto s05 = expected_size(data, 0.5);
    CHECK(s05.positives == 2);
    CHECK(s05.expected_negatives == 1.5);

    SurvivalDataset one_event({0.0, 0.0, 0.0}, 1, {1.0, 5.0, 9.0}, {1, 0, 0}, {"x1"});
    auto s = expected_size(one_event, 0.25);
    CHECK(s.positives == 1);
    CHECK(s.expected_negatives == 0.25 * 2.0);  // two records beyond t=1
}

TEST_CASE("positives are invariant to gamma and seed") {
    Rng rng(11);
    const std::size_t n = 40;
    std::vector<double> x(n), times(n);
    std::vector<char> events(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = rng.normal();
        times[i] = rng.uniform(0.5, 10.0);
        events[i] = rng.bernoulli(0.7);
    }
    events[0] = 1;
    SurvivalDataset data(x, 1, times, events, {"x1"});

    auto collect_positives = [](const StackedDataset& s) {
        std::multiset<std::pair<std::size_t, double>> keys;
        for (std::size_t i = 0; i < s.size(); ++i)
            if (s.label(i))
                keys.insert({s.provenance(i).source_record, s.provenance(i).risk_time});
        return keys;
    };
    auto ref = collect_positives(stack(data, StackingConfig{1.0, 0}));
    for (double gamma : {0.01, 0.3, 1.0})
        for (std::uint64_t seed : {0ULL, 9ULL})
            CHECK(collect_positives(stack(data, StackingConfig{gamma, seed})) == ref);
}

TEST_CASE("label-1 rows per event time equal the event count at that time") {
    // includes ties: two events at t=2
    SurvivalDataset data({0.1, 0.2, 0.3, 0.4, 0.5}, 1, {2.0, 2.0, 3.0, 5.0, 7.0},
                         {1, 1, 1, 0, 1}, {"x1"});
    auto stacked = stack(data, StackingConfig{0.5, 3});
    std::map<double, std::size_t> positives_at;
    for (std::size_t i = 0; i < stacked.size(); ++i)
        if (stacked.label(i)) ++positives_at[stacked.provenance(i).risk_time];
    CHECK(positives_at[2.0] == 2);
    CHECK(positives_at[3.0] == 1);
    CHECK(positives_at[7.0] == 1);
    CHECK(positives_at.size() == 3);
}

TEST_CASE("gamma=1 row count matches the risk-set sum and times are event times") {
    Rng rng(21);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t n = 2 + rng.uniform_index(10);
        std::vector<double> x(n), times(n);
        std::vector<char> events(n);
        bool any = false;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = rng.normal();
            times[i] = 1.0 + rng.uniform_index(6);  // force some ties
            events[i] = rng.bernoulli(0.6);
            any = any || events[i];
        }
        if (!any) events[0] = 1;
        SurvivalDataset data(x, 1, times, events, {"x1"});

        std::size_t expected_rows = 0;
        const auto ets = data.distinct_event_times();
        for (double t : ets) {
            for (std::size_t i = 0; i < n; ++i) {
                if (data.event(i) && data.time(i) == t) ++expected_rows;
                if (data.time(i) > t) ++expected_rows;
            }
        }
        auto stacked = stack(data, StackingConfig{1.0, static_cast<std::uint64_t>(rep)});
        CHECK(stacked.size() == expected_rows);
        const std::set<double> et_set(ets.begin(), ets.end());
        for (std::size_t i = 0; i < stacked.size(); ++i)
            CHECK(et_set.count(stacked.row(i)[stacked.n_features() - 1]) == 1);
    }
}

TEST_CASE("stacking is deterministic under seed") {
    Rng rng(5);
    const std::size_t n = 30;
    std::vector<double> x(n), times(n);
    std::vector<char> events(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = rng.normal();
        times[i] = rng.uniform(0.5, 8.0);
        events[i] = rng.bernoulli(0.5);
    }
    events[0] = 1;
    SurvivalDataset data(x, 1, times, events, {"x1"});
    auto a = stack(data, StackingConfig{0.4, 99});
    auto b = stack(data, StackingConfig{0.4, 99});
    REQUIRE(a.size() == b.size());
    CHECK(a.x() == b.x());
    CHECK(a.labels() == b.labels());
}

TEST_CASE("stack validates gamma and requires events") {
    auto data = three_records();
    CHECK_THROWS_AS(stack(data, StackingConfig{0.0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(stack(data, StackingConfig{-0.1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(stack(data, StackingConfig{1.5, 0}), std::invalid_argument);
    SurvivalDataset censored_only({0.0, 0.0}, 1, {1.0, 2.0}, {0, 0}, {"x1"});
    CHECK_THROWS_AS(stack(censored_only, StackingConfig{0.5, 0}), std::invalid_argument);
}

TEST_CASE("stacked csv export has the reserved trailing columns") {
    auto stacked = stack(three_records(), StackingConfig{1.0, 0});
    std::ostringstream out;
    write_stacked_csv(out, stacked);
    std::istringstream in(out.str());
    std::string header;
    std::getline(in, header);
    CHECK(header == "x1,stack_time,label");
    std::size_t rows = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == stacked.size());
    // first data row is the positive (x1 || 1, 1)
    std::istringstream in2(out.str());
    std::getline(in2, line);
    std::getline(in2, line);
    CHECK(line == "0.5,1,1");
}
