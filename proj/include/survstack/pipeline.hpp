// End-to-end pipeline: split -> preprocess -> (select) -> stack -> fit ->
// predict -> evaluate, plus the estimator-comparison harness.
#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "survstack/cox.hpp"
#include "survstack/csv.hpp"
#include "survstack/estimators.hpp"
#include "survstack/feature_select.hpp"
#include "survstack/gam.hpp"
#include "survstack/logistic.hpp"
#include "survstack/metrics.hpp"
#include "survstack/preprocess.hpp"
#include "survstack/prediction.hpp"
#include "survstack/serialize.hpp"
#include "survstack/stacking.hpp"
#include "survstack/synth.hpp"

namespace survstack {

struct PipelineConfig {
    std::string input_path;
    std::string out_dir = ".";
    std::string model = "gam";       // gam | logistic | cox
    std::string selection = "none";  // controlburn | lasso-linear | none
    std::size_t k = 10;
    double test_fraction = 0.2;
    double gamma = 0.01;       // stacking subsampling ratio
    bool auto_gamma = false;   // gamma = event-time span / #events (hazard scale)
    std::uint64_t seed = 0;
    int n_mc = 64;
    bool plain_mc_sampling = false;
    std::vector<double> grid;  // empty = default metric grid from the test set
    double compare_horizon = 5.0;
    GamConfig gam;
    LogisticConfig logistic;
    CoxConfig cox;
    SelectConfig select;
    double selection_row_budget = 5e6;  // stacked rows above this use the
                                        // fixed-horizon proxy for selection
    int threads = 1;
    bool report_gamma_corrected_brier = true;
};

inline PipelineConfig pipeline_config_from_json(const json& j) {
    PipelineConfig c;
    c.input_path = j.value("input", c.input_path);
    c.out_dir = j.value("out_dir", c.out_dir);
    c.model = j.value("model", c.model);
    c.selection = j.value("selection", c.selection);
    c.k = j.value("k", c.k);
    c.test_fraction = j.value("test_fraction", c.test_fraction);
    if (j.contains("gamma") && j["gamma"].is_string() && j["gamma"] == "auto")
        c.auto_gamma = true;
    else
        c.gamma = j.value("gamma", c.gamma);
    c.seed = j.value("seed", c.seed);
    c.n_mc = j.value("n_mc", c.n_mc);
    c.plain_mc_sampling = j.value("plain_mc_sampling", c.plain_mc_sampling);
    c.grid = j.value("grid", c.grid);
    c.compare_horizon = j.value("compare_horizon", c.compare_horizon);
    c.gam.max_bins = j.value("max_bins", c.gam.max_bins);
    c.gam.learning_rate = j.value("learning_rate", c.gam.learning_rate);
    c.gam.max_rounds = j.value("max_rounds", c.gam.max_rounds);
    c.gam.n_interactions = j.value("interactions", c.gam.n_interactions);
    c.gam.interaction_rounds = j.value("interaction_rounds", c.gam.interaction_rounds);
    c.gam.early_stop_patience = j.value("early_stop_patience", c.gam.early_stop_patience);
    c.logistic.l2 = j.value("logistic_l2", c.logistic.l2);
    c.cox.ridge = j.value("cox_ridge", c.cox.ridge);
    c.select.forest.n_trees = j.value("select_n_trees", c.select.forest.n_trees);
    c.select.forest.max_depth = j.value("select_max_depth", c.select.forest.max_depth);
    c.selection_row_budget = j.value("selection_row_budget", c.selection_row_budget);
    c.threads = j.value("threads", c.threads);
    c.report_gamma_corrected_brier =
        j.value("report_gamma_corrected_brier", c.report_gamma_corrected_brier);
    return c;
}

inline json pipeline_config_to_json(const PipelineConfig& c) {
    json j;
    j["input"] = c.input_path;
    j["out_dir"] = c.out_dir;
    j["model"] = c.model;
    j["selection"] = c.selection;
    j["k"] = c.k;
    j["test_fraction"] = c.test_fraction;
    if (c.auto_gamma) j["gamma"] = "auto";
    else j["gamma"] = c.gamma;
    j["seed"] = c.seed;
    j["n_mc"] = c.n_mc;
    j["plain_mc_sampling"] = c.plain_mc_sampling;
    j["grid"] = c.grid;
    j["compare_horizon"] = c.compare_horizon;
    j["max_bins"] = c.gam.max_bins;
    j["learning_rate"] = c.gam.learning_rate;
    j["max_rounds"] = c.gam.max_rounds;
    j["interactions"] = c.gam.n_interactions;
    j["interaction_rounds"] = c.gam.interaction_rounds;
    j["early_stop_patience"] = c.gam.early_stop_patience;
    j["logistic_l2"] = c.logistic.l2;
    j["cox_ridge"] = c.cox.ridge;
    j["select_n_trees"] = c.select.forest.n_trees;
    j["select_max_depth"] = c.select.forest.max_depth;
    j["selection_row_budget"] = c.selection_row_budget;
    j["threads"] = c.threads;
    j["report_gamma_corrected_brier"] = c.report_gamma_corrected_brier;
    return j;
}

// The stacked classifier's positive-class odds ride on the discrete
// per-event-time hazard; gamma = (event-time span) / (#distinct event
// times) lands them on the per-unit-time hazard scale that the Monte
// Carlo integrator expects.
inline double auto_gamma(const SurvivalDataset& train) {
    auto et = train.distinct_event_times();
    if (et.size() < 2) return 1.0;
    const double span = et.back() - et.front();
    if (!(span > 0.0)) return 1.0;
    return std::min(1.0, span / static_cast<double>(et.size()));
}

// Odds correction for subsampling-induced inflation: the classifier sees
// gamma-thinned negatives, so observed odds are 1/gamma times the
// population odds.
class GammaCorrectedHazard final : public HazardClassifier {
  public:
    GammaCorrectedHazard(const HazardClassifier& inner, double gamma)
        : inner_(inner), gamma_(gamma) {}
    double predict_probability(std::span<const double> x) const override {
        const double p = inner_.predict_probability(x);
        return gamma_ * p / (gamma_ * p + (1.0 - p));
    }

  private:
    const HazardClassifier& inner_;
    double gamma_;
};

namespace detail {

template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
    if (threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const auto workers = static_cast<std::size_t>(threads);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) fn(i);
        });
    for (auto& th : pool) th.join();
}

}  // namespace detail

// Survival curves for every record, one Monte Carlo stream per record.
inline std::vector<SurvivalCurve> predict_curves(const HazardClassifier& f,
                                                 const SurvivalDataset& data,
                                                 const std::vector<double>& grid,
                                                 int n_mc, std::uint64_t seed,
                                                 McSampling sampling, int threads = 1) {
    std::vector<SurvivalCurve> curves(data.size());
    detail::parallel_for(data.size(), threads, [&](std::size_t i) {
        PredictionConfig pc;
        pc.n_mc = n_mc;
        pc.seed = seed ^ (0x9e3779b97f4a7c15ULL * (i + 1));
        pc.grid = grid;
        pc.sampling = sampling;
        curves[i] = survival_curve(f, data.row(i), pc);
    });
    return curves;
}

// Plain LASSO on raw feature columns (the linear comparison the pipeline
// offers next to ControlBurn); one-hot groups are kept atomic.
inline std::vector<std::size_t> linear_lasso_select(const std::vector<double>& x_row_major,
                                                    std::size_t d,
                                                    const std::vector<char>& labels,
                                                    const std::vector<FeatureKind>& kinds,
                                                    std::size_t k) {
    const std::size_t n = labels.size();
    const double m = static_cast<double>(n);
    double ybar = 0.0;
    for (char y : labels) ybar += (y != 0);
    ybar /= m;
    // column means/norms
    std::vector<double> mean(d, 0.0), norm(d, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) mean[j] += x_row_major[i * d + j];
    for (double& v : mean) v /= m;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            const double c = x_row_major[i * d + j] - mean[j];
            norm[j] += c * c;
        }
    for (double& v : norm) v /= m;

    auto solve = [&](double lambda) {
        std::vector<double> w(d, 0.0), residual(n);
        for (std::size_t i = 0; i < n; ++i) residual[i] = (labels[i] ? 1.0 : 0.0) - ybar;
        for (int sweep = 0; sweep < 5000; ++sweep) {
            double max_update = 0.0;
            for (std::size_t j = 0; j < d; ++j) {
                if (norm[j] < 1e-18) continue;
                double rho = 0.0;
                for (std::size_t i = 0; i < n; ++i)
                    rho += (x_row_major[i * d + j] - mean[j]) * residual[i];
                rho = rho / m + norm[j] * w[j];
                double w_new = 0.0;
                if (rho > lambda) w_new = (rho - lambda) / norm[j];
                else if (rho < -lambda) w_new = (rho + lambda) / norm[j];
                const double delta = w_new - w[j];
                if (delta != 0.0) {
                    for (std::size_t i = 0; i < n; ++i)
                        residual[i] -= (x_row_major[i * d + j] - mean[j]) * delta;
                    w[j] = w_new;
                    max_update = std::max(max_update, std::abs(delta));
                }
            }
            if (max_update < 1e-7) break;
        }
        return w;
    };

    std::vector<long> group_of(d);
    long next_group = 0;
    {
        std::vector<long> onehot_map;
        for (std::size_t j = 0; j < d; ++j) {
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
    auto group_count = [&](const std::vector<double>& w) {
        std::set<long> g;
        for (std::size_t j = 0; j < d; ++j)
            if (w[j] != 0.0) g.insert(group_of[j]);
        return g;
    };

    double lmax = 0.0;
    {
        std::vector<double> r(n);
        for (std::size_t i = 0; i < n; ++i) r[i] = (labels[i] ? 1.0 : 0.0) - ybar;
        for (std::size_t j = 0; j < d; ++j) {
            double dot = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                dot += (x_row_major[i * d + j] - mean[j]) * r[i];
            lmax = std::max(lmax, std::abs(dot) / m);
        }
    }
    double lo = 0.0, hi = lmax;
    std::vector<double> w_lo = solve(0.0);
    if (group_count(w_lo).size() < k)
        throw std::runtime_error("linear_lasso_select: fewer than k informative columns");
    for (int step = 0; step < 40; ++step) {
        const double mid = 0.5 * (lo + hi);
        auto w_mid = solve(mid);
        if (group_count(w_mid).size() >= k) {
            lo = mid;
            w_lo = w_mid;
        } else {
            hi = mid;
        }
    }
    std::map<long, double> score;
    for (std::size_t j = 0; j < d; ++j)
        if (w_lo[j] != 0.0) score[group_of[j]] += std::abs(w_lo[j]);
    std::vector<std::pair<long, double>> ranked(score.begin(), score.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (ranked.size() > k) ranked.resize(k);
    std::set<long> kept;
    for (const auto& [g, s] : ranked) kept.insert(g);
    std::vector<std::size_t> cols;
    for (std::size_t j = 0; j < d; ++j)
        if (kept.count(group_of[j])) cols.push_back(j);
    return cols;
}

struct PipelineResult {
    EvaluationReport report;
    json model_json;
    std::optional<json> selection_json;
    std::vector<SurvivalCurve> curves;
    json run_log;
    std::optional<json> shapes;  // gam only, importances
    double gamma_used = 1.0;
};

inline PipelineResult run_pipeline_split(const SurvivalDataset& train,
                                         const SurvivalDataset& test,
                                         const PipelineConfig& config) {
    PipelineResult result;
    json log;
    log["n_train"] = train.size();
    log["n_test"] = test.size();
    log["train_events"] = train.n_events();
    log["test_events"] = test.n_events();

    const double gamma = config.auto_gamma ? auto_gamma(train) : config.gamma;
    result.gamma_used = gamma;
    log["gamma"] = gamma;

    // ---- feature selection (optional) ----
    SurvivalDataset model_train = train;
    SurvivalDataset model_test = test;
    if (config.selection != "none") {
        std::vector<std::size_t> cols;
        const auto planned = expected_size(train, gamma);
        const double planned_rows =
            static_cast<double>(planned.positives) + planned.expected_negatives;
        if (config.selection == "controlburn") {
            SelectionResult sel;
            if (planned_rows <= config.selection_row_budget) {
                // select on stacked training data, time column excluded
                StackingConfig sc{gamma, config.seed ^ 0xfeedULL};
                auto stacked_sel = stack(train, sc);
                const std::size_t ds = stacked_sel.n_features();
                std::vector<double> x_nt;
                x_nt.reserve(stacked_sel.size() * (ds - 1));
                for (std::size_t i = 0; i < stacked_sel.size(); ++i) {
                    auto r = stacked_sel.row(i);
                    x_nt.insert(x_nt.end(), r.begin(), r.end() - 1);
                }
                sel = select_features(x_nt, ds - 1, stacked_sel.labels(),
                                      train.feature_kinds(), config.k, config.select);
                log["selection_data"] = "stacked";
            } else {
                // fixed-horizon proxy at the median event time
                auto et = train.distinct_event_times();
                const double horizon = et[et.size() / 2];
                auto [kept, labels] = fixed_horizon_labels(train, horizon);
                auto proxy = train.subset(kept);
                sel = select_features(proxy.x(), proxy.n_features(), labels,
                                      train.feature_kinds(), config.k, config.select);
                log["selection_data"] = "fixed-horizon";
                log["selection_horizon"] = horizon;
            }
            cols = sel.selected_features;
            result.selection_json = selection_report_to_json(sel, train.feature_names());
        } else if (config.selection == "lasso-linear") {
            auto et = train.distinct_event_times();
            const double horizon = et[et.size() / 2];
            auto [kept, labels] = fixed_horizon_labels(train, horizon);
            auto proxy = train.subset(kept);
            cols = linear_lasso_select(proxy.x(), proxy.n_features(), labels,
                                       train.feature_kinds(), config.k);
            json sj;
            sj["schema"] = "survstack-selection-v1";
            sj["method"] = "lasso-linear";
            json names = json::array();
            for (std::size_t c : cols) names.push_back(train.feature_names()[c]);
            sj["selected_features"] = std::move(names);
            sj["selected_indices"] = cols;
            result.selection_json = sj;
            log["selection_data"] = "fixed-horizon";
        } else {
            throw std::runtime_error("unknown selection method: " + config.selection);
        }
        model_train = train.select_columns(cols);
        model_test = test.select_columns(cols);
        log["n_selected_features"] = cols.size();
    }

    // ---- metric / prediction grid ----
    std::vector<double> grid = config.grid;
    if (grid.empty()) grid = default_metric_grid(model_test);
    log["grid_size"] = grid.size();

    // ---- fit + predict ----
    std::vector<double> risk_scores(model_test.size());
    const McSampling sampling =
        config.plain_mc_sampling ? McSampling::kPlain : McSampling::kStratified;
    std::unique_ptr<HazardClassifier> hazard;

    if (config.model == "cox") {
        log["stacking"] = "skipped (cox fits the survival data directly)";
        auto cox = fit_cox(model_train, config.cox);
        result.model_json = cox_to_json(cox);
        result.curves.resize(model_test.size());
        for (std::size_t i = 0; i < model_test.size(); ++i) {
            risk_scores[i] = cox_risk_score(cox, model_test.row(i));
            result.curves[i].times = grid;
            for (double t : grid)
                result.curves[i].probabilities.push_back(
                    cox_survival(cox, model_test.row(i), t));
        }
    } else {
        StackingConfig sc{gamma, config.seed};
        const auto planned = expected_size(model_train, gamma);
        auto stacked = stack(model_train, sc);
        log["stacked_rows"] = stacked.size();
        log["stacked_positives"] = stacked.n_positives();
        log["expected_positives"] = planned.positives;
        log["expected_negatives"] = planned.expected_negatives;

        if (config.model == "gam") {
            auto binned =
                bin_features(stacked.x(), stacked.n_features(), config.gam.max_bins);
            GamConfig gc = config.gam;
            gc.seed = config.seed;
            auto gam = fit_gam(binned, stacked.labels(), gc);
            gam.feature_names = stacked.feature_names();
            auto importances = feature_importance(gam, binned);
            json imp = json::array();
            for (const auto& ti : importances)
                imp.push_back({{"term", ti.term}, {"importance", ti.importance}});
            result.shapes = imp;
            result.model_json = gam_to_json(gam);
            hazard = std::make_unique<GamModel>(std::move(gam));
        } else if (config.model == "logistic") {
            auto lr = fit_logistic(stacked, config.logistic);
            result.model_json = logistic_to_json(lr);
            hazard = std::make_unique<LogisticModel>(std::move(lr));
        } else {
            throw std::runtime_error("unknown model: " + config.model);
        }

        result.curves = predict_curves(*hazard, model_test, grid, config.n_mc,
                                       config.seed, sampling, config.threads);
        // risk score: predicted cumulative hazard over the grid window
        for (std::size_t i = 0; i < model_test.size(); ++i)
            risk_scores[i] = -std::log(std::max(result.curves[i].probabilities.back(),
                                                1e-300));
    }

    // ---- evaluate ----
    EvaluationReport report;
    report.grid = grid;
    auto auc = cumulative_dynamic_auc(model_train, model_test, risk_scores, grid);
    report.auc_per_time = auc.per_time;
    report.mean_auc = auc.mean_auc;
    report.warnings = auc.warnings;
    std::vector<double> preds(model_test.size());
    for (std::size_t k2 = 0; k2 < grid.size(); ++k2) {
        for (std::size_t i = 0; i < model_test.size(); ++i)
            preds[i] = result.curves[i].probabilities[k2];
        report.brier_per_time.push_back(brier_score(model_train, model_test, preds, grid[k2]));
    }
    if (grid.size() >= 2)
        report.integrated_brier = integrated_brier(model_train, model_test, result.curves,
                                                   grid.front(), grid.back());
    result.report = report;

    json rj = evaluation_report_to_json(report);
    if (hazard && config.report_gamma_corrected_brier && gamma < 1.0) {
        GammaCorrectedHazard corrected(*hazard, gamma);
        auto corrected_curves = predict_curves(corrected, model_test, grid, config.n_mc,
                                               config.seed, sampling, config.threads);
        if (grid.size() >= 2)
            rj["integrated_brier_gamma_corrected"] = integrated_brier(
                model_train, model_test, corrected_curves, grid.front(), grid.back());
    }
    log["evaluation"] = std::move(rj);
    result.run_log = std::move(log);
    return result;
}

inline PipelineResult run_pipeline(const SurvivalDataset& full,
                                   const PipelineConfig& config) {
    auto [train, test] = train_test_split(full, config.test_fraction, config.seed);
    auto result = run_pipeline_split(train, test, config);
    result.run_log["n_total"] = full.size();
    return result;
}

// Entry point for raw CSV tables: split first, then fit the preprocessing
// (standardization, one-hot encoding) on the training rows only.
inline PipelineResult run_pipeline_raw(const RawTable& raw, const PipelineConfig& config) {
    auto time_col = raw.column_index("time");
    auto event_col = raw.column_index("event");
    if (!time_col || !event_col)
        throw std::runtime_error("dataset requires `time` and `event` columns");
    std::vector<double> times(raw.n_rows());
    std::vector<char> events(raw.n_rows());
    for (std::size_t i = 0; i < raw.n_rows(); ++i) {
        auto t = detail::parse_double(raw.rows[i][*time_col]);
        if (!t || !(*t >= 0.0))
            throw std::runtime_error("invalid time at data row " + std::to_string(i));
        auto e = detail::parse_double(raw.rows[i][*event_col]);
        if (!e || (*e != 0.0 && *e != 1.0))
            throw std::runtime_error("invalid event indicator at data row " +
                                     std::to_string(i));
        times[i] = *t;
        events[i] = (*e == 1.0);
    }

    // stratified index split by event indicator
    if (!(config.test_fraction > 0.0 && config.test_fraction < 1.0))
        throw std::runtime_error("test_fraction must be in (0,1)");
    std::vector<std::size_t> ev, cen;
    for (std::size_t i = 0; i < raw.n_rows(); ++i) (events[i] ? ev : cen).push_back(i);
    if (ev.empty()) throw std::runtime_error("degenerate dataset: no observed events");
    const auto total_test = static_cast<std::size_t>(
        std::llround(config.test_fraction * static_cast<double>(raw.n_rows())));
    auto n_test_ev = std::min<std::size_t>(
        static_cast<std::size_t>(
            std::llround(config.test_fraction * static_cast<double>(ev.size()))),
        total_test);
    const auto n_test_cen = std::min(total_test - n_test_ev, cen.size());
    Rng rng(config.seed);
    auto shuffle = [&](std::vector<std::size_t>& v) {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[rng.uniform_index(i)]);
    };
    shuffle(ev);
    shuffle(cen);
    std::vector<std::size_t> test_idx(ev.begin(), ev.begin() + static_cast<long>(n_test_ev));
    test_idx.insert(test_idx.end(), cen.begin(), cen.begin() + static_cast<long>(n_test_cen));
    std::vector<std::size_t> train_idx(ev.begin() + static_cast<long>(n_test_ev), ev.end());
    train_idx.insert(train_idx.end(), cen.begin() + static_cast<long>(n_test_cen), cen.end());
    std::sort(test_idx.begin(), test_idx.end());
    std::sort(train_idx.begin(), train_idx.end());

    auto take = [&](const std::vector<std::size_t>& idx) {
        RawTable t;
        t.column_names = raw.column_names;
        for (std::size_t i : idx) t.rows.push_back(raw.rows[i]);
        return t;
    };
    RawTable raw_train = take(train_idx), raw_test = take(test_idx);

    auto model = fit_preprocess(raw_train);
    auto build = [&](const RawTable& part, const std::vector<std::size_t>& idx) {
        std::size_t width = 0;
        auto x = transform(model, part, &width);
        std::vector<double> t;
        std::vector<char> e;
        for (std::size_t i : idx) {
            t.push_back(times[i]);
            e.push_back(events[i]);
        }
        return SurvivalDataset(std::move(x), width, std::move(t), std::move(e),
                               model.output_names(), model.output_kinds());
    };
    auto train = build(raw_train, train_idx);
    auto test = build(raw_test, test_idx);
    train.require_events();
    test.require_events();

    auto result = run_pipeline_split(train, test, config);
    result.run_log["n_total"] = raw.n_rows();
    for (const auto& w : model.warnings())
        result.run_log["preprocess_warnings"].push_back(w);
    return result;
}

// Test-set distributions of S(horizon | x) under the discrete product
// estimator and the Monte Carlo estimator, with shared histogram edges.
inline json compare_estimators(const HazardClassifier& f, const SurvivalDataset& train,
                               const SurvivalDataset& test, double horizon, int n_mc,
                               std::uint64_t seed,
                               McSampling sampling = McSampling::kStratified) {
    const auto event_times = train.distinct_event_times();
    std::vector<double> s_discrete(test.size()), s_mc(test.size());
    for (std::size_t i = 0; i < test.size(); ++i) {
        s_discrete[i] = predict_survival_discrete(f, test.row(i), horizon, event_times);
        PredictionConfig pc;
        pc.n_mc = n_mc;
        pc.seed = seed ^ (0x9e3779b97f4a7c15ULL * (i + 1));
        pc.sampling = sampling;
        s_mc[i] = predict_survival_mc(f, test.row(i), horizon, pc);
    }
    auto quantile = [](std::vector<double> v, double q) {
        std::sort(v.begin(), v.end());
        const double pos = q * static_cast<double>(v.size() - 1);
        const auto lo = static_cast<std::size_t>(pos);
        const auto hi = std::min(lo + 1, v.size() - 1);
        const double frac = pos - static_cast<double>(lo);
        return v[lo] * (1.0 - frac) + v[hi] * frac;
    };
    constexpr int kBins = 20;
    auto histogram = [&](const std::vector<double>& v) {
        std::vector<std::size_t> counts(kBins, 0);
        for (double s : v) {
            auto b = static_cast<std::size_t>(s * kBins);
            if (b >= kBins) b = kBins - 1;
            ++counts[b];
        }
        return counts;
    };
    json j;
    j["schema"] = "survstack-compare-v1";
    j["horizon"] = horizon;
    j["n_distinct_event_times"] = event_times.size();
    json edges = json::array();
    for (int b = 0; b <= kBins; ++b) edges.push_back(static_cast<double>(b) / kBins);
    j["bin_edges"] = edges;
    for (const char* which : {"discrete_product", "monte_carlo"}) {
        const auto& v = std::string(which) == "discrete_product" ? s_discrete : s_mc;
        json q;
        for (double p : {0.1, 0.25, 0.5, 0.75, 0.9})
            q[format_double(p)] = quantile(v, p);
        j[which] = {{"histogram", histogram(v)}, {"quantiles", q}};
    }
    return j;
}

}  // namespace survstack
