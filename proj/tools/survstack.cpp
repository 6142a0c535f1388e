// survstack command-line tool.
//
// Subcommands cover the whole pipeline (synth, run) and its individual
// stages (stack, select, train, predict, evaluate, explain,
// compare-estimators). Configuration files are JSON; // comments are
// allowed. Exit codes: 0 success, 1 stage failure (the failing stage is
// named on stderr), 2 usage or configuration error.
#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "survstack/pipeline.hpp"

namespace fs = std::filesystem;
using survstack::json;

namespace {

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    return survstack::read_json_file(path, /*allow_comments=*/true);
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    return out;
}

survstack::SurvivalDataset load_numeric_dataset(const std::string& path) {
    return survstack::validate_dataset(survstack::read_csv_file(path));
}

struct StageGuard {
    std::string name = "startup";
};

int cmd_synth(const std::string& config_path, std::uint64_t seed, bool seed_set,
              const std::string& out_path, StageGuard& stage) {
    stage.name = "synth";
    json cfg = load_config(config_path);
    survstack::SyntheticSpec spec =
        cfg.empty() ? survstack::SyntheticSpec{} : survstack::synth_spec_from_json(cfg);
    if (seed_set) spec.seed = seed;
    auto result = survstack::generate(spec);
    auto out = open_out(out_path);
    survstack::write_dataset_csv(out, result.dataset);
    std::cout << "wrote " << result.dataset.size() << " rows ("
              << result.dataset.n_events() << " events, censoring fraction "
              << survstack::format_double(result.censoring_fraction) << ") to "
              << out_path << "\n";
    return 0;
}

int cmd_run(const std::string& input, const std::string& config_path, std::uint64_t seed,
            bool seed_set, int threads, const std::string& out_dir, StageGuard& stage) {
    stage.name = "config";
    json cfg = load_config(config_path);
    auto pc = survstack::pipeline_config_from_json(cfg);
    if (seed_set) pc.seed = seed;
    if (threads > 0) pc.threads = threads;
    if (!input.empty()) pc.input_path = input;
    if (pc.input_path.empty())
        throw std::invalid_argument("run: no input file (use --input or config `input`)");
    pc.out_dir = out_dir;
    fs::create_directories(out_dir);

    stage.name = "load";
    auto raw = survstack::read_csv_file(pc.input_path);

    stage.name = "pipeline";
    auto result = survstack::run_pipeline_raw(raw, pc);

    stage.name = "write";
    survstack::write_json_file(out_dir + "/run_log.json", result.run_log);
    survstack::write_json_file(out_dir + "/model.json", result.model_json);
    survstack::write_json_file(out_dir + "/evaluation.json",
                               result.run_log.at("evaluation"));
    if (result.selection_json)
        survstack::write_json_file(out_dir + "/selection.json", *result.selection_json);
    {
        auto out = open_out(out_dir + "/curves.csv");
        survstack::write_curves_csv(out, result.curves);
    }
    if (result.shapes) {
        survstack::write_json_file(out_dir + "/importances.json", *result.shapes);
        auto model = survstack::gam_from_json(result.model_json);
        auto out = open_out(out_dir + "/shapes.csv");
        survstack::write_shape_export_csv(out, model);
    }
    const auto& log = result.run_log;
    std::cout << "train/test: " << log.at("n_train") << "/" << log.at("n_test")
              << " rows, gamma " << survstack::format_double(result.gamma_used) << "\n";
    if (log.contains("stacked_rows"))
        std::cout << "stacked rows: " << log.at("stacked_rows") << " (expected ~"
                  << log.at("expected_positives").get<std::size_t>() +
                         static_cast<std::size_t>(
                             log.at("expected_negatives").get<double>())
                  << ")\n";
    std::cout << "mean AUC " << survstack::format_double(result.report.mean_auc)
              << ", integrated Brier "
              << survstack::format_double(result.report.integrated_brier) << "\n"
              << "outputs in " << out_dir << "\n";
    return 0;
}

int cmd_stack(const std::string& input, double gamma, std::uint64_t seed,
              const std::string& out_path, StageGuard& stage) {
    stage.name = "load";
    auto data = load_numeric_dataset(input);
    stage.name = "stack";
    auto planned = survstack::expected_size(data, gamma);
    auto stacked = survstack::stack(data, survstack::StackingConfig{gamma, seed});
    auto out = open_out(out_path);
    survstack::write_stacked_csv(out, stacked);
    std::cout << "stacked " << stacked.size() << " rows (" << stacked.n_positives()
              << " positives exact, ~"
              << survstack::format_double(planned.expected_negatives)
              << " negatives expected) to " << out_path << "\n";
    return 0;
}

int cmd_select(const std::string& input, const std::string& method, std::size_t k,
               double horizon, std::uint64_t seed, const std::string& out_path,
               StageGuard& stage) {
    stage.name = "load";
    auto data = load_numeric_dataset(input);
    stage.name = "select";
    double h = horizon;
    if (!(h > 0.0)) {
        auto et = data.distinct_event_times();
        h = et[et.size() / 2];
    }
    auto [kept, labels] = survstack::fixed_horizon_labels(data, h);
    auto proxy = data.subset(kept);
    json out_json;
    if (method == "controlburn") {
        survstack::SelectConfig sc;
        sc.forest.seed = seed;
        auto sel = survstack::select_features(proxy.x(), proxy.n_features(), labels,
                                              data.feature_kinds(), k, sc);
        out_json = survstack::selection_report_to_json(sel, data.feature_names());
    } else if (method == "lasso-linear") {
        auto cols = survstack::linear_lasso_select(proxy.x(), proxy.n_features(), labels,
                                                   data.feature_kinds(), k);
        out_json["schema"] = "survstack-selection-v1";
        out_json["method"] = "lasso-linear";
        json names = json::array();
        for (std::size_t c : cols) names.push_back(data.feature_names()[c]);
        out_json["selected_features"] = std::move(names);
        out_json["selected_indices"] = cols;
    } else {
        throw std::invalid_argument("select: unknown method '" + method + "'");
    }
    out_json["horizon"] = h;
    survstack::write_json_file(out_path, out_json);
    std::cout << "selection written to " << out_path << "\n";
    return 0;
}

// Read a stacked CSV (trailing `label` column) back into memory.
struct StackedTable {
    std::vector<double> x;
    std::size_t d = 0;
    std::vector<char> labels;
    std::vector<std::string> feature_names;
};

StackedTable read_stacked_csv(const std::string& path) {
    auto raw = survstack::read_csv_file(path);
    if (raw.column_names.empty() || raw.column_names.back() != "label")
        throw std::runtime_error("stacked csv must end with a `label` column");
    StackedTable t;
    t.d = raw.n_columns() - 1;
    t.feature_names.assign(raw.column_names.begin(), raw.column_names.end() - 1);
    for (std::size_t i = 0; i < raw.n_rows(); ++i) {
        for (std::size_t j = 0; j < t.d; ++j) {
            auto v = survstack::detail::parse_double(raw.rows[i][j]);
            if (!v)
                throw std::runtime_error("non-numeric value at data row " +
                                         std::to_string(i));
            t.x.push_back(*v);
        }
        auto y = survstack::detail::parse_double(raw.rows[i][t.d]);
        if (!y || (*y != 0.0 && *y != 1.0))
            throw std::runtime_error("invalid label at data row " + std::to_string(i));
        t.labels.push_back(*y == 1.0);
    }
    return t;
}

int cmd_train(const std::string& input, const std::string& model_kind,
              const std::string& config_path, std::uint64_t seed, bool seed_set,
              const std::string& out_path, StageGuard& stage) {
    stage.name = "config";
    json cfg = load_config(config_path);
    auto pc = survstack::pipeline_config_from_json(cfg);
    if (seed_set) pc.seed = seed;
    stage.name = "train";
    json model_json;
    if (model_kind == "cox") {
        auto data = load_numeric_dataset(input);
        model_json = survstack::cox_to_json(survstack::fit_cox(data, pc.cox));
    } else if (model_kind == "gam") {
        auto t = read_stacked_csv(input);
        auto binned = survstack::bin_features(t.x, t.d, pc.gam.max_bins);
        survstack::GamConfig gc = pc.gam;
        gc.seed = pc.seed;
        auto model = survstack::fit_gam(binned, t.labels, gc);
        model.feature_names = t.feature_names;
        model_json = survstack::gam_to_json(model);
    } else if (model_kind == "logistic") {
        auto t = read_stacked_csv(input);
        auto model = survstack::fit_logistic_matrix(t.x, t.d, t.labels, pc.logistic);
        model_json = survstack::logistic_to_json(model);
    } else {
        throw std::invalid_argument("train: unknown model '" + model_kind + "'");
    }
    survstack::write_json_file(out_path, model_json);
    std::cout << "model written to " << out_path << "\n";
    return 0;
}

int cmd_predict(const std::string& model_path, const std::string& input, double t_max,
                std::size_t n_points, int n_mc, std::uint64_t seed,
                const std::string& out_path, StageGuard& stage) {
    stage.name = "load";
    json mj = survstack::read_json_file(model_path);
    auto data = load_numeric_dataset(input);
    if (!(t_max > 0.0)) {
        t_max = 0.0;
        for (std::size_t i = 0; i < data.size(); ++i)
            t_max = std::max(t_max, data.time(i));
        if (!(t_max > 0.0))
            throw std::runtime_error("predict: cannot infer horizon, pass --t-max");
    }
    std::vector<double> grid(n_points);
    for (std::size_t i = 0; i < n_points; ++i)
        grid[i] = t_max * static_cast<double>(i + 1) / static_cast<double>(n_points);

    stage.name = "predict";
    std::vector<survstack::SurvivalCurve> curves;
    const std::string kind = mj.at("kind").get<std::string>();
    if (kind == "cox") {
        auto model = survstack::cox_from_json(mj);
        curves.resize(data.size());
        for (std::size_t i = 0; i < data.size(); ++i) {
            curves[i].times = grid;
            for (double t : grid)
                curves[i].probabilities.push_back(
                    survstack::cox_survival(model, data.row(i), t));
        }
    } else {
        std::unique_ptr<survstack::HazardClassifier> f;
        if (kind == "gam")
            f = std::make_unique<survstack::GamModel>(survstack::gam_from_json(mj));
        else if (kind == "logistic")
            f = std::make_unique<survstack::LogisticModel>(
                survstack::logistic_from_json(mj));
        else
            throw std::runtime_error("predict: unknown model kind '" + kind + "'");
        curves = survstack::predict_curves(*f, data, grid, n_mc, seed,
                                           survstack::McSampling::kStratified);
    }
    auto out = open_out(out_path);
    survstack::write_curves_csv(out, curves);
    std::cout << "curves for " << curves.size() << " rows written to " << out_path << "\n";
    return 0;
}

int cmd_evaluate(const std::string& model_path, const std::string& train_path,
                 const std::string& test_path, double gamma, int n_mc,
                 std::uint64_t seed, const std::string& out_path, StageGuard& stage) {
    stage.name = "load";
    json mj = survstack::read_json_file(model_path);
    auto train = load_numeric_dataset(train_path);
    auto test = load_numeric_dataset(test_path);

    stage.name = "evaluate";
    auto grid = survstack::default_metric_grid(test);
    std::vector<survstack::SurvivalCurve> curves;
    std::vector<double> risk(test.size());
    std::unique_ptr<survstack::HazardClassifier> f;
    const std::string kind = mj.at("kind").get<std::string>();
    if (kind == "cox") {
        auto model = survstack::cox_from_json(mj);
        curves.resize(test.size());
        for (std::size_t i = 0; i < test.size(); ++i) {
            risk[i] = survstack::cox_risk_score(model, test.row(i));
            curves[i].times = grid;
            for (double t : grid)
                curves[i].probabilities.push_back(
                    survstack::cox_survival(model, test.row(i), t));
        }
    } else {
        if (kind == "gam")
            f = std::make_unique<survstack::GamModel>(survstack::gam_from_json(mj));
        else if (kind == "logistic")
            f = std::make_unique<survstack::LogisticModel>(
                survstack::logistic_from_json(mj));
        else
            throw std::runtime_error("evaluate: unknown model kind '" + kind + "'");
        curves = survstack::predict_curves(*f, test, grid, n_mc, seed,
                                           survstack::McSampling::kStratified);
        for (std::size_t i = 0; i < test.size(); ++i)
            risk[i] = -std::log(std::max(curves[i].probabilities.back(), 1e-300));
    }

    survstack::EvaluationReport report;
    report.grid = grid;
    auto auc = survstack::cumulative_dynamic_auc(train, test, risk, grid);
    report.auc_per_time = auc.per_time;
    report.mean_auc = auc.mean_auc;
    report.warnings = auc.warnings;
    std::vector<double> preds(test.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        for (std::size_t i = 0; i < test.size(); ++i)
            preds[i] = curves[i].probabilities[k];
        report.brier_per_time.push_back(
            survstack::brier_score(train, test, preds, grid[k]));
    }
    if (grid.size() >= 2)
        report.integrated_brier =
            survstack::integrated_brier(train, test, curves, grid.front(), grid.back());

    json out = survstack::evaluation_report_to_json(report);
    if (f && gamma > 0.0 && gamma < 1.0) {
        survstack::GammaCorrectedHazard corrected(*f, gamma);
        auto cc = survstack::predict_curves(corrected, test, grid, n_mc, seed,
                                            survstack::McSampling::kStratified);
        if (grid.size() >= 2)
            out["integrated_brier_gamma_corrected"] = survstack::integrated_brier(
                train, test, cc, grid.front(), grid.back());
    }
    survstack::write_json_file(out_path, out);
    std::cout << "mean AUC " << survstack::format_double(report.mean_auc)
              << ", integrated Brier "
              << survstack::format_double(report.integrated_brier) << "; report in "
              << out_path << "\n";
    return 0;
}

int cmd_explain(const std::string& model_path, const std::string& out_dir,
                StageGuard& stage) {
    stage.name = "load";
    json mj = survstack::read_json_file(model_path);
    if (mj.at("kind") != "gam")
        throw std::runtime_error("explain: only gam models have shape exports");
    auto model = survstack::gam_from_json(mj);
    stage.name = "write";
    fs::create_directories(out_dir);
    {
        auto out = open_out(out_dir + "/shapes.csv");
        survstack::write_shape_export_csv(out, model);
    }
    auto importances = survstack::feature_importance(model);
    json imp = json::array();
    for (const auto& ti : importances)
        imp.push_back({{"term", ti.term}, {"importance", ti.importance}});
    survstack::write_json_file(out_dir + "/importances.json", imp);
    std::cout << "top terms:\n";
    for (std::size_t i = 0; i < std::min<std::size_t>(importances.size(), 10); ++i)
        std::cout << "  " << importances[i].term << "  "
                  << survstack::format_double(importances[i].importance) << "\n";
    return 0;
}

int cmd_compare(const std::string& input, const std::string& config_path,
                std::uint64_t seed, bool seed_set, double horizon,
                const std::string& out_path, StageGuard& stage) {
    stage.name = "config";
    json cfg = load_config(config_path);
    auto pc = survstack::pipeline_config_from_json(cfg);
    if (seed_set) pc.seed = seed;
    if (horizon > 0.0) pc.compare_horizon = horizon;

    stage.name = "load";
    auto raw = survstack::read_csv_file(input);
    survstack::PreprocessModel pm;
    auto full = survstack::preprocess_survival_table(raw, pm);

    stage.name = "fit";
    auto [train, test] =
        survstack::train_test_split(full, pc.test_fraction, pc.seed);
    const double gamma = pc.auto_gamma ? survstack::auto_gamma(train) : pc.gamma;
    auto stacked = survstack::stack(train, survstack::StackingConfig{gamma, pc.seed});
    auto binned = survstack::bin_features(stacked.x(), stacked.n_features(),
                                          pc.gam.max_bins);
    survstack::GamConfig gc = pc.gam;
    gc.seed = pc.seed;
    auto model = survstack::fit_gam(binned, stacked.labels(), gc);
    model.feature_names = stacked.feature_names();

    stage.name = "compare";
    auto out = survstack::compare_estimators(model, train, test, pc.compare_horizon,
                                             pc.n_mc, pc.seed);
    out["gamma"] = gamma;
    survstack::write_json_file(out_path, out);
    std::cout << "estimator comparison at t=" << survstack::format_double(pc.compare_horizon)
              << " written to " << out_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"interpretable survival modeling via survival stacking"};
    app.require_subcommand(1);

    std::string input, config_path, out_path = "out", model_path, model_kind = "gam";
    std::string method = "controlburn", train_path, test_path;
    std::uint64_t seed = 0;
    int threads = 0, n_mc = 64;
    double gamma = 0.01, horizon = 0.0, t_max = 0.0;
    std::size_t k = 10, n_points = 21;

    auto* synth = app.add_subcommand("synth", "generate synthetic survival data");
    synth->add_option("--config", config_path, "generator spec (json)");
    auto* synth_seed = synth->add_option("--seed", seed, "rng seed");
    synth->add_option("--out", out_path, "output csv")->required();

    auto* run = app.add_subcommand("run", "full pipeline: split, stack, fit, evaluate");
    run->add_option("--input", input, "survival csv (time,event columns)");
    run->add_option("--config", config_path, "pipeline config (json, // comments ok)");
    auto* run_seed = run->add_option("--seed", seed, "rng seed");
    run->add_option("--threads", threads, "worker threads for prediction");
    run->add_option("--out", out_path, "output directory");

    auto* stk = app.add_subcommand("stack", "expand a survival csv into stacked rows");
    stk->add_option("--input", input, "survival csv")->required();
    stk->add_option("--gamma", gamma, "negative subsampling ratio in (0,1]");
    stk->add_option("--seed", seed, "rng seed");
    stk->add_option("--out", out_path, "stacked csv")->required();

    auto* sel = app.add_subcommand("select", "feature selection on a survival csv");
    sel->add_option("--input", input, "survival csv")->required();
    sel->add_option("--method", method, "controlburn | lasso-linear");
    sel->add_option("--k", k, "number of features to keep");
    sel->add_option("--horizon", horizon,
                    "fixed-horizon label cutoff (default: median event time)");
    sel->add_option("--seed", seed, "rng seed");
    sel->add_option("--out", out_path, "selection report (json)")->required();

    auto* trn = app.add_subcommand("train", "fit a model on a stacked (or survival) csv");
    trn->add_option("--input", input, "stacked csv (gam/logistic) or survival csv (cox)")
        ->required();
    trn->add_option("--model", model_kind, "gam | logistic | cox");
    trn->add_option("--config", config_path, "hyperparameters (json)");
    auto* trn_seed = trn->add_option("--seed", seed, "rng seed");
    trn->add_option("--out", out_path, "model file (json)")->required();

    auto* prd = app.add_subcommand("predict", "survival curves from a saved model");
    prd->add_option("--model", model_path, "model file (json)")->required();
    prd->add_option("--input", input, "survival csv with the model's features")->required();
    prd->add_option("--t-max", t_max, "curve horizon (default: max observed time)");
    prd->add_option("--points", n_points, "grid size");
    prd->add_option("--n-mc", n_mc, "Monte Carlo samples per curve point");
    prd->add_option("--seed", seed, "rng seed");
    prd->add_option("--out", out_path, "curves csv")->required();

    auto* evl = app.add_subcommand("evaluate", "AUC and Brier metrics for a saved model");
    evl->add_option("--model", model_path, "model file (json)")->required();
    evl->add_option("--train", train_path, "training survival csv (censoring weights)")
        ->required();
    evl->add_option("--test", test_path, "test survival csv")->required();
    evl->add_option("--gamma", gamma, "stacking gamma, enables corrected Brier");
    evl->add_option("--n-mc", n_mc, "Monte Carlo samples per curve point");
    evl->add_option("--seed", seed, "rng seed");
    evl->add_option("--out", out_path, "evaluation report (json)")->required();

    auto* exp = app.add_subcommand("explain", "shape functions and term importances");
    exp->add_option("--model", model_path, "gam model file (json)")->required();
    exp->add_option("--out", out_path, "output directory");

    auto* cmp = app.add_subcommand(
        "compare-estimators",
        "discrete-product vs Monte Carlo survival estimates at a horizon");
    cmp->add_option("--input", input, "survival csv")->required();
    cmp->add_option("--config", config_path, "pipeline config (json)");
    auto* cmp_seed = cmp->add_option("--seed", seed, "rng seed");
    cmp->add_option("--horizon", horizon, "evaluation horizon");
    cmp->add_option("--out", out_path, "comparison report (json)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    StageGuard stage;
    try {
        if (synth->parsed())
            return cmd_synth(config_path, seed, synth_seed->count() > 0, out_path, stage);
        if (run->parsed())
            return cmd_run(input, config_path, seed, run_seed->count() > 0, threads,
                           out_path, stage);
        if (stk->parsed()) return cmd_stack(input, gamma, seed, out_path, stage);
        if (sel->parsed())
            return cmd_select(input, method, k, horizon, seed, out_path, stage);
        if (trn->parsed())
            return cmd_train(input, model_kind, config_path, seed,
                             trn_seed->count() > 0, out_path, stage);
        if (prd->parsed())
            return cmd_predict(model_path, input, t_max, n_points, n_mc, seed, out_path,
                               stage);
        if (evl->parsed())
            return cmd_evaluate(model_path, train_path, test_path, gamma, n_mc, seed,
                                out_path, stage);
        if (exp->parsed()) return cmd_explain(model_path, out_path, stage);
        if (cmp->parsed())
            return cmd_compare(input, config_path, seed, cmp_seed->count() > 0, horizon,
                               out_path, stage);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error in stage `" << stage.name << "`: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
