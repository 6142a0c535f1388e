// Structured-text (JSON) serialization for models, specs and reports.
// Model documents carry a schema tag and are versioned.
#pragma once

#include <fstream>
#include <nlohmann/json.hpp>
#include <stdexcept>
#include <string>

#include "survstack/cox.hpp"
#include "survstack/csv.hpp"
#include "survstack/feature_select.hpp"
#include "survstack/gam.hpp"
#include "survstack/logistic.hpp"
#include "survstack/metrics.hpp"
#include "survstack/synth.hpp"

namespace survstack {

using json = nlohmann::ordered_json;

inline constexpr const char* kModelSchema = "survstack-model-v1";

// ---- GAM ----

inline json gam_to_json(const GamModel& model) {
    json j;
    j["schema"] = kModelSchema;
    j["kind"] = "gam";
    j["intercept"] = model.intercept;
    j["feature_names"] = model.feature_names;
    j["cuts"] = model.cuts;
    j["observed_min"] = model.observed_min;
    j["observed_max"] = model.observed_max;
    j["main_effects"] = model.main_effects;
    j["bin_weights"] = model.bin_weights;
    json inters = json::array();
    for (const auto& inter : model.interactions) {
        json ji;
        ji["feature_a"] = inter.feature_a;
        ji["feature_b"] = inter.feature_b;
        ji["table"] = inter.table;
        ji["cell_weight"] = inter.cell_weight;
        inters.push_back(std::move(ji));
    }
    j["interactions"] = std::move(inters);
    j["training"] = {{"rounds_used", model.rounds_used},
                     {"interaction_rounds_used", model.interaction_rounds_used},
                     {"learning_rate", model.learning_rate}};
    return j;
}

inline GamModel gam_from_json(const json& j) {
    if (j.at("schema") != kModelSchema || j.at("kind") != "gam")
        throw std::runtime_error("gam_from_json: wrong schema or kind");
    GamModel model;
    model.intercept = j.at("intercept").get<double>();
    model.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    model.cuts = j.at("cuts").get<std::vector<std::vector<double>>>();
    model.observed_min = j.at("observed_min").get<std::vector<double>>();
    model.observed_max = j.at("observed_max").get<std::vector<double>>();
    model.main_effects = j.at("main_effects").get<std::vector<std::vector<double>>>();
    model.bin_weights = j.at("bin_weights").get<std::vector<std::vector<double>>>();
    for (const auto& ji : j.at("interactions")) {
        GamInteraction inter;
        inter.feature_a = ji.at("feature_a").get<std::size_t>();
        inter.feature_b = ji.at("feature_b").get<std::size_t>();
        inter.table = ji.at("table").get<std::vector<double>>();
        inter.cell_weight = ji.at("cell_weight").get<std::vector<double>>();
        model.interactions.push_back(std::move(inter));
    }
    const auto& tr = j.at("training");
    model.rounds_used = tr.at("rounds_used").get<int>();
    model.interaction_rounds_used = tr.at("interaction_rounds_used").get<int>();
    model.learning_rate = tr.at("learning_rate").get<double>();
    return model;
}

// ---- logistic ----

inline json logistic_to_json(const LogisticModel& model) {
    json j;
    j["schema"] = kModelSchema;
    j["kind"] = "logistic";
    j["intercept"] = model.intercept;
    std::vector<double> w(model.weights.data(), model.weights.data() + model.weights.size());
    j["weights"] = w;
    j["l2"] = model.l2;
    return j;
}

inline LogisticModel logistic_from_json(const json& j) {
    if (j.at("schema") != kModelSchema || j.at("kind") != "logistic")
        throw std::runtime_error("logistic_from_json: wrong schema or kind");
    LogisticModel model;
    model.intercept = j.at("intercept").get<double>();
    auto w = j.at("weights").get<std::vector<double>>();
    model.weights = Eigen::Map<const Eigen::VectorXd>(w.data(),
                                                      static_cast<Eigen::Index>(w.size()));
    model.l2 = j.at("l2").get<double>();
    return model;
}

// ---- Cox ----

inline json cox_to_json(const CoxModel& model) {
    json j;
    j["schema"] = kModelSchema;
    j["kind"] = "cox";
    std::vector<double> beta(model.beta.data(), model.beta.data() + model.beta.size());
    j["beta"] = beta;
    j["baseline_cumhaz"] = {{"knots", model.baseline_cumhaz.knots()},
                            {"values", model.baseline_cumhaz.values()}};
    j["ridge"] = model.ridge;
    j["iterations"] = model.iterations;
    j["final_gradient_norm"] = model.final_gradient_norm;
    return j;
}

inline CoxModel cox_from_json(const json& j) {
    if (j.at("schema") != kModelSchema || j.at("kind") != "cox")
        throw std::runtime_error("cox_from_json: wrong schema or kind");
    CoxModel model;
    auto beta = j.at("beta").get<std::vector<double>>();
    model.beta = Eigen::Map<const Eigen::VectorXd>(beta.data(),
                                                   static_cast<Eigen::Index>(beta.size()));
    model.baseline_cumhaz =
        StepFunction(j.at("baseline_cumhaz").at("knots").get<std::vector<double>>(),
                     j.at("baseline_cumhaz").at("values").get<std::vector<double>>(), 0.0);
    model.ridge = j.at("ridge").get<double>();
    model.iterations = j.at("iterations").get<int>();
    model.final_gradient_norm = j.at("final_gradient_norm").get<double>();
    return model;
}

// ---- synthetic spec ----

inline json synth_spec_to_json(const SyntheticSpec& spec) {
    json j;
    j["n"] = spec.n;
    j["d"] = spec.d;
    j["form"] = spec.form == HazardForm::kProportional ? "proportional" : "additive";
    j["lambda0"] = spec.lambda0;
    j["beta"] = spec.beta;
    j["quadratic"] = spec.quadratic;
    j["interaction"] = spec.interaction;
    j["beta0"] = spec.beta0;
    j["weibull_k"] = spec.weibull_k;
    j["censor_rate"] = spec.censor_rate;
    j["admin_cutoff"] = spec.admin_cutoff;
    j["seed"] = spec.seed;
    return j;
}

inline SyntheticSpec synth_spec_from_json(const json& j) {
    SyntheticSpec spec;
    spec.n = j.at("n").get<std::size_t>();
    spec.d = j.at("d").get<std::size_t>();
    const std::string form = j.value("form", "proportional");
    if (form == "proportional") spec.form = HazardForm::kProportional;
    else if (form == "additive") spec.form = HazardForm::kAdditiveNonlinear;
    else throw std::runtime_error("synth spec: unknown form '" + form + "'");
    spec.lambda0 = j.value("lambda0", spec.lambda0);
    spec.beta = j.value("beta", spec.beta);
    spec.quadratic = j.value("quadratic", spec.quadratic);
    spec.interaction = j.value("interaction", spec.interaction);
    spec.beta0 = j.value("beta0", spec.beta0);
    spec.weibull_k = j.value("weibull_k", spec.weibull_k);
    spec.censor_rate = j.value("censor_rate", spec.censor_rate);
    spec.admin_cutoff = j.value("admin_cutoff", spec.admin_cutoff);
    spec.seed = j.value("seed", spec.seed);
    spec.validate();
    return spec;
}

// ---- reports ----

inline json selection_report_to_json(const SelectionResult& result,
                                     const std::vector<std::string>& feature_names) {
    json j;
    j["schema"] = "survstack-selection-v1";
    j["lambda"] = result.lambda;
    json features = json::array();
    for (std::size_t idx : result.selected_features)
        features.push_back(idx < feature_names.size() ? feature_names[idx]
                                                      : std::to_string(idx));
    j["selected_features"] = std::move(features);
    j["selected_indices"] = result.selected_features;
    j["tree_weights"] = result.tree_weights;
    json scores = json::array();
    for (const auto& [g, s] : result.group_scores)
        scores.push_back({{"group", g}, {"score", s}});
    j["group_scores"] = std::move(scores);
    return j;
}

inline json evaluation_report_to_json(const EvaluationReport& report) {
    json j;
    j["schema"] = "survstack-evaluation-v1";
    j["grid"] = report.grid;
    json auc = json::array();
    for (double v : report.auc_per_time)
        auc.push_back(std::isfinite(v) ? json(v) : json(nullptr));
    j["auc_per_time"] = std::move(auc);
    j["mean_auc"] = report.mean_auc;
    j["brier_per_time"] = report.brier_per_time;
    j["integrated_brier"] = report.integrated_brier;
    j["censoring_weight_source"] = report.censoring_weight_source;
    j["warnings"] = report.warnings;
    return j;
}

inline void write_shape_export_csv(std::ostream& out, const GamModel& model) {
    out << "term,bin_low,bin_high,contribution\n";
    for (std::size_t jf = 0; jf < model.n_features(); ++jf) {
        auto s = shape_function(model, jf);
        const std::string name = jf < model.feature_names.size()
                                     ? model.feature_names[jf]
                                     : "f" + std::to_string(jf);
        for (std::size_t b = 0; b < s.contribution.size(); ++b)
            out << name << ',' << format_double(s.bin_low[b]) << ','
                << format_double(s.bin_high[b]) << ','
                << format_double(s.contribution[b]) << '\n';
    }
}

inline void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << j.dump(2) << '\n';
}

inline json read_json_file(const std::string& path, bool allow_comments = false) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    return json::parse(in, nullptr, true, allow_comments);
}

}  // namespace survstack
