// Acceptance gate: ten end-to-end criteria, one pass/fail line each.
// Usage: acceptance [path-to-cli-binary]   (the CLI path enables the
// determinism criterion; it is skipped as a failure when absent).
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "survstack/pipeline.hpp"

using namespace survstack;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what,
            const std::string& detail) {
    std::printf("%s criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion,
                what.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// ---- criterion 1: discrete-time product identity ----
void criterion_1() {
    constexpr double kTol = 1e-12;
    Rng rng(101);
    double worst = 0.0;
    for (int rep = 0; rep < 1000; ++rep) {
        const std::size_t k = 1 + rng.uniform_index(6);
        std::vector<double> support, prob;
        double t = 0.0, total = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            t += rng.uniform(0.1, 2.0);
            support.push_back(t);
            double p = rng.uniform(0.05, 1.0);
            prob.push_back(p);
            total += p;
        }
        for (double& p : prob) p /= total;
        for (std::size_t i = 0; i < k; ++i) {
            // direct tail probability P(T > support[i])
            double tail = 0.0;
            for (std::size_t j = i + 1; j < k; ++j) tail += prob[j];
            const double prod = discrete_tail_product(support, prob, support[i]);
            worst = std::max(worst, std::abs(prod - tail));
        }
    }
    report(1, worst < kTol, "discrete product equals direct tail probability",
           "max |diff| " + format_double(worst) + " over 1000 distributions, tol 1e-12");
}

// ---- criterion 2: Cox recovery + gradient check ----
void criterion_2() {
    int ok_seeds = 0;
    double worst_dev = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        SyntheticSpec spec;
        spec.n = 2000;
        spec.d = 2;
        spec.beta = {1.0, -0.5};
        spec.lambda0 = 0.1;
        spec.weibull_k = 1.5;
        spec.censor_rate = 0.09;  // realized censoring near 30%
        spec.seed = 2000 + seed;
        auto gen = generate(spec);
        auto model = fit_cox(gen.dataset);
        const double d0 = std::abs(model.beta(0) - 1.0);
        const double d1 = std::abs(model.beta(1) + 0.5);
        worst_dev = std::max({worst_dev, d0, d1});
        if (d0 < 0.15 && d1 < 0.15) ++ok_seeds;
    }

    // finite-difference gradient of the Breslow log partial likelihood
    double worst_rel = 0.0;
    Rng rng(77);
    for (int rep = 0; rep < 5; ++rep) {
        SyntheticSpec spec;
        spec.n = 60;
        spec.d = 3;
        spec.beta = {0.5, -0.3, 0.2};
        spec.censor_rate = 0.1;
        spec.seed = 900 + rep;
        auto gen = generate(spec);
        Eigen::VectorXd beta(3);
        for (int j = 0; j < 3; ++j) beta(j) = rng.uniform(-0.5, 0.5);
        std::vector<std::size_t> order(gen.dataset.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return gen.dataset.time(a) > gen.dataset.time(b);
        });
        auto like = detail::cox_partial_likelihood(gen.dataset, order, beta, true);
        const double h = 1e-5;
        for (int j = 0; j < 3; ++j) {
            Eigen::VectorXd bp = beta, bm = beta;
            bp(j) += h;
            bm(j) -= h;
            const double fd = (cox_log_partial_likelihood(gen.dataset, bp) -
                               cox_log_partial_likelihood(gen.dataset, bm)) /
                              (2 * h);
            const double rel = std::abs(like.grad(j) - fd) /
                               std::max(1.0, std::abs(fd));
            worst_rel = std::max(worst_rel, rel);
        }
    }
    const bool pass = ok_seeds >= 9 && worst_rel < 1e-5;
    report(2, pass, "Cox recovers beta=(1.0,-0.5) and gradient matches FD",
           std::to_string(ok_seeds) + "/10 seeds within 0.15 (worst dev " +
               format_double(worst_dev) + "), FD rel err " + format_double(worst_rel));
}

// shared pipeline config for the synthetic comparisons
PipelineConfig base_config(std::uint64_t seed) {
    PipelineConfig pc;
    pc.seed = seed;
    pc.auto_gamma = true;
    pc.gam.max_rounds = 400;
    pc.gam.n_interactions = 2;
    pc.gam.interaction_rounds = 200;
    pc.report_gamma_corrected_brier = false;
    return pc;
}

// ---- criterion 3: GAM vs Cox AUC parity ----
void criterion_3() {
    int gam_wins = 0;
    double nl_gam_sum = 0.0, nl_cox_sum = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        SyntheticSpec spec;
        spec.n = 2000;
        spec.d = 3;
        spec.form = HazardForm::kAdditiveNonlinear;
        spec.beta0 = -3.3;
        spec.beta = {0.0, 0.0, 0.0};
        spec.quadratic = {0.8, 0.8, 0.0};
        spec.interaction = 0.8;
        spec.censor_rate = 0.05;
        spec.seed = 3000 + seed;
        auto gen = generate(spec);

        auto pc = base_config(seed);
        pc.model = "gam";
        const double gam_auc = run_pipeline(gen.dataset, pc).report.mean_auc;
        pc.model = "cox";
        const double cox_auc = run_pipeline(gen.dataset, pc).report.mean_auc;
        nl_gam_sum += gam_auc;
        nl_cox_sum += cox_auc;
        if (gam_auc >= cox_auc + 0.02) ++gam_wins;
    }
    const double nl_gam = nl_gam_sum / 10, nl_cox = nl_cox_sum / 10;

    double ph_gam_sum = 0.0, ph_cox_sum = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        SyntheticSpec spec;
        spec.n = 2000;
        spec.d = 2;
        spec.beta = {1.0, -0.5};
        spec.lambda0 = 0.1;
        spec.censor_rate = 0.09;
        spec.seed = 3100 + seed;
        auto gen = generate(spec);
        auto pc = base_config(seed);
        pc.model = "gam";
        ph_gam_sum += run_pipeline(gen.dataset, pc).report.mean_auc;
        pc.model = "cox";
        ph_cox_sum += run_pipeline(gen.dataset, pc).report.mean_auc;
    }
    const double ph_gam = ph_gam_sum / 10, ph_cox = ph_cox_sum / 10;

    const bool pass = nl_gam >= nl_cox - 0.01 && gam_wins >= 7 &&
                      std::abs(ph_gam - ph_cox) <= 0.03;
    std::ostringstream d;
    d << "nonlinear gam " << format_double(nl_gam) << " vs cox " << format_double(nl_cox)
      << ", wins " << gam_wins << "/10; PH gam " << format_double(ph_gam) << " vs cox "
      << format_double(ph_cox);
    report(3, pass, "stacked GAM matches or beats Cox AUC", d.str());
}

// spec used by the curve-fidelity and estimator-skew criteria
SyntheticSpec curve_spec(std::uint64_t seed) {
    SyntheticSpec spec;
    spec.n = 5000;
    spec.d = 2;
    spec.beta = {0.5, -0.25};
    // constant baseline hazard keeps the observed event-time density close to
    // uniform, which is the regime where a single subsampling rate calibrates
    spec.lambda0 = 0.02;
    spec.weibull_k = 1.0;
    spec.censor_rate = 0.02;
    spec.seed = seed;
    return spec;
}

struct CurveRun {
    double mae = 0.0;
    double median_mc = 0.0, median_discrete = 0.0, median_true = 0.0;
    std::size_t distinct_event_times = 0;
};

CurveRun curve_fidelity_run(std::uint64_t seed) {
    auto gen = generate(curve_spec(8000 + seed));
    auto [train, test] = train_test_split(gen.dataset, 0.2, seed);
    const double gamma = auto_gamma(train);
    auto stacked = stack(train, StackingConfig{gamma, seed});
    auto binned = bin_features(stacked.x(), stacked.n_features(), 64);
    GamConfig gc;
    gc.max_rounds = 400;
    gc.n_interactions = 2;
    gc.interaction_rounds = 200;
    gc.seed = seed;
    auto model = fit_gam(binned, stacked.labels(), gc);

    auto grid = default_metric_grid(test);
    auto curves = predict_curves(model, test, grid, 64, seed, McSampling::kStratified);
    CurveRun out;
    double acc = 0.0;
    std::size_t cnt = 0;
    for (std::size_t i = 0; i < test.size(); ++i)
        for (std::size_t k = 0; k < grid.size(); ++k) {
            acc += std::abs(curves[i].probabilities[k] -
                            gen.oracle.true_survival(test.row(i), grid[k]));
            ++cnt;
        }
    out.mae = acc / static_cast<double>(cnt);

    const auto event_times = train.distinct_event_times();
    out.distinct_event_times = event_times.size();
    std::vector<double> s_mc, s_disc, s_true;
    for (std::size_t i = 0; i < test.size(); ++i) {
        PredictionConfig pc;
        pc.n_mc = 64;
        pc.seed = seed ^ (0x9e3779b97f4a7c15ULL * (i + 1));
        s_mc.push_back(predict_survival_mc(model, test.row(i), 5.0, pc));
        s_disc.push_back(predict_survival_discrete(model, test.row(i), 5.0, event_times));
        s_true.push_back(gen.oracle.true_survival(test.row(i), 5.0));
    }
    out.median_mc = median(s_mc);
    out.median_discrete = median(s_disc);
    out.median_true = median(s_true);
    return out;
}

std::vector<CurveRun> g_curve_runs;  // shared by criteria 4 and 5

void criterion_4() {
    std::vector<double> maes;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        g_curve_runs.push_back(curve_fidelity_run(seed));
        maes.push_back(g_curve_runs.back().mae);
    }
    const double med = median(maes);
    report(4, med < 0.05, "Monte Carlo survival curves track the true survival",
           "10-seed median MAE " + format_double(med) + ", tol 0.05");
}

void criterion_5() {
    int ordered = 0, calibrated = 0;
    std::size_t min_times = SIZE_MAX;
    double worst_cal = 0.0;
    for (const auto& run : g_curve_runs) {
        min_times = std::min(min_times, run.distinct_event_times);
        if (run.median_discrete < run.median_mc) ++ordered;
        const double cal = std::abs(run.median_mc - run.median_true);
        worst_cal = std::max(worst_cal, cal);
        if (cal < 0.05) ++calibrated;
    }
    const bool pass = min_times >= 500 &&
                      ordered == static_cast<int>(g_curve_runs.size()) &&
                      calibrated == static_cast<int>(g_curve_runs.size());
    std::ostringstream d;
    d << "distinct event times >= " << min_times << "; product median below MC median "
      << ordered << "/" << g_curve_runs.size() << "; MC median within 0.05 of truth "
      << calibrated << "/" << g_curve_runs.size() << " (worst "
      << format_double(worst_cal) << ")";
    report(5, pass, "discrete product estimator skews toward 0, MC stays calibrated",
           d.str());
}

// ---- criterion 6: GAM invariants + shape recovery ----
void criterion_6() {
    Rng rng(606);
    const std::size_t n = 4000, d = 3;
    std::vector<double> x(n * d);
    std::vector<char> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) x[i * d + j] = rng.normal();
        labels[i] = rng.bernoulli(logistic(2.0 * x[i * d]));
    }
    auto binned = bin_features(x, d, 64);
    GamConfig gc;
    gc.max_rounds = 400;
    gc.n_interactions = 2;
    gc.interaction_rounds = 100;
    gc.seed = 1;
    auto model = fit_gam(binned, labels, gc);

    bool monotone = true;
    for (std::size_t r = 1; r < model.train_loss_per_round.size(); ++r)
        monotone = monotone &&
                   model.train_loss_per_round[r] <=
                       model.train_loss_per_round[r - 1] + 1e-12;

    double worst_sum = 0.0;
    for (std::size_t i = 0; i < 500; ++i) {
        auto row = std::span<const double>(x.data() + i * d, d);
        auto contribs = model.contributions(row);
        double s = 0.0;
        for (double c : contribs) s += c;
        worst_sum = std::max(worst_sum, std::abs(s - model.score(row)));
    }

    double worst_center = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        double w = 0.0, m = 0.0;
        for (std::size_t b = 0; b < model.main_effects[j].size(); ++b) {
            w += model.bin_weights[j][b];
            m += model.bin_weights[j][b] * model.main_effects[j][b];
        }
        worst_center = std::max(worst_center, std::abs(m / w));
    }

    // shape recovery: f1 should match 2x (centered) on the central 90% of bins.
    // A converged fit matches the per-bin empirical logit, so the sample must be
    // large enough that per-bin label noise sits well below the tolerance.
    const std::size_t ns = 120000, ds = 2;
    Rng rng_s(606);
    std::vector<double> xs(ns * ds);
    std::vector<char> labels_s(ns);
    for (std::size_t i = 0; i < ns; ++i) {
        for (std::size_t j = 0; j < ds; ++j) xs[i * ds + j] = rng_s.normal();
        labels_s[i] = rng_s.bernoulli(logistic(2.0 * xs[i * ds]));
    }
    auto binned_s = bin_features(xs, ds, 24);
    GamConfig gs;
    gs.max_rounds = 1200;
    gs.n_interactions = 0;
    gs.validation_fraction = 0.0;  // run to convergence on the full sample
    gs.seed = 1;
    auto model_s = fit_gam(binned_s, labels_s, gs);
    auto shape = shape_function(model_s, 0);
    const std::size_t nb = shape.contribution.size();
    // target is 2 * E[x1 | bin], centered the same way the model centers
    std::vector<double> bin_sum(nb, 0.0), bin_cnt(nb, 0.0);
    for (std::size_t i = 0; i < ns; ++i) {
        const std::size_t b = binned_s.bin(i, 0);
        bin_sum[b] += xs[i * ds];
        bin_cnt[b] += 1.0;
    }
    double wmean = 0.0, wtot = 0.0;
    std::vector<double> target(nb);
    for (std::size_t b = 0; b < nb; ++b) {
        target[b] = 2.0 * bin_sum[b] / bin_cnt[b];
        wmean += model_s.bin_weights[0][b] * target[b];
        wtot += model_s.bin_weights[0][b];
    }
    wmean /= wtot;
    double worst_shape = 0.0;
    const auto lo_bin = static_cast<std::size_t>(0.05 * static_cast<double>(nb));
    const auto hi_bin = static_cast<std::size_t>(0.95 * static_cast<double>(nb));
    for (std::size_t b = lo_bin; b < hi_bin; ++b)
        worst_shape =
            std::max(worst_shape, std::abs(shape.contribution[b] - (target[b] - wmean)));

    const bool pass =
        monotone && worst_sum <= 1e-12 && worst_center < 1e-8 && worst_shape < 0.15;
    std::ostringstream det;
    det << "loss monotone " << (monotone ? "yes" : "NO") << ", contribution sum err "
        << format_double(worst_sum) << ", centering " << format_double(worst_center)
        << ", shape dev " << format_double(worst_shape);
    report(6, pass, "GAM invariants and logistic(2x1) shape recovery", det.str());
}

// ---- criterion 7: feature selection ----
void criterion_7() {
    int good_seeds = 0;
    std::string per_seed;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Rng rng(700 + seed);
        const std::size_t n = 1500, d = 50;
        std::vector<double> x(n * d);
        std::vector<char> labels(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < d; ++j) x[i * d + j] = rng.normal();
            double score = 0.0;
            for (std::size_t j = 0; j < 5; ++j)
                score += (j % 2 ? -1.2 : 1.2) * x[i * d + j];
            labels[i] = rng.bernoulli(logistic(score));
        }
        SelectConfig sc;
        sc.forest.seed = seed;
        auto sel = select_features(x, d, labels, std::vector<FeatureKind>(d), 10, sc);
        int informative = 0;
        for (std::size_t j : sel.selected_features) informative += (j < 5);
        per_seed += std::to_string(informative);
        if (informative >= 4) ++good_seeds;
    }

    // coordinate-descent objective monotone per sweep; lambda_max kills weights
    Rng rng(711);
    const std::size_t n = 400, d = 6;
    std::vector<double> x(n * d);
    std::vector<char> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) x[i * d + j] = rng.normal();
        labels[i] = rng.bernoulli(logistic(x[i * d] - x[i * d + 1]));
    }
    ForestConfig fc;
    fc.n_trees = 30;
    auto forest = grow_forest(x, d, labels, fc);
    const double lmax = lasso_lambda_max(forest, labels);
    bool cd_monotone = true;
    for (double lambda : {0.0, lmax * 0.1, lmax * 0.5}) {
        std::vector<double> trace;
        (void)lasso_prune(forest, labels, lambda, nullptr, &trace);
        for (std::size_t s = 1; s < trace.size(); ++s)
            cd_monotone = cd_monotone && trace[s] <= trace[s - 1] + 1e-12;
    }
    bool lmax_kills = true;
    for (double w : lasso_prune(forest, labels, lmax)) lmax_kills = lmax_kills && w == 0.0;
    for (double w : lasso_prune(forest, labels, lmax * 1.5))
        lmax_kills = lmax_kills && w == 0.0;

    const bool pass = good_seeds >= 4 && cd_monotone && lmax_kills;
    report(7, pass, "ControlBurn-style selection finds the informative features",
           "informative-of-5 per seed [" + per_seed + "], >=4 in " +
               std::to_string(good_seeds) + "/5 seeds; CD monotone " +
               (cd_monotone ? "yes" : "NO") + "; lambda_max zeroes weights " +
               (lmax_kills ? "yes" : "NO"));
}

// ---- criterion 8: metric sanity ----
void criterion_8() {
    bool ok = true;
    std::string detail;

    {  // perfect ordering: risk = -T on uncensored data
        Rng rng(808);
        const std::size_t n = 40;
        std::vector<double> times, x(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) times.push_back(rng.uniform(1.0, 10.0));
        SurvivalDataset data(x, 1, times, std::vector<char>(n, 1), {"x1"});
        std::vector<double> risk;
        for (double t : times) risk.push_back(-t);
        auto grid = default_metric_grid(data);
        auto auc = cumulative_dynamic_auc(data, data, risk, grid);
        for (double a : auc.per_time)
            if (std::isfinite(a) && a != 1.0) ok = false;
        if (!ok) detail += "perfect ordering != 1; ";

        auto auc_const =
            cumulative_dynamic_auc(data, data, std::vector<double>(n, 3.0), grid);
        for (double a : auc_const.per_time)
            if (std::isfinite(a) && a != 0.5) {
                ok = false;
                detail += "constant-score per-time AUC != 0.5; ";
                break;
            }
        // the event-weighted mean accumulates rounding over the grid
        if (std::abs(auc_const.mean_auc - 0.5) > 1e-12) {
            ok = false;
            detail += "constant-score mean AUC off 0.5; ";
        }
    }

    {  // no-censoring Brier equals the unweighted hand oracle
        Rng rng(809);
        for (int rep = 0; rep < 20; ++rep) {
            const std::size_t n = 3 + rng.uniform_index(18);
            std::vector<double> times, x(n, 0.0), preds;
            for (std::size_t i = 0; i < n; ++i) {
                times.push_back(rng.uniform(1.0, 10.0));
                preds.push_back(rng.uniform());
            }
            SurvivalDataset data(x, 1, times, std::vector<char>(n, 1), {"x1"});
            const double t = rng.uniform(2.0, 9.0);
            double oracle = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double status = times[i] > t ? 1.0 : 0.0;  // survival status
                oracle += (status - preds[i]) * (status - preds[i]);
            }
            oracle /= static_cast<double>(n);
            const double bs = brier_score(data, data, preds, t);
            if (std::abs(bs - oracle) > 1e-12) {
                ok = false;
                detail += "Brier oracle mismatch; ";
                break;
            }
        }
    }

    {  // AUC invariance under strictly increasing transforms
        Rng rng(810);
        for (int rep = 0; rep < 200 && ok; ++rep) {
            const std::size_t n = 5 + rng.uniform_index(20);
            std::vector<double> times, x(n, 0.0), risk;
            std::vector<char> events;
            for (std::size_t i = 0; i < n; ++i) {
                times.push_back(rng.uniform(1.0, 10.0));
                events.push_back(rng.bernoulli(0.8));
                risk.push_back(rng.uniform(-2.0, 2.0));
            }
            bool any_event = false;
            for (char e : events) any_event = any_event || e;
            if (!any_event) events[0] = 1;
            SurvivalDataset data(x, 1, times, events, {"x1"});
            std::vector<double> grid = {3.0, 5.0, 7.0};
            AucResult a1, a2;
            try {
                a1 = cumulative_dynamic_auc(data, data, risk, grid);
            } catch (const std::exception&) {
                continue;  // no valid grid times for this draw
            }
            std::vector<double> transformed;
            for (double r : risk) transformed.push_back(std::exp(2.0 * r) + 1.0);
            a2 = cumulative_dynamic_auc(data, data, transformed, grid);
            for (std::size_t k = 0; k < grid.size(); ++k) {
                const bool f1 = std::isfinite(a1.per_time[k]);
                const bool f2 = std::isfinite(a2.per_time[k]);
                if (f1 != f2 || (f1 && std::abs(a1.per_time[k] - a2.per_time[k]) > 1e-12))
                    ok = false;
            }
            if (!ok) detail += "transform invariance violated; ";
        }
    }

    report(8, ok, "metric sanity: perfect/constant AUC, Brier oracle, invariance",
           ok ? "all checks exact" : detail);
}

// ---- criterion 9: stacking exactness ----
void criterion_9() {
    bool ok = true;
    Rng rng(909);
    for (int rep = 0; rep < 50 && ok; ++rep) {
        const std::size_t n = 2 + rng.uniform_index(12);
        std::vector<double> x, times;
        std::vector<char> events;
        bool any_event = false;
        for (std::size_t i = 0; i < n; ++i) {
            x.push_back(rng.normal());
            times.push_back(1.0 + rng.uniform_index(6));  // ties likely
            events.push_back(rng.bernoulli(0.6));
            any_event = any_event || events.back();
        }
        if (!any_event) events[0] = 1;
        SurvivalDataset data(x, 1, times, events, {"x1"});

        auto stacked = stack(data, StackingConfig{1.0, rep});
        // brute-force enumeration of Alg. 1 at gamma = 1
        std::vector<std::tuple<double, double, double, int>> expect, got;
        for (double t : data.distinct_event_times()) {
            for (std::size_t i = 0; i < n; ++i)
                if (events[i] && times[i] == t) expect.emplace_back(x[i], t, 1.0, 1);
            for (std::size_t j = 0; j < n; ++j)
                if (times[j] > t) expect.emplace_back(x[j], t, 0.0, 0);
        }
        for (std::size_t r = 0; r < stacked.size(); ++r)
            got.emplace_back(stacked.row(r)[0], stacked.row(r)[1],
                             stacked.label(r) ? 1.0 : 0.0, stacked.label(r) ? 1 : 0);
        std::sort(expect.begin(), expect.end());
        std::sort(got.begin(), got.end());
        ok = ok && expect == got;

        // positives invariant to gamma and seed
        auto tiny = stack(data, StackingConfig{1e-9, 7 * rep + 1});
        std::size_t n_pos = 0;
        for (std::size_t i = 0; i < n; ++i) n_pos += (events[i] != 0);
        ok = ok && tiny.n_positives() == n_pos && stacked.n_positives() == n_pos;
    }
    report(9, ok, "gamma=1 stacking matches brute-force risk-set enumeration",
           ok ? "50/50 datasets exact, positives gamma-invariant" : "mismatch found");
}

// ---- criterion 10: CLI determinism ----
void criterion_10(const char* cli) {
    if (!cli) {
        report(10, false, "cmd run determinism", "no CLI binary path given");
        return;
    }
    const fs::path dir = fs::temp_directory_path() / "survstack_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::string data = (dir / "data.csv").string();
    const std::string cfg = (dir / "cfg.json").string();
    {
        std::ofstream out(cfg);
        out << "{\n  // pipeline defaults, fixed seed\n  \"gamma\": \"auto\",\n"
               "  \"seed\": 11,\n  \"max_rounds\": 120,\n  \"interactions\": 2\n}\n";
    }
    {
        std::ofstream out(dir / "spec.json");
        out << "{\"n\": 800, \"d\": 2, \"beta\": [0.8, -0.4], \"seed\": 5}\n";
    }
    auto run = [&](const std::string& cmd) {
        return std::system((cmd + " > /dev/null 2>&1").c_str()) == 0;
    };
    bool ok = run(std::string(cli) + " synth --config " + (dir / "spec.json").string() +
                  " --out " + data);
    for (const char* which : {"a", "b"})
        ok = ok && run(std::string(cli) + " run --input " + data + " --config " + cfg +
                       " --out " + (dir / which).string());
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    std::string diff;
    for (const char* f :
         {"run_log.json", "model.json", "evaluation.json", "curves.csv", "shapes.csv"}) {
        const auto a = slurp(dir / "a" / f), b = slurp(dir / "b" / f);
        if (a.empty() || a != b) {
            ok = false;
            diff += std::string(f) + " ";
        }
    }
    report(10, ok, "identical config+seed gives byte-identical outputs",
           ok ? "all report files match" : "differs: " + diff);
    fs::remove_all(dir);
}

}  // namespace

int main(int argc, char** argv) {
    const char* cli = argc > 1 ? argv[1] : nullptr;
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10(cli);
    if (g_failures) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
