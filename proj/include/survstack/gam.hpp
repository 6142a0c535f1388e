// Binary-classification generalized additive model with pairwise
// interactions, fit by cyclic gradient boosting on shallow binned trees.
//
// Stage 1 boosts per-feature shape functions: each round visits every
// feature in order and adds a damped Newton step on a <=2-cut partition
// of that feature's bins. Stage 2 selects interaction pairs by the gain
// of a 2x2 split grid on the stage-1 residuals and boosts their 2-D
// tables the same way. Stage 3 centers every term under the training bin
// distribution so main effects have zero weighted mean and interaction
// tables have zero weighted row and column means.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "survstack/binning.hpp"
#include "survstack/prediction.hpp"
#include "survstack/rng.hpp"

namespace survstack {

inline double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

inline double logit(double p) {
    p = std::min(std::max(p, 1e-12), 1.0 - 1e-12);
    return std::log(p / (1.0 - p));
}

// per-row logistic log-loss at score s with label y
inline double logloss_term(double s, double y) {
    // log(1 + e^s) - y*s, computed stably
    double m = std::max(s, 0.0);
    return m + std::log(std::exp(-m) + std::exp(s - m)) - y * s;
}

struct GamConfig {
    int max_bins = 64;
    double learning_rate = 0.05;
    int max_rounds = 5000;
    int n_interactions = 20;
    int interaction_rounds = 1000;
    double validation_fraction = 0.15;
    int early_stop_patience = 50;
    std::size_t pair_scan_row_cap = 50000;
    std::uint64_t seed = 0;
};

struct GamInteraction {
    std::size_t feature_a = 0;
    std::size_t feature_b = 0;
    std::vector<double> table;        // n_bins(a) x n_bins(b), row-major
    std::vector<double> cell_weight;  // training counts, same shape
};

class GamModel final : public HazardClassifier {
  public:
    double intercept = 0.0;
    std::vector<std::vector<double>> main_effects;   // per feature, per bin
    std::vector<std::vector<double>> bin_weights;    // training bin counts
    std::vector<std::vector<double>> cuts;           // per feature bin cut points
    std::vector<double> observed_min, observed_max;  // per feature, for export
    std::vector<GamInteraction> interactions;
    std::vector<std::string> feature_names;

    // training metadata
    int rounds_used = 0;
    int interaction_rounds_used = 0;
    double learning_rate = 0.0;
    std::vector<double> train_loss_per_round;  // stage-1 trajectory

    std::size_t n_features() const { return main_effects.size(); }

    std::uint16_t bin_of(std::size_t j, double v) const {
        return BinnedMatrix::bin_index(cuts[j], v);
    }

    // additive log-odds score; the model's explanation is this sum
    double score(std::span<const double> x) const {
        if (x.size() != n_features())
            throw std::invalid_argument("GamModel: feature dimension mismatch");
        double s = intercept;
        std::vector<std::uint16_t> b(x.size());
        for (std::size_t j = 0; j < x.size(); ++j) {
            b[j] = bin_of(j, x[j]);
            s += main_effects[j][b[j]];
        }
        for (const auto& inter : interactions) {
            const std::size_t nb = main_effects[inter.feature_b].size();
            s += inter.table[b[inter.feature_a] * nb + b[inter.feature_b]];
        }
        return s;
    }

    double predict_probability(std::span<const double> x) const override {
        return logistic(score(x));
    }

    // per-term contributions for one row: [intercept, mains..., interactions...]
    std::vector<double> contributions(std::span<const double> x) const {
        std::vector<double> out;
        out.push_back(intercept);
        std::vector<std::uint16_t> b(x.size());
        for (std::size_t j = 0; j < x.size(); ++j) {
            b[j] = bin_of(j, x[j]);
            out.push_back(main_effects[j][b[j]]);
        }
        for (const auto& inter : interactions) {
            const std::size_t nb = main_effects[inter.feature_b].size();
            out.push_back(inter.table[b[inter.feature_a] * nb + b[inter.feature_b]]);
        }
        return out;
    }
};

struct ShapeFunction {
    std::vector<double> bin_low, bin_high, contribution;
};

inline ShapeFunction shape_function(const GamModel& model, std::size_t feature) {
    if (feature >= model.n_features())
        throw std::out_of_range("shape_function: feature index out of range");
    ShapeFunction s;
    const auto& eff = model.main_effects[feature];
    const auto& cuts = model.cuts[feature];
    for (std::size_t b = 0; b < eff.size(); ++b) {
        s.bin_low.push_back(b == 0 ? model.observed_min[feature] : cuts[b - 1]);
        s.bin_high.push_back(b == cuts.size() ? model.observed_max[feature] : cuts[b]);
        s.contribution.push_back(eff[b]);
    }
    return s;
}

namespace detail {

struct SegmentFit {
    // up to 3 segments over the bin axis: [0, c1], (c1, c2], (c2, B)
    int cut1 = -1, cut2 = -1;  // cut after these bin indices; -1 = unused
    double delta[3] = {0, 0, 0};
    double gain = 0.0;
};

// Exhaustive search over <=2 cuts; Newton gain sum G^2/(H+eps),
// ties broken toward the lowest cut indices.
inline SegmentFit best_segments(const std::vector<double>& g, const std::vector<double>& h) {
    const int B = static_cast<int>(g.size());
    std::vector<double> pg(static_cast<std::size_t>(B) + 1, 0.0),
        ph(static_cast<std::size_t>(B) + 1, 0.0);
    for (int b = 0; b < B; ++b) {
        pg[b + 1] = pg[b] + g[b];
        ph[b + 1] = ph[b] + h[b];
    }
    constexpr double kEps = 1e-12;
    auto seg_gain = [&](int lo, int hi) {  // bins [lo, hi)
        double G = pg[hi] - pg[lo], H = ph[hi] - ph[lo];
        return G * G / (H + kEps);
    };
    auto seg_delta = [&](int lo, int hi) {
        double G = pg[hi] - pg[lo], H = ph[hi] - ph[lo];
        double d = G / (H + kEps);
        return std::min(std::max(d, -4.0), 4.0);
    };
    SegmentFit best;
    best.gain = -1.0;
    for (int c1 = 0; c1 < B - 1; ++c1) {
        // single cut after bin c1
        double gain2 = seg_gain(0, c1 + 1) + seg_gain(c1 + 1, B);
        if (gain2 > best.gain) {
            best.gain = gain2;
            best.cut1 = c1;
            best.cut2 = -1;
            best.delta[0] = seg_delta(0, c1 + 1);
            best.delta[1] = seg_delta(c1 + 1, B);
            best.delta[2] = 0.0;
        }
        for (int c2 = c1 + 1; c2 < B - 1; ++c2) {
            double gain3 =
                seg_gain(0, c1 + 1) + seg_gain(c1 + 1, c2 + 1) + seg_gain(c2 + 1, B);
            if (gain3 > best.gain) {
                best.gain = gain3;
                best.cut1 = c1;
                best.cut2 = c2;
                best.delta[0] = seg_delta(0, c1 + 1);
                best.delta[1] = seg_delta(c1 + 1, c2 + 1);
                best.delta[2] = seg_delta(c2 + 1, B);
            }
        }
    }
    if (best.gain < 0.0) {  // single bin: plain Newton step
        best.gain = seg_gain(0, B);
        best.cut1 = -1;
        best.delta[0] = seg_delta(0, B);
    }
    return best;
}

inline int segment_of(const SegmentFit& fit, int bin) {
    if (fit.cut1 < 0) return 0;
    if (bin <= fit.cut1) return 0;
    if (fit.cut2 < 0 || bin <= fit.cut2) return 1;
    return 2;
}

}  // namespace detail

inline GamModel fit_gam(const BinnedMatrix& binned, const std::vector<char>& labels,
                        const GamConfig& config) {
    const std::size_t n = binned.n_rows();
    const std::size_t d = binned.n_features();
    if (labels.size() != n) throw std::invalid_argument("fit_gam: label size mismatch");
    {
        std::size_t pos = 0;
        for (char y : labels) pos += (y != 0);
        if (pos == 0 || pos == n)
            throw std::invalid_argument("fit_gam: labels must contain both classes");
    }

    // train/validation split for early stopping
    std::vector<std::size_t> train_rows, val_rows;
    {
        Rng rng(config.seed);
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        for (std::size_t i = n; i > 1; --i)
            std::swap(order[i - 1], order[rng.uniform_index(i)]);
        const auto n_val = static_cast<std::size_t>(
            config.validation_fraction * static_cast<double>(n));
        val_rows.assign(order.begin(), order.begin() + static_cast<long>(n_val));
        train_rows.assign(order.begin() + static_cast<long>(n_val), order.end());
        // early stopping needs both classes on both sides; fall back to
        // no validation split otherwise
        auto has_both = [&](const std::vector<std::size_t>& rows) {
            bool p = false, q = false;
            for (std::size_t i : rows) (labels[i] ? p : q) = true;
            return p && q;
        };
        if (n_val == 0 || !has_both(train_rows) || !has_both(val_rows)) {
            train_rows.resize(n);
            std::iota(train_rows.begin(), train_rows.end(), 0);
            val_rows.clear();
        }
    }

    GamModel model;
    model.learning_rate = config.learning_rate;
    model.main_effects.resize(d);
    model.cuts.resize(d);
    model.observed_min.resize(d);
    model.observed_max.resize(d);
    model.bin_weights.resize(d);
    for (std::size_t j = 0; j < d; ++j) {
        model.main_effects[j].assign(binned.n_bins(j), 0.0);
        model.cuts[j] = binned.cuts(j);
        model.observed_min[j] = binned.observed_min(j);
        model.observed_max[j] = binned.observed_max(j);
        model.bin_weights[j].assign(binned.n_bins(j), 0.0);
        for (std::size_t i = 0; i < n; ++i) model.bin_weights[j][binned.bin(i, j)] += 1.0;
    }

    double prevalence = 0.0;
    for (char y : labels) prevalence += (y != 0);
    prevalence /= static_cast<double>(n);
    model.intercept = logit(prevalence);

    std::vector<double> scores(n, model.intercept);
    std::vector<double> probs(n);
    auto refresh_probs = [&] {
        for (std::size_t i = 0; i < n; ++i) probs[i] = logistic(scores[i]);
    };
    refresh_probs();

    auto loss_over = [&](const std::vector<std::size_t>& rows) {
        double l = 0.0;
        for (std::size_t i : rows) l += logloss_term(scores[i], labels[i] ? 1.0 : 0.0);
        return rows.empty() ? 0.0 : l / static_cast<double>(rows.size());
    };

    // Applies per-bin deltas for one feature, halving the step if the
    // training loss would increase; keeps the per-round loss monotone.
    std::vector<double> delta_per_bin;
    auto guarded_apply = [&](std::size_t j, std::vector<double>& effect_vec) {
        for (int halvings = 0; halvings < 20; ++halvings) {
            double dloss = 0.0;
            for (std::size_t i : train_rows) {
                double delta = delta_per_bin[binned.bin(i, j)];
                if (delta == 0.0) continue;
                double y = labels[i] ? 1.0 : 0.0;
                dloss += logloss_term(scores[i] + delta, y) - logloss_term(scores[i], y);
            }
            if (dloss <= 0.0) {
                for (std::size_t b = 0; b < effect_vec.size(); ++b)
                    effect_vec[b] += delta_per_bin[b];
                for (std::size_t i = 0; i < n; ++i) {
                    scores[i] += delta_per_bin[binned.bin(i, j)];
                    probs[i] = logistic(scores[i]);
                }
                return;
            }
            for (double& v : delta_per_bin) v *= 0.5;
        }
    };

    // ---- stage 1: cyclic boosting of main effects ----
    double best_val = std::numeric_limits<double>::infinity();
    int patience = 0;
    std::vector<std::vector<double>> best_effects = model.main_effects;
    int best_round = 0;
    std::vector<double> g, h;
    for (int round = 0; round < config.max_rounds; ++round) {
        for (std::size_t j = 0; j < d; ++j) {
            const std::size_t nb = binned.n_bins(j);
            g.assign(nb, 0.0);
            h.assign(nb, 0.0);
            for (std::size_t i : train_rows) {
                const auto b = binned.bin(i, j);
                g[b] += (labels[i] ? 1.0 : 0.0) - probs[i];
                h[b] += probs[i] * (1.0 - probs[i]);
            }
            auto fit = detail::best_segments(g, h);
            delta_per_bin.assign(nb, 0.0);
            for (std::size_t b = 0; b < nb; ++b)
                delta_per_bin[b] = config.learning_rate *
                                   fit.delta[detail::segment_of(fit, static_cast<int>(b))];
            guarded_apply(j, model.main_effects[j]);
        }
        model.train_loss_per_round.push_back(loss_over(train_rows));
        model.rounds_used = round + 1;
        if (!val_rows.empty()) {
            double vl = loss_over(val_rows);
            if (vl < best_val - 1e-12) {
                best_val = vl;
                best_effects = model.main_effects;
                best_round = round + 1;
                patience = 0;
            } else if (++patience >= config.early_stop_patience) {
                break;
            }
        }
    }
    if (!val_rows.empty()) {
        model.main_effects = best_effects;
        model.rounds_used = best_round;
        // rebuild scores from the restored effects
        for (std::size_t i = 0; i < n; ++i) {
            double s = model.intercept;
            for (std::size_t j = 0; j < d; ++j)
                s += model.main_effects[j][binned.bin(i, j)];
            scores[i] = s;
        }
        refresh_probs();
    }

    // ---- stage 2: interaction selection and boosting ----
    const std::size_t max_pairs = d >= 2 ? d * (d - 1) / 2 : 0;
    const int n_inter =
        static_cast<int>(std::min<std::size_t>(config.n_interactions, max_pairs));
    if (n_inter > 0 && config.interaction_rounds > 0) {
        // residuals on a capped subsample of the training rows
        std::vector<std::size_t> scan_rows = train_rows;
        if (scan_rows.size() > config.pair_scan_row_cap) {
            Rng rng(config.seed ^ 0x5ca1ab1eULL);
            for (std::size_t i = scan_rows.size(); i > 1; --i)
                std::swap(scan_rows[i - 1], scan_rows[rng.uniform_index(i)]);
            scan_rows.resize(config.pair_scan_row_cap);
        }
        struct PairScore {
            double gain;
            std::size_t a, b;
        };
        std::vector<PairScore> ranked;
        for (std::size_t a = 0; a + 1 < d; ++a) {
            for (std::size_t b = a + 1; b < d; ++b) {
                const std::size_t na = binned.n_bins(a), nb = binned.n_bins(b);
                std::vector<double> cnt(na * nb, 0.0), sum(na * nb, 0.0);
                double tot_cnt = 0.0, tot_sum = 0.0;
                for (std::size_t i : scan_rows) {
                    const std::size_t cell = binned.bin(i, a) * nb + binned.bin(i, b);
                    const double r = (labels[i] ? 1.0 : 0.0) - probs[i];
                    cnt[cell] += 1.0;
                    sum[cell] += r;
                    tot_cnt += 1.0;
                    tot_sum += r;
                }
                // prefix sums over the 2-D grid
                std::vector<double> pc((na + 1) * (nb + 1), 0.0),
                    ps((na + 1) * (nb + 1), 0.0);
                for (std::size_t i = 0; i < na; ++i)
                    for (std::size_t k = 0; k < nb; ++k) {
                        pc[(i + 1) * (nb + 1) + k + 1] = cnt[i * nb + k] +
                                                         pc[i * (nb + 1) + k + 1] +
                                                         pc[(i + 1) * (nb + 1) + k] -
                                                         pc[i * (nb + 1) + k];
                        ps[(i + 1) * (nb + 1) + k + 1] = sum[i * nb + k] +
                                                         ps[i * (nb + 1) + k + 1] +
                                                         ps[(i + 1) * (nb + 1) + k] -
                                                         ps[i * (nb + 1) + k];
                    }
                auto rect = [&](const std::vector<double>& p, std::size_t i0, std::size_t i1,
                                std::size_t k0, std::size_t k1) {
                    return p[i1 * (nb + 1) + k1] - p[i0 * (nb + 1) + k1] -
                           p[i1 * (nb + 1) + k0] + p[i0 * (nb + 1) + k0];
                };
                double base = tot_cnt > 0 ? tot_sum * tot_sum / tot_cnt : 0.0;
                double best_gain = 0.0;
                for (std::size_t ca = 1; ca < na; ++ca)
                    for (std::size_t cb = 1; cb < nb; ++cb) {
                        double gain = 0.0;
                        for (int q = 0; q < 4; ++q) {
                            std::size_t i0 = (q & 1) ? ca : 0, i1 = (q & 1) ? na : ca;
                            std::size_t k0 = (q & 2) ? cb : 0, k1 = (q & 2) ? nb : cb;
                            double c = rect(pc, i0, i1, k0, k1);
                            double s = rect(ps, i0, i1, k0, k1);
                            if (c > 0) gain += s * s / c;
                        }
                        best_gain = std::max(best_gain, gain - base);
                    }
                ranked.push_back(PairScore{best_gain, a, b});
            }
        }
        std::sort(ranked.begin(), ranked.end(), [](const PairScore& l, const PairScore& r) {
            if (l.gain != r.gain) return l.gain > r.gain;
            if (l.a != r.a) return l.a < r.a;
            return l.b < r.b;
        });
        ranked.resize(static_cast<std::size_t>(n_inter));

        for (const auto& p : ranked) {
            GamInteraction inter;
            inter.feature_a = p.a;
            inter.feature_b = p.b;
            const std::size_t na = binned.n_bins(p.a), nb = binned.n_bins(p.b);
            inter.table.assign(na * nb, 0.0);
            inter.cell_weight.assign(na * nb, 0.0);
            for (std::size_t i = 0; i < n; ++i)
                inter.cell_weight[binned.bin(i, p.a) * nb + binned.bin(i, p.b)] += 1.0;
            model.interactions.push_back(std::move(inter));
        }

        // cyclic boosting of the 2-D tables on the stage-1 residuals
        best_val = val_rows.empty() ? 0.0 : loss_over(val_rows);
        auto best_tables = model.interactions;
        int best_iround = 0;
        patience = 0;
        std::vector<double> dtab;
        for (int round = 0; round < config.interaction_rounds; ++round) {
            for (auto& inter : model.interactions) {
                const std::size_t na = binned.n_bins(inter.feature_a);
                const std::size_t nb = binned.n_bins(inter.feature_b);
                std::vector<double> gc(na * nb, 0.0), hc(na * nb, 0.0);
                for (std::size_t i : train_rows) {
                    const std::size_t cell =
                        binned.bin(i, inter.feature_a) * nb + binned.bin(i, inter.feature_b);
                    gc[cell] += (labels[i] ? 1.0 : 0.0) - probs[i];
                    hc[cell] += probs[i] * (1.0 - probs[i]);
                }
                // best 2x2 quadrant split via 2-D prefix sums
                std::vector<double> pg((na + 1) * (nb + 1), 0.0),
                    ph((na + 1) * (nb + 1), 0.0);
                for (std::size_t i = 0; i < na; ++i)
                    for (std::size_t k = 0; k < nb; ++k) {
                        pg[(i + 1) * (nb + 1) + k + 1] = gc[i * nb + k] +
                                                         pg[i * (nb + 1) + k + 1] +
                                                         pg[(i + 1) * (nb + 1) + k] -
                                                         pg[i * (nb + 1) + k];
                        ph[(i + 1) * (nb + 1) + k + 1] = hc[i * nb + k] +
                                                         ph[i * (nb + 1) + k + 1] +
                                                         ph[(i + 1) * (nb + 1) + k] -
                                                         ph[i * (nb + 1) + k];
                    }
                auto rect = [&](const std::vector<double>& p, std::size_t i0, std::size_t i1,
                                std::size_t k0, std::size_t k1) {
                    return p[i1 * (nb + 1) + k1] - p[i0 * (nb + 1) + k1] -
                           p[i1 * (nb + 1) + k0] + p[i0 * (nb + 1) + k0];
                };
                double best_gain = -1.0;
                std::size_t bca = 1, bcb = 1;
                for (std::size_t ca = 1; ca < na; ++ca)
                    for (std::size_t cb = 1; cb < nb; ++cb) {
                        double gain = 0.0;
                        for (int q = 0; q < 4; ++q) {
                            std::size_t i0 = (q & 1) ? ca : 0, i1 = (q & 1) ? na : ca;
                            std::size_t k0 = (q & 2) ? cb : 0, k1 = (q & 2) ? nb : cb;
                            double G = rect(pg, i0, i1, k0, k1);
                            double H = rect(ph, i0, i1, k0, k1);
                            gain += G * G / (H + 1e-12);
                        }
                        if (gain > best_gain) {
                            best_gain = gain;
                            bca = ca;
                            bcb = cb;
                        }
                    }
                if (best_gain < 0.0) continue;
                dtab.assign(na * nb, 0.0);
                for (int q = 0; q < 4; ++q) {
                    std::size_t i0 = (q & 1) ? bca : 0, i1 = (q & 1) ? na : bca;
                    std::size_t k0 = (q & 2) ? bcb : 0, k1 = (q & 2) ? nb : bcb;
                    double G = rect(pg, i0, i1, k0, k1);
                    double H = rect(ph, i0, i1, k0, k1);
                    double delta = std::min(std::max(G / (H + 1e-12), -4.0), 4.0) *
                                   config.learning_rate;
                    for (std::size_t i = i0; i < i1; ++i)
                        for (std::size_t k = k0; k < k1; ++k) dtab[i * nb + k] = delta;
                }
                // guarded apply on the table
                bool applied = false;
                for (int halvings = 0; halvings < 20 && !applied; ++halvings) {
                    double dloss = 0.0;
                    for (std::size_t i : train_rows) {
                        const std::size_t cell = binned.bin(i, inter.feature_a) * nb +
                                                 binned.bin(i, inter.feature_b);
                        double y = labels[i] ? 1.0 : 0.0;
                        dloss += logloss_term(scores[i] + dtab[cell], y) -
                                 logloss_term(scores[i], y);
                    }
                    if (dloss <= 0.0) {
                        for (std::size_t c = 0; c < dtab.size(); ++c)
                            inter.table[c] += dtab[c];
                        for (std::size_t i = 0; i < n; ++i) {
                            const std::size_t cell = binned.bin(i, inter.feature_a) * nb +
                                                     binned.bin(i, inter.feature_b);
                            scores[i] += dtab[cell];
                            probs[i] = logistic(scores[i]);
                        }
                        applied = true;
                    } else {
                        for (double& v : dtab) v *= 0.5;
                    }
                }
            }
            model.interaction_rounds_used = round + 1;
            if (!val_rows.empty()) {
                double vl = loss_over(val_rows);
                if (vl < best_val - 1e-12) {
                    best_val = vl;
                    best_tables = model.interactions;
                    best_iround = round + 1;
                    patience = 0;
                } else if (++patience >= config.early_stop_patience) {
                    break;
                }
            }
        }
        if (!val_rows.empty()) {
            model.interactions = best_tables;
            model.interaction_rounds_used = best_iround;
        }
    }

    // ---- stage 3: centering ----
    // interaction tables: alternate weighted row/column centering, moving
    // the means into the corresponding main effects
    for (auto& inter : model.interactions) {
        const std::size_t na = binned.n_bins(inter.feature_a);
        const std::size_t nb = binned.n_bins(inter.feature_b);
        for (int sweep = 0; sweep < 200; ++sweep) {
            double worst = 0.0;
            for (std::size_t a = 0; a < na; ++a) {
                double w = 0.0, m = 0.0;
                for (std::size_t b = 0; b < nb; ++b) {
                    w += inter.cell_weight[a * nb + b];
                    m += inter.cell_weight[a * nb + b] * inter.table[a * nb + b];
                }
                if (w <= 0.0) continue;
                m /= w;
                worst = std::max(worst, std::abs(m));
                for (std::size_t b = 0; b < nb; ++b) inter.table[a * nb + b] -= m;
                model.main_effects[inter.feature_a][a] += m;
            }
            for (std::size_t b = 0; b < nb; ++b) {
                double w = 0.0, m = 0.0;
                for (std::size_t a = 0; a < na; ++a) {
                    w += inter.cell_weight[a * nb + b];
                    m += inter.cell_weight[a * nb + b] * inter.table[a * nb + b];
                }
                if (w <= 0.0) continue;
                m /= w;
                worst = std::max(worst, std::abs(m));
                for (std::size_t a = 0; a < na; ++a) inter.table[a * nb + b] -= m;
                model.main_effects[inter.feature_b][b] += m;
            }
            if (worst < 1e-10) break;
        }
    }
    // main effects: weighted mean into the intercept
    for (std::size_t j = 0; j < d; ++j) {
        double w = 0.0, m = 0.0;
        for (std::size_t b = 0; b < model.main_effects[j].size(); ++b) {
            w += model.bin_weights[j][b];
            m += model.bin_weights[j][b] * model.main_effects[j][b];
        }
        if (w > 0.0) {
            m /= w;
            for (double& v : model.main_effects[j]) v -= m;
            model.intercept += m;
        }
    }

    for (double v : scores)
        if (!std::isfinite(v))
            throw std::runtime_error("fit_gam: non-finite scores during boosting");
    return model;
}

struct TermImportance {
    std::string term;
    double importance;
};

// importance(term) = mean over rows of |term contribution|
inline std::vector<TermImportance> feature_importance(const GamModel& model,
                                                      const BinnedMatrix& binned) {
    const std::size_t n = binned.n_rows();
    std::vector<TermImportance> out;
    auto name_of = [&](std::size_t j) {
        return j < model.feature_names.size() ? model.feature_names[j]
                                              : "f" + std::to_string(j);
    };
    for (std::size_t j = 0; j < model.n_features(); ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            acc += std::abs(model.main_effects[j][binned.bin(i, j)]);
        out.push_back({name_of(j), acc / static_cast<double>(n)});
    }
    for (const auto& inter : model.interactions) {
        const std::size_t nb = binned.n_bins(inter.feature_b);
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            acc += std::abs(
                inter.table[binned.bin(i, inter.feature_a) * nb + binned.bin(i, inter.feature_b)]);
        out.push_back({name_of(inter.feature_a) + " x " + name_of(inter.feature_b),
                       acc / static_cast<double>(n)});
    }
    std::sort(out.begin(), out.end(), [](const TermImportance& l, const TermImportance& r) {
        if (l.importance != r.importance) return l.importance > r.importance;
        return l.term < r.term;
    });
    return out;
}

// Same importance computed from the stored training bin counts, so it
// works on a deserialized model without the training data.
inline std::vector<TermImportance> feature_importance(const GamModel& model) {
    std::vector<TermImportance> out;
    auto name_of = [&](std::size_t j) {
        return j < model.feature_names.size() ? model.feature_names[j]
                                              : "f" + std::to_string(j);
    };
    for (std::size_t j = 0; j < model.n_features(); ++j) {
        double acc = 0.0, w = 0.0;
        for (std::size_t b = 0; b < model.main_effects[j].size(); ++b) {
            acc += model.bin_weights[j][b] * std::abs(model.main_effects[j][b]);
            w += model.bin_weights[j][b];
        }
        out.push_back({name_of(j), w > 0 ? acc / w : 0.0});
    }
    for (const auto& inter : model.interactions) {
        double acc = 0.0, w = 0.0;
        for (std::size_t c = 0; c < inter.table.size(); ++c) {
            acc += inter.cell_weight[c] * std::abs(inter.table[c]);
            w += inter.cell_weight[c];
        }
        out.push_back({name_of(inter.feature_a) + " x " + name_of(inter.feature_b),
                       w > 0 ? acc / w : 0.0});
    }
    std::sort(out.begin(), out.end(), [](const TermImportance& l, const TermImportance& r) {
        if (l.importance != r.importance) return l.importance > r.importance;
        return l.term < r.term;
    });
    return out;
}

}  // namespace survstack
