// Survival curves from a hazard classifier.
//
// The classifier f takes (X || t) and returns a probability. The
// cumulative hazard is estimated by Monte Carlo integration of f over
// (0, t] and turned into S(t|X) = exp(-Lambda(t|X)). The discrete
// product estimator over training event times is kept for comparison;
// with many event times it collapses toward 0.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "survstack/rng.hpp"
#include "survstack/step_function.hpp"

namespace survstack {

// Abstract hazard predictor over (X || t); the last input coordinate is
// the time feature. Implementations must be deterministic and safe to
// share read-only across threads.
class HazardClassifier {
  public:
    virtual ~HazardClassifier() = default;
    virtual double predict_probability(std::span<const double> x_with_time) const = 0;
};

// Adapter for tests and ad-hoc integrands.
class FunctionHazard final : public HazardClassifier {
  public:
    explicit FunctionHazard(std::function<double(std::span<const double>)> fn)
        : fn_(std::move(fn)) {}
    double predict_probability(std::span<const double> x) const override { return fn_(x); }

  private:
    std::function<double(std::span<const double>)> fn_;
};

enum class McSampling {
    kStratified,  // one uniform draw per equal subinterval (default)
    kPlain,       // i.i.d. uniform over (0, t]
};

struct PredictionConfig {
    int n_mc = 64;
    std::uint64_t seed = 0;
    std::vector<double> grid;  // evaluation times for survival_curve
    McSampling sampling = McSampling::kStratified;
};

namespace detail {

inline std::vector<double> mc_time_samples(double t, int n, std::uint64_t seed,
                                           McSampling sampling) {
    Rng rng(seed);
    std::vector<double> s(static_cast<std::size_t>(n));
    if (sampling == McSampling::kStratified) {
        const double w = t / static_cast<double>(n);
        for (int i = 0; i < n; ++i)
            s[static_cast<std::size_t>(i)] = static_cast<double>(i) * w + rng.uniform() * w;
    } else {
        for (int i = 0; i < n; ++i) s[static_cast<std::size_t>(i)] = rng.uniform() * t;
    }
    // map the (measure-zero) draw at 0 into (0, t]
    for (double& v : s)
        if (v <= 0.0) v = t;
    return s;
}

}  // namespace detail

// Lambda(t|x) ~= (t/n) * sum_i f(x || t_i), t_i uniform over (0, t].
inline double predict_cumulative_hazard(const HazardClassifier& f,
                                        std::span<const double> x, double t,
                                        const PredictionConfig& config) {
    if (!(t > 0.0)) throw std::invalid_argument("predict_cumulative_hazard: t must be > 0");
    if (config.n_mc < 1) throw std::invalid_argument("n_mc must be >= 1");
    const auto samples = detail::mc_time_samples(t, config.n_mc, config.seed, config.sampling);
    std::vector<double> xt(x.begin(), x.end());
    xt.push_back(0.0);
    double sum = 0.0;
    for (double s : samples) {
        xt.back() = s;
        sum += f.predict_probability(xt);
    }
    return t * sum / static_cast<double>(config.n_mc);
}

inline double predict_survival_mc(const HazardClassifier& f, std::span<const double> x,
                                  double t, const PredictionConfig& config) {
    if (t == 0.0) return 1.0;
    return std::exp(-predict_cumulative_hazard(f, x, t, config));
}

// Discrete product estimator over the training event times.
inline double predict_survival_discrete(const HazardClassifier& f,
                                        std::span<const double> x, double t,
                                        const std::vector<double>& event_times) {
    std::vector<double> xt(x.begin(), x.end());
    xt.push_back(0.0);
    double s = 1.0;
    for (double tk : event_times) {
        if (tk > t) break;
        xt.back() = tk;
        s *= 1.0 - f.predict_probability(xt);
    }
    return s;
}

// Per-grid-point survival with a single Monte Carlo sample stream over
// (0, grid.back()]: Lambda at grid point k is accumulated from the
// samples <= t_k, so the cumulative hazard is non-decreasing along the
// grid by construction and the curve is monotone.
inline SurvivalCurve survival_curve(const HazardClassifier& f, std::span<const double> x,
                                    const PredictionConfig& config) {
    if (config.grid.empty()) throw std::invalid_argument("survival_curve: empty grid");
    for (std::size_t k = 0; k < config.grid.size(); ++k) {
        if (!(config.grid[k] > 0.0))
            throw std::invalid_argument("survival_curve: grid times must be > 0");
        if (k > 0 && config.grid[k] <= config.grid[k - 1])
            throw std::invalid_argument("survival_curve: grid must be strictly increasing");
    }
    const double t_max = config.grid.back();
    const auto samples =
        detail::mc_time_samples(t_max, config.n_mc, config.seed, config.sampling);
    std::vector<double> xt(x.begin(), x.end());
    xt.push_back(0.0);
    std::vector<double> fvals(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        xt.back() = samples[i];
        fvals[i] = f.predict_probability(xt);
    }
    SurvivalCurve curve;
    curve.times = config.grid;
    curve.probabilities.reserve(config.grid.size());
    const double scale = t_max / static_cast<double>(config.n_mc);
    for (double tk : config.grid) {
        double lambda = 0.0;
        for (std::size_t i = 0; i < samples.size(); ++i)
            if (samples[i] <= tk) lambda += fvals[i];
        curve.probabilities.push_back(std::exp(-scale * lambda));
    }
    return curve;
}

// Discrete-time tail product for a finite distribution: with hazards
// lambda(t_i) = P(T = t_i) / P(T >= t_i), the running product
// prod_{t_i <= t} (1 - lambda(t_i)) equals P(T > t) exactly.
inline double discrete_tail_product(const std::vector<double>& support,
                                    const std::vector<double>& probabilities, double t) {
    if (support.size() != probabilities.size())
        throw std::invalid_argument("discrete_tail_product: size mismatch");
    double tail = 1.0;  // P(T >= t_i) entering step i
    double prod = 1.0;
    for (std::size_t i = 0; i < support.size(); ++i) {
        if (i > 0 && support[i] <= support[i - 1])
            throw std::invalid_argument("discrete_tail_product: support not sorted");
        if (probabilities[i] < 0.0)
            throw std::invalid_argument("discrete_tail_product: negative probability");
        if (support[i] > t) break;
        if (tail <= 0.0) return 0.0;  // an earlier factor already zeroed the product
        prod *= 1.0 - probabilities[i] / tail;
        tail -= probabilities[i];
    }
    return prod;
}

}  // namespace survstack
