// Synthetic survival data with analytically known hazards.
//
// Covariates are independent standard normals. Event times come from the
// closed-form cumulative hazard Lambda(t|x) = rate(x) * t^k (Weibull time
// weight w(t) = k t^{k-1}) by inverse transform; censoring is the minimum
// of an independent exponential and an administrative cutoff. The truth
// oracle evaluates the exact survival function, hazard and shape
// functions for use as a test oracle.
#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "survstack/dataset.hpp"
#include "survstack/rng.hpp"

namespace survstack {

enum class HazardForm {
    kProportional,       // rate(x) = lambda0 * exp(x' beta)
    kAdditiveNonlinear,  // rate(x) = exp(beta0 + sum_i g_i(x_i) + g12(x1, x2))
};

struct SyntheticSpec {
    std::size_t n = 1000;
    std::size_t d = 2;
    HazardForm form = HazardForm::kProportional;
    double lambda0 = 0.1;            // proportional scale
    std::vector<double> beta;        // linear coefficients (both forms)
    std::vector<double> quadratic;   // additive form: g_i includes quad[i] * x_i^2
    double interaction = 0.0;        // additive form: g12 = interaction * x1 * x2
    double beta0 = 0.0;              // additive form intercept (log rate)
    double weibull_k = 1.5;          // time weight shape
    double censor_rate = 0.05;       // independent exponential censoring; 0 disables
    double admin_cutoff = 15.0;      // administrative right-censoring horizon
    std::uint64_t seed = 0;

    void validate() const {
        if (n == 0 || d == 0) throw std::invalid_argument("synth: n and d must be positive");
        if (!(weibull_k > 0.0)) throw std::invalid_argument("synth: weibull_k must be > 0");
        if (!(lambda0 > 0.0) && form == HazardForm::kProportional)
            throw std::invalid_argument("synth: lambda0 must be > 0");
        if (censor_rate < 0.0) throw std::invalid_argument("synth: censor_rate must be >= 0");
        if (!(admin_cutoff > 0.0))
            throw std::invalid_argument("synth: admin_cutoff must be > 0");
    }
};

class TruthOracle {
  public:
    explicit TruthOracle(SyntheticSpec spec) : spec_(std::move(spec)) {}

    const SyntheticSpec& spec() const { return spec_; }
    const std::vector<double>& beta() const { return spec_.beta; }

    // log of the time-independent rate factor
    double log_rate(std::span<const double> x) const {
        double s;
        if (spec_.form == HazardForm::kProportional) {
            s = std::log(spec_.lambda0);
            for (std::size_t j = 0; j < spec_.d; ++j)
                s += (j < spec_.beta.size() ? spec_.beta[j] : 0.0) * x[j];
        } else {
            s = spec_.beta0;
            for (std::size_t j = 0; j < spec_.d; ++j) {
                s += (j < spec_.beta.size() ? spec_.beta[j] : 0.0) * x[j];
                s += (j < spec_.quadratic.size() ? spec_.quadratic[j] : 0.0) * x[j] * x[j];
            }
            if (spec_.d >= 2) s += spec_.interaction * x[0] * x[1];
        }
        return s;
    }

    double cumulative_hazard(std::span<const double> x, double t) const {
        return std::exp(log_rate(x)) * std::pow(t, spec_.weibull_k);
    }

    double hazard(std::span<const double> x, double t) const {
        return std::exp(log_rate(x)) * spec_.weibull_k *
               std::pow(t, spec_.weibull_k - 1.0);
    }

    double true_survival(std::span<const double> x, double t) const {
        if (t == 0.0) return 1.0;
        return std::exp(-cumulative_hazard(x, t));
    }

    // per-feature shape contribution to the log rate (additive form)
    double shape(std::size_t j, double v) const {
        double s = (j < spec_.beta.size() ? spec_.beta[j] : 0.0) * v;
        if (spec_.form == HazardForm::kAdditiveNonlinear)
            s += (j < spec_.quadratic.size() ? spec_.quadratic[j] : 0.0) * v * v;
        return s;
    }

  private:
    SyntheticSpec spec_;
};

struct SyntheticResult {
    SurvivalDataset dataset;
    TruthOracle oracle;
    double censoring_fraction = 0.0;
};

inline SyntheticResult generate(const SyntheticSpec& spec) {
    spec.validate();
    TruthOracle oracle(spec);
    Rng rng(spec.seed);

    std::vector<double> x;
    x.reserve(spec.n * spec.d);
    std::vector<double> times(spec.n);
    std::vector<char> events(spec.n);
    std::vector<double> row(spec.d);
    std::size_t censored = 0;
    for (std::size_t i = 0; i < spec.n; ++i) {
        for (std::size_t j = 0; j < spec.d; ++j) row[j] = rng.normal();
        x.insert(x.end(), row.begin(), row.end());
        // inverse transform from Lambda(t|x) = rate * t^k
        double u = rng.uniform();
        while (u <= 0.0) u = rng.uniform();
        const double rate = std::exp(oracle.log_rate(row));
        const double t_event = std::pow(-std::log(u) / rate, 1.0 / spec.weibull_k);
        double t_censor = spec.admin_cutoff;
        if (spec.censor_rate > 0.0)
            t_censor = std::min(t_censor, rng.exponential(spec.censor_rate));
        if (t_event <= t_censor) {
            times[i] = t_event;
            events[i] = 1;
        } else {
            times[i] = t_censor;
            events[i] = 0;
            ++censored;
        }
    }
    const double frac = static_cast<double>(censored) / static_cast<double>(spec.n);
    if (frac > 0.95)
        throw std::runtime_error("synth: degenerate spec, censoring fraction " +
                                 std::to_string(frac));

    std::vector<std::string> names(spec.d);
    for (std::size_t j = 0; j < spec.d; ++j) names[j] = "x" + std::to_string(j + 1);
    SurvivalDataset data(std::move(x), spec.d, std::move(times), std::move(events),
                         std::move(names));
    return SyntheticResult{std::move(data), std::move(oracle), frac};
}

}  // namespace survstack
