// Cox proportional hazards by Newton's method on the Breslow partial
// likelihood, with an optional ridge term and step-halving. Ties share
// the full risk-set denominator (Breslow handling).
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "survstack/dataset.hpp"
#include "survstack/step_function.hpp"

namespace survstack {

struct CoxConfig {
    double ridge = 1e-6;
    int max_iter = 100;
    double tol = 1e-7;  // gradient infinity-norm
};

struct CoxModel {
    Eigen::VectorXd beta;
    StepFunction baseline_cumhaz;  // Breslow Lambda_0, 0 before first event
    int iterations = 0;
    double final_gradient_norm = 0.0;
    double log_partial_likelihood = 0.0;
    double ridge = 0.0;
};

namespace detail {

// Breslow log partial likelihood with gradient and (negative) Hessian.
// Rows must be pre-sorted by descending time so the risk set accumulates.
struct CoxLikelihood {
    double loglik = 0.0;
    Eigen::VectorXd grad;
    Eigen::MatrixXd neg_hessian;
};

inline CoxLikelihood cox_partial_likelihood(const SurvivalDataset& data,
                                            const std::vector<std::size_t>& by_desc_time,
                                            const Eigen::VectorXd& beta, bool with_derivs) {
    const auto d = static_cast<Eigen::Index>(data.n_features());
    CoxLikelihood out;
    out.grad = Eigen::VectorXd::Zero(d);
    out.neg_hessian = Eigen::MatrixXd::Zero(d, d);

    double s0 = 0.0;
    Eigen::VectorXd s1 = Eigen::VectorXd::Zero(d);
    Eigen::MatrixXd s2 = Eigen::MatrixXd::Zero(d, d);

    std::size_t k = 0;
    const std::size_t n = by_desc_time.size();
    while (k < n) {
        const double t = data.time(by_desc_time[k]);
        // absorb everyone entering the risk set at this time
        std::size_t k2 = k;
        while (k2 < n && data.time(by_desc_time[k2]) == t) {
            const std::size_t i = by_desc_time[k2];
            Eigen::Map<const Eigen::VectorXd> xi(data.row(i).data(), d);
            const double w = std::exp(xi.dot(beta));
            s0 += w;
            if (with_derivs) {
                s1 += w * xi;
                s2.selfadjointView<Eigen::Lower>().rankUpdate(xi, w);
            }
            ++k2;
        }
        // events at this time, all against the same denominator
        std::size_t dk = 0;
        Eigen::VectorXd x_events = Eigen::VectorXd::Zero(d);
        for (std::size_t m = k; m < k2; ++m) {
            const std::size_t i = by_desc_time[m];
            if (data.event(i)) {
                ++dk;
                Eigen::Map<const Eigen::VectorXd> xi(data.row(i).data(), d);
                x_events += xi;
            }
        }
        if (dk > 0) {
            out.loglik += x_events.dot(beta) - static_cast<double>(dk) * std::log(s0);
            if (with_derivs) {
                Eigen::VectorXd mu = s1 / s0;
                out.grad += x_events - static_cast<double>(dk) * mu;
                Eigen::MatrixXd s2full = s2.selfadjointView<Eigen::Lower>();
                out.neg_hessian +=
                    static_cast<double>(dk) * (s2full / s0 - mu * mu.transpose());
            }
        }
        k = k2;
    }
    return out;
}

}  // namespace detail

inline double cox_log_partial_likelihood(const SurvivalDataset& data,
                                         const Eigen::VectorXd& beta) {
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return data.time(a) > data.time(b);
    });
    return detail::cox_partial_likelihood(data, order, beta, false).loglik;
}

inline CoxModel fit_cox(const SurvivalDataset& data, const CoxConfig& config = {}) {
    data.require_events();
    const auto d = static_cast<Eigen::Index>(data.n_features());
    const std::size_t n = data.size();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return data.time(a) > data.time(b);
    });

    Eigen::VectorXd beta = Eigen::VectorXd::Zero(d);
    auto penalized = [&](const Eigen::VectorXd& b, const detail::CoxLikelihood& l) {
        return l.loglik - 0.5 * config.ridge * b.squaredNorm();
    };

    auto cur = detail::cox_partial_likelihood(data, order, beta, true);
    // the log-likelihood scales with the event count, and so does the
    // attainable gradient norm at the floating-point plateau
    const double tol = config.tol * std::max<double>(1.0, static_cast<double>(data.n_events()));
    double grad_norm = 0.0;
    int it = 0;
    for (; it < config.max_iter; ++it) {
        Eigen::VectorXd grad = cur.grad - config.ridge * beta;
        grad_norm = grad.lpNorm<Eigen::Infinity>();
        if (grad_norm < tol) break;

        Eigen::MatrixXd H =
            cur.neg_hessian + config.ridge * Eigen::MatrixXd::Identity(d, d);
        Eigen::LDLT<Eigen::MatrixXd> ldlt(H);
        Eigen::VectorXd direction = ldlt.solve(grad);
        if (!direction.allFinite())
            throw std::runtime_error("fit_cox: singular Hessian");

        const double obj = penalized(beta, cur);
        double step = 1.0;
        bool accepted = false;
        for (int halving = 0; halving < 30; ++halving) {
            Eigen::VectorXd candidate = beta + step * direction;
            auto cand = detail::cox_partial_likelihood(data, order, candidate, true);
            if (std::isfinite(cand.loglik) && penalized(candidate, cand) >= obj) {
                beta = candidate;
                cur = cand;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;  // no ascent possible: treat current gradient as final
        if (beta.norm() > 1e3)
            throw std::runtime_error(
                "fit_cox: coefficients diverging (likely monotone-likelihood "
                "separation); increase ridge");
    }
    if (grad_norm >= tol && it >= config.max_iter)
        throw std::runtime_error("fit_cox: no convergence in " +
                                 std::to_string(config.max_iter) +
                                 " iterations, gradient norm " +
                                 std::to_string(grad_norm));

    // Breslow baseline cumulative hazard
    std::vector<double> exp_risk(n);
    for (std::size_t i = 0; i < n; ++i) {
        Eigen::Map<const Eigen::VectorXd> xi(data.row(i).data(), d);
        exp_risk[i] = std::exp(xi.dot(beta));
    }
    std::vector<double> knots, values;
    double cum = 0.0;
    // ascending distinct event times
    for (double t : data.distinct_event_times()) {
        std::size_t dk = 0;
        double denom = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (data.time(i) >= t) denom += exp_risk[i];
            if (data.event(i) && data.time(i) == t) ++dk;
        }
        cum += static_cast<double>(dk) / denom;
        knots.push_back(t);
        values.push_back(cum);
    }

    CoxModel model;
    model.beta = beta;
    model.baseline_cumhaz = StepFunction(std::move(knots), std::move(values), 0.0);
    model.iterations = it;
    model.final_gradient_norm = grad_norm;
    model.log_partial_likelihood = cur.loglik;
    model.ridge = config.ridge;
    return model;
}

inline double cox_risk_score(const CoxModel& model, std::span<const double> x) {
    Eigen::Map<const Eigen::VectorXd> xi(x.data(), model.beta.size());
    return xi.dot(model.beta);
}

// S(t|x) = exp(-Lambda_0(t) * exp(x' beta))
inline double cox_survival(const CoxModel& model, std::span<const double> x, double t) {
    return std::exp(-model.baseline_cumhaz(t) * std::exp(cox_risk_score(model, x)));
}

}  // namespace survstack
