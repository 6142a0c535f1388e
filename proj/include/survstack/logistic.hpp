// L2-regularized logistic regression fit by Newton iterations; serves as
// the linear hazard classifier baseline on stacked data.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "survstack/gam.hpp"
#include "survstack/prediction.hpp"
#include "survstack/stacking.hpp"

namespace survstack {

struct LogisticConfig {
    double l2 = 1.0;  // on the weights; the intercept is not penalized
    int max_iter = 100;
    double tol = 1e-8;
};

class LogisticModel final : public HazardClassifier {
  public:
    Eigen::VectorXd weights;  // last coordinate = time feature when stacked
    double intercept = 0.0;
    double l2 = 0.0;
    int iterations = 0;

    double predict_probability(std::span<const double> x) const override {
        if (static_cast<Eigen::Index>(x.size()) != weights.size())
            throw std::invalid_argument("LogisticModel: dimension mismatch");
        Eigen::Map<const Eigen::VectorXd> xi(x.data(), weights.size());
        return logistic(intercept + xi.dot(weights));
    }
};

inline LogisticModel fit_logistic_matrix(const std::vector<double>& x_row_major,
                                         std::size_t d, const std::vector<char>& labels,
                                         const LogisticConfig& config) {
    const std::size_t n = labels.size();
    if (x_row_major.size() != n * d)
        throw std::invalid_argument("fit_logistic: size mismatch");
    {
        std::size_t pos = 0;
        for (char y : labels) pos += (y != 0);
        if (pos == 0 || pos == n)
            throw std::invalid_argument("fit_logistic: labels must contain both classes");
    }
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
        X(x_row_major.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    Eigen::VectorXd y(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) y[static_cast<Eigen::Index>(i)] = labels[i] ? 1.0 : 0.0;

    const auto dim = static_cast<Eigen::Index>(d) + 1;  // + intercept
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(dim);
    auto objective = [&](const Eigen::VectorXd& th) {
        Eigen::VectorXd s = (X * th.head(dim - 1)).array() + th[dim - 1];
        double obj = 0.0;
        for (Eigen::Index i = 0; i < s.size(); ++i) obj += logloss_term(s[i], y[i]);
        obj += 0.5 * config.l2 * th.head(dim - 1).squaredNorm();
        return obj;
    };

    int it = 0;
    double grad_norm = 0.0;
    for (; it < config.max_iter; ++it) {
        Eigen::VectorXd s = (X * theta.head(dim - 1)).array() + theta[dim - 1];
        Eigen::VectorXd p = s.unaryExpr([](double v) { return logistic(v); });
        Eigen::VectorXd r = p - y;
        Eigen::VectorXd w = p.array() * (1.0 - p.array());

        Eigen::VectorXd grad(dim);
        grad.head(dim - 1) = X.transpose() * r + config.l2 * theta.head(dim - 1);
        grad[dim - 1] = r.sum();
        grad_norm = grad.lpNorm<Eigen::Infinity>();
        if (grad_norm < config.tol) break;

        Eigen::MatrixXd H(dim, dim);
        Eigen::MatrixXd Xw = X.array().colwise() * w.array();
        H.topLeftCorner(dim - 1, dim - 1) =
            X.transpose() * Xw +
            config.l2 * Eigen::MatrixXd::Identity(dim - 1, dim - 1);
        H.topRightCorner(dim - 1, 1) = Xw.colwise().sum().transpose();
        H.bottomLeftCorner(1, dim - 1) = Xw.colwise().sum();
        H(dim - 1, dim - 1) = w.sum() + 1e-12;

        Eigen::VectorXd direction = H.ldlt().solve(grad);
        if (!direction.allFinite())
            throw std::runtime_error("fit_logistic: singular Hessian");
        const double obj = objective(theta);
        double step = 1.0;
        bool accepted = false;
        for (int halving = 0; halving < 30; ++halving) {
            Eigen::VectorXd candidate = theta - step * direction;
            if (objective(candidate) <= obj) {
                theta = candidate;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;
    }
    if (it >= config.max_iter)
        throw std::runtime_error("fit_logistic: no convergence in " +
                                 std::to_string(config.max_iter) + " iterations");

    LogisticModel model;
    model.weights = theta.head(dim - 1);
    model.intercept = theta[dim - 1];
    model.l2 = config.l2;
    model.iterations = it;
    return model;
}

inline LogisticModel fit_logistic(const StackedDataset& stacked,
                                  const LogisticConfig& config = {}) {
    return fit_logistic_matrix(stacked.x(), stacked.n_features(), stacked.labels(), config);
}

}  // namespace survstack
