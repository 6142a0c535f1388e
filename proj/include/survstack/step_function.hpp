#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace survstack {

// Right-continuous piecewise-constant function on [0, inf).
// Carrier for Kaplan-Meier curves, Breslow cumulative hazards and
// censoring-distribution weights.
class StepFunction {
  public:
    StepFunction() : before_(1.0) {}

    StepFunction(std::vector<double> knots, std::vector<double> values,
                 double value_before_first_knot)
        : knots_(std::move(knots)),
          values_(std::move(values)),
          before_(value_before_first_knot) {
        if (knots_.size() != values_.size())
            throw std::invalid_argument("StepFunction: knots/values size mismatch");
        for (std::size_t i = 0; i < knots_.size(); ++i) {
            if (knots_[i] < 0.0)
                throw std::invalid_argument("StepFunction: negative knot");
            if (i > 0 && knots_[i] <= knots_[i - 1])
                throw std::invalid_argument("StepFunction: knots not strictly increasing");
        }
    }

    // value at t: largest knot <= t (right-continuous)
    double operator()(double t) const {
        auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
        if (it == knots_.begin()) return before_;
        return values_[static_cast<std::size_t>(it - knots_.begin()) - 1];
    }

    // left limit: value just before t (largest knot strictly < t)
    double left_limit(double t) const {
        auto it = std::lower_bound(knots_.begin(), knots_.end(), t);
        if (it == knots_.begin()) return before_;
        return values_[static_cast<std::size_t>(it - knots_.begin()) - 1];
    }

    const std::vector<double>& knots() const { return knots_; }
    const std::vector<double>& values() const { return values_; }
    double value_before_first_knot() const { return before_; }

  private:
    std::vector<double> knots_;
    std::vector<double> values_;
    double before_;
};

// Survival curve on an explicit evaluation grid.
struct SurvivalCurve {
    std::vector<double> times;          // strictly increasing
    std::vector<double> probabilities;  // in [0,1], non-increasing
};

}  // namespace survstack
