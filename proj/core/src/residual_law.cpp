#include "tailwalk/residual_law.hpp"

#include <cmath>

#include "tailwalk/errors.hpp"

namespace tailwalk {

ResidualLaw::ResidualLaw(StepLaw step) : step_(std::move(step)) {
  abs_mean_ = step_.abs_mean();
  const double lo = step_.support_left();
  const double tail_integral_at_lo = step_.integrated_tail(lo);
  tail_at_support_left_ = tail_integral_at_lo / abs_mean_;

  // Solve I(z0) = |E X|. Inside the step support I is a pure power; below it
  // I grows linearly, so the branch is picked by comparing I(lo) to |E X|.
  if (tail_integral_at_lo >= abs_mean_) {
    const double alpha = step_.alpha();
    const double scale = step_.scale();
    const double ratio = (alpha - 1.0) * abs_mean_ / scale;  // <= I(lo) form
    const double base = std::pow(ratio, -1.0 / (alpha - 1.0));
    if (step_.family() == Family::ShiftedLomax) {
      z0_ = scale * (base - 1.0) - step_.shift();
    } else {
      z0_ = scale * base - step_.shift();
    }
  } else {
    z0_ = lo + tail_integral_at_lo - abs_mean_;
  }
}

double ResidualLaw::tail(double t) const {
  if (t <= z0_) return 1.0;
  return step_.integrated_tail(t) / abs_mean_;
}

double ResidualLaw::density(double t) const {
  if (t <= z0_) return 0.0;
  return step_.sf(t) / abs_mean_;
}

double ResidualLaw::quantile(double u) const {
  if (!(u > 0.0) || !(u <= 1.0)) {
    throw DomainError("residual quantile argument must lie in (0, 1], got " +
                      std::to_string(u));
  }
  if (u == 1.0) return z0_;
  if (u >= tail_at_support_left_) {
    // Linear branch below the step support (only reachable when z0 < lo).
    const double lo = step_.support_left();
    return lo + step_.integrated_tail(lo) - u * abs_mean_;
  }
  const double alpha = step_.alpha();
  const double scale = step_.scale();
  const double base = std::pow((alpha - 1.0) * u * abs_mean_ / scale, -1.0 / (alpha - 1.0));
  if (step_.family() == Family::ShiftedLomax) {
    return scale * (base - 1.0) - step_.shift();
  }
  return scale * base - step_.shift();
}

}  // namespace tailwalk
