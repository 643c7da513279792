#pragma once

#include "tailwalk/rng.hpp"
#include "tailwalk/step_law.hpp"

namespace tailwalk {

/// Residual-life (stationary excess) distribution of a step law X:
///
///   P(Z > t) = min{ 1, I(t) / |E X| },   I(t) = integral of P(X > s) over [t, inf)
///
/// z0 is the left endpoint of Z's support, the point where I(z0) = |E X|.
/// On (z0, inf) Z has density sf(t) / |E X|. All evaluators are closed form,
/// inverting the two branches of I (power region on the step support, linear
/// region below it).
class ResidualLaw {
 public:
  explicit ResidualLaw(StepLaw step);

  const StepLaw& step() const { return step_; }
  double abs_mean() const { return abs_mean_; }
  double z0() const { return z0_; }

  /// P(Z > t); 1 for t <= z0, strictly decreasing above.
  double tail(double t) const;

  /// Density of Z: sf(t)/|E X| for t > z0, 0 below.
  double density(double t) const;

  /// Inverse of tail: t with tail(t) = u, u in (0, 1]. u = 1 maps to z0.
  double quantile(double u) const;

  double sample(Rng& rng) const { return quantile(rng.uniform_open_closed()); }

 private:
  StepLaw step_;
  double abs_mean_;
  double z0_;
  double tail_at_support_left_;  // I(support_left) / |E X|
};

}  // namespace tailwalk
