#pragma once

#include <shared_mutex>
#include <string>
#include <unordered_map>

#include "tailwalk/residual_law.hpp"
#include "tailwalk/rng.hpp"
#include "tailwalk/step_law.hpp"

namespace tailwalk {

/// State-dependent proposal kernel for barrier crossing, built from the
/// residual-life law Z of the step distribution:
///
///   Q(y, dz) = P(y, dz) * v(z - b - c) / w(y - b - c)
///
/// with v(x) = P(Z > -x) and w(x) = P(X + Z > -x), X independent of Z.
/// Equivalently, the next increment given state y is an exact draw from the
/// conditional law of X given X + Z > c + b - y.
///
/// w has no closed form; it is evaluated by splitting at the clamp boundary
/// of Z's tail,
///
///   w(-s) = P(X > s - z0) + integral_{lo}^{s - z0} f(u) P(Z > s - u) du,
///
/// where the first piece is exact and the finite integral is smooth, so
/// adaptive quadrature converges to the configured relative tolerance.
/// Head integrals are memoized by exact argument behind a shared mutex
/// (concurrent readers, single writer).
class BgMeasure {
 public:
  BgMeasure(StepLaw step, double barrier, double translation,
            double quadrature_tol = 1e-10);

  const StepLaw& step() const { return step_; }
  const ResidualLaw& residual() const { return residual_; }
  double barrier() const { return barrier_; }
  double translation() const { return translation_; }
  double quadrature_tol() const { return quad_tol_; }

  /// v(x) = P(Z > -x). Closed form; 1 for x >= -z0.
  double v_eval(double x) const { return residual_.tail(-x); }

  /// w(x) = P(X + Z > -x) by the exact split; memoized. 1 for
  /// x >= -support_left - z0 (the conditioning event is then certain).
  /// Throws QuadratureError if the tolerance cannot be met.
  double w_eval(double x) const;

  /// One transition from state y: returns y + dx where dx is an exact draw
  /// from the law of X conditional on X + Z > c + b - y. The conditional CDF
  /// is inverted by bracketed bisection with incremental panel integrals;
  /// draws landing in the region where Z's tail clamps at 1 invert the step
  /// survival function directly.
  double kernel_sample(double y, Rng& rng) const;

  /// log of the one-step likelihood ratio dP/dQ for the transition y -> z:
  /// log w(y - b - c) - log v(z - b - c).
  double step_log_lr(double y, double z) const;

  /// Number of memoized w arguments (diagnostic).
  std::size_t w_cache_size() const;

  std::string to_json() const;
  static BgMeasure from_json(const std::string& json_text);

 private:
  // Head piece of the split: integral over [support_left, s - z0] of
  // f(u) * P(Z > s - u), given that interval is nonempty.
  double w_head(double s) const;
  double head_piece_integral(double s, double from, double to, double abs_tol) const;

  StepLaw step_;
  ResidualLaw residual_;
  double barrier_;
  double translation_;
  double quad_tol_;

  mutable std::shared_mutex memo_mutex_;
  mutable std::unordered_map<double, double> w_head_memo_;
};

/// Scans tail_difference on a log-spaced grid over
/// [max(2*z0, 1), t_max] and returns the smallest grid value c* with
/// tail_difference(t) <= 0 at every grid point in [c*, t_max]. This is a
/// numerical certification of the sign condition behind a direct proposal,
/// not a proof; beyond t_max the asymptotic sign is the theory's claim.
/// Throws CertificationFailure when no grid point qualifies (the expected
/// outcome for tail index above 3/2).
double certify_c(const StepLaw& step, double t_max, int grid_size);

/// Default certification range: 1e8 times the step law scale.
double default_certify_t_max(const StepLaw& step);

}  // namespace tailwalk
