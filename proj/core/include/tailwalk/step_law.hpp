#pragma once

#include <cstdint>
#include <string>

#include "tailwalk/rng.hpp"

namespace tailwalk {

enum class Family : std::uint8_t { ShiftedLomax, ShiftedPareto };

std::string family_name(Family f);
Family family_from_name(const std::string& name);

/// Heavy-tailed step distribution with negative mean, regularly varying
/// right tail of index alpha > 1, and support bounded below. Two closed-form
/// families:
///
///   ShiftedLomax(alpha, sigma, m):  P(X > t) = (1 + (t+m)/sigma)^-alpha,
///                                   support [-m, inf)
///   ShiftedPareto(alpha, x_m, m):   P(X > t) = ((t+m)/x_m)^-alpha,
///                                   support [x_m - m, inf)
///
/// Everything downstream (residual law, kernel normalizers, the tail-sum
/// decomposition) leans on sf / pdf / integrated_tail being exact, so all
/// evaluators are closed form; no quadrature happens here.
class StepLaw {
 public:
  /// Throws ConstructionError unless alpha > 1, the scale is positive, and
  /// the mean is strictly negative.
  StepLaw(Family family, double alpha, double scale, double shift);

  static StepLaw shifted_lomax(double alpha, double sigma, double m) {
    return StepLaw(Family::ShiftedLomax, alpha, sigma, m);
  }
  static StepLaw shifted_pareto(double alpha, double x_m, double m) {
    return StepLaw(Family::ShiftedPareto, alpha, x_m, m);
  }

  Family family() const { return family_; }
  double alpha() const { return alpha_; }
  /// sigma for ShiftedLomax, x_m for ShiftedPareto.
  double scale() const { return scale_; }
  double shift() const { return shift_; }

  /// Left endpoint of the support: -m (Lomax) or x_m - m (Pareto).
  double support_left() const { return support_left_; }

  /// P(X > t). Total on the reals; 1 left of the support.
  double sf(double t) const;

  /// P(X <= t).
  double cdf(double t) const { return 1.0 - sf(t); }

  /// Density; 0 left of the support.
  double pdf(double t) const;

  /// E X, strictly negative by construction.
  double mean() const { return mean_; }

  /// |E X|.
  double abs_mean() const { return -mean_; }

  /// I(t) = integral of sf over [t, inf), closed form. Below the support it
  /// grows linearly: I(t) = I(lo) + (lo - t).
  double integrated_tail(double t) const;

  /// Inverse of sf: the t with sf(t) = u, for u in (0, 1]. u = 1 maps to the
  /// left endpoint. Throws DomainError outside (0, 1].
  double quantile(double u) const;

  /// sf(t - s) / sf(t) - 1, stable for |s| << t where the direct difference
  /// of survival values loses all significant digits. Requires t inside the
  /// support.
  double sf_ratio_minus_one(double t, double s) const;

  /// One draw of X by inverse transform.
  double sample_step(Rng& rng) const { return quantile(rng.uniform_open_closed()); }

  bool operator==(const StepLaw&) const = default;

  std::string to_json() const;
  static StepLaw from_json(const std::string& json_text);

 private:
  Family family_;
  double alpha_;
  double scale_;
  double shift_;
  double support_left_;
  double mean_;
};

}  // namespace tailwalk
