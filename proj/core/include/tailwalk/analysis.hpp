#pragma once

#include <optional>

#include "tailwalk/residual_law.hpp"

namespace tailwalk {

/// Terms of the exact split of P(X+Z > t) - P(Z > t) at cutoff h:
///
///   difference = p - q + eps1 - eps2
///
///   p    = (1/|EX|) int_{h}^{t-h}  sf(t-s) sf(s) ds
///   q    = (sf(t)/|EX|) int_{h}^{inf} [2 sf(s) - F(-s)] ds
///   eps1 = (1/|EX|) [ (int_0^h + int_{z0}^h) [sf(t-s)-sf(t)] sf(s) ds
///                     + int_{-h}^0 [sf(t)-sf(t-s)] F(s) ds ]
///   eps2 = (1/|EX|) int_{-inf}^{-h} sf(t-s) F(s) ds
///
/// The split is an identity for max{z0, 0} < h < t/2; it is the numerically
/// stable route to the difference (the direct subtraction w - v cancels
/// catastrophically at large t).
struct DecompositionTerms {
  double t = 0.0;
  double h = 0.0;
  double p = 0.0;
  double q = 0.0;
  double eps1 = 0.0;
  double eps2 = 0.0;

  double difference() const { return p - q + eps1 - eps2; }
};

/// Default cutoff h(t) = max{z0 + 1, sqrt(t)}: grows unboundedly, is o(t),
/// and for bounded-left-support laws eventually clears the support bound so
/// eps2 vanishes exactly.
double default_cutoff(const ResidualLaw& residual, double t);

/// Computes the four terms at cutoff h (default_cutoff when omitted).
/// Closed-form shortcuts apply where the support bound kills integrands:
/// with h >= -support_left, eps2 = 0 and q = 2 sf(t) I(h) / |EX| exactly.
/// Throws DomainError unless t > max{2 z0, 0} and max{z0, 0} < h < t/2.
DecompositionTerms decomposition(const ResidualLaw& residual, double t,
                                 std::optional<double> cutoff = std::nullopt);

/// P(X+Z > t) - P(Z > t) via the decomposition (stable route).
double tail_difference(const ResidualLaw& residual, double t);

/// Sign integral controlling the tail-index dichotomy:
///
///   int_0^{1/2} [(1-u)^{-alpha} - 1] u^{-alpha} du - 2^(alpha-1)/(alpha-1)
///
/// Strictly increasing on (1, 2), zero at alpha = 3/2. The integrable
/// endpoint singularity u^(1-alpha) is subtracted and integrated exactly.
/// Throws DomainError outside (1, 2).
double threshold_integral(double alpha);

/// Asymptotic constant in
/// P(X+Z > t) - P(Z > t) ~ K_alpha P(Z > t) P(X > t):
///
///   K_alpha = (alpha-1) int_0^1 ((1-u)^{-alpha} - 1)(u^{-alpha} - 1) du
///             - (alpha+1)
///
/// Both endpoint singularities are handled by symmetric splitting plus
/// subtraction. Throws DomainError outside (1, 2).
double k_alpha(double alpha);

/// Root of threshold_integral on (lo, hi) by bisection; the located root of
/// the dichotomy is 3/2.
double threshold_root(double lo = 1.01, double hi = 1.99, double tol = 1e-9);

/// Pakes-Veraverbeke asymptote for the crossing probability:
/// pv_estimate(b) = min{1, I(b)/|EX|} = P(Z > b).
double pv_estimate(const ResidualLaw& residual, double b);

/// P(Z > t) * (alpha - 1) * |EX| / (t * sf(t)); tends to 1 as t grows
/// (Karamata). Throws DomainError for t <= z0.
double karamata_ratio(const ResidualLaw& residual, double t);

}  // namespace tailwalk
