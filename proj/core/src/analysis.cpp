#include "tailwalk/analysis.hpp"

#include <cmath>

#include "tailwalk/errors.hpp"
#include "tailwalk/quadrature.hpp"

namespace tailwalk {

namespace {

// x^-alpha - 1 without cancellation for x near 1.
double pow_minus_one(double x, double alpha) {
  return std::expm1(-alpha * std::log(x));
}

// (1-u)^-alpha - 1, accurate down to u -> 0 where it behaves like alpha*u.
double pow1m_minus_one(double u, double alpha) {
  return std::expm1(-alpha * std::log1p(-u));
}

void require_alpha_open_1_2(double alpha, const char* who) {
  if (!(alpha > 1.0) || !(alpha < 2.0)) {
    throw DomainError(std::string(who) + " requires alpha in (1, 2), got " +
                      std::to_string(alpha));
  }
}

// int_0^{1/2} [(1-u)^-a - 1] u^-a du. The integrand has an integrable
// u^(1-a) singularity at 0; the leading term a*u^(1-a) is integrated in
// closed form and only the O(u^(2-a)) remainder goes to quadrature.
double half_interval_product_integral(double alpha) {
  auto remainder = [alpha](double u) {
    return std::pow(u, -alpha) * (pow1m_minus_one(u, alpha) - alpha * u);
  };
  QuadratureOptions opt;
  opt.rel_tol = 1e-12;
  opt.abs_tol = 1e-13;
  const std::vector<double> pts{0.0, 1e-9, 1e-6, 1e-3, 0.0625, 0.25, 0.5};
  const double tail_part = integrate_or_throw(remainder, pts, opt, "sign integral");
  const double closed = alpha * std::pow(0.5, 2.0 - alpha) / (2.0 - alpha);
  return tail_part + closed;
}

// Same integral through the grading substitution u = x^p with p = 3/(2-a),
// which removes the endpoint singularity entirely; used as an independent
// route. The integrand regroups to p * x^2 * ([(1-u)^-a - 1]/u), immune to
// the underflow of u = x^p near zero.
double half_interval_product_integral_graded(double alpha) {
  const double p = 3.0 / (2.0 - alpha);
  auto transformed = [alpha, p](double x) {
    const double u = std::pow(x, p);
    const double factor = u > 0.0 ? pow1m_minus_one(u, alpha) / u : alpha;
    return p * x * x * factor;
  };
  QuadratureOptions opt;
  opt.rel_tol = 1e-12;
  opt.abs_tol = 1e-13;
  const double upper = std::pow(0.5, 1.0 / p);
  return integrate_or_throw(transformed, {0.0, 0.5 * upper, upper}, opt,
                            "sign integral (graded)");
}

}  // namespace

double threshold_integral(double alpha) {
  require_alpha_open_1_2(alpha, "threshold_integral");
  const double direct = half_interval_product_integral(alpha);
  const double graded = half_interval_product_integral_graded(alpha);
  if (std::abs(direct - graded) > 1e-9 * (1.0 + std::abs(direct))) {
    throw QuadratureError("sign integral routes disagree at alpha = " +
                          std::to_string(alpha));
  }
  return direct - std::pow(2.0, alpha - 1.0) / (alpha - 1.0);
}

double k_alpha(double alpha) {
  require_alpha_open_1_2(alpha, "k_alpha");
  // J = int_0^1 ((1-u)^-a - 1)(u^-a - 1) du, symmetric about 1/2; fold onto
  // [0, 1/2] and subtract the a*(u^(1-a) - u) leading term analytically.
  auto remainder = [alpha](double u) {
    return pow1m_minus_one(u, alpha) * pow_minus_one(u, alpha) -
           alpha * (std::pow(u, 1.0 - alpha) - u);
  };
  QuadratureOptions opt;
  opt.rel_tol = 1e-12;
  opt.abs_tol = 1e-13;
  const std::vector<double> pts{0.0, 1e-9, 1e-6, 1e-3, 0.0625, 0.25, 0.5};
  const double rem = integrate_or_throw(remainder, pts, opt, "k_alpha integral");
  const double closed =
      alpha * (std::pow(0.5, 2.0 - alpha) / (2.0 - alpha) - 0.125);
  const double j = 2.0 * (rem + closed);
  return (alpha - 1.0) * j - (alpha + 1.0);
}

double threshold_root(double lo, double hi, double tol) {
  double f_lo = threshold_integral(lo);
  double f_hi = threshold_integral(hi);
  if (!(f_lo < 0.0 && f_hi > 0.0)) {
    throw DomainError("threshold_integral does not bracket a root on (" +
                      std::to_string(lo) + ", " + std::to_string(hi) + ")");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (threshold_integral(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double default_cutoff(const ResidualLaw& residual, double t) {
  const double z0 = residual.z0();
  const double natural = std::max(z0 + 1.0, std::sqrt(t));
  if (natural < 0.5 * t) return natural;
  // Just above the domain edge t = max{2 z0, 0} the natural choice violates
  // h < t/2; fall back to the midpoint of the admissible window.
  return 0.5 * (std::max(z0, 0.0) + 0.5 * t);
}

DecompositionTerms decomposition(const ResidualLaw& residual, double t,
                                 std::optional<double> cutoff) {
  const StepLaw& step = residual.step();
  const double z0 = residual.z0();
  if (!(t > std::max(2.0 * z0, 0.0))) {
    throw DomainError("decomposition requires t > max{2 z0, 0}; t = " +
                      std::to_string(t));
  }
  const double h = cutoff.value_or(default_cutoff(residual, t));
  if (!(h > std::max(z0, 0.0)) || !(h < 0.5 * t)) {
    throw DomainError("cutoff must satisfy max{z0, 0} < h < t/2; h = " +
                      std::to_string(h) + ", t = " + std::to_string(t));
  }

  const double abs_mean = residual.abs_mean();
  const double lo = step.support_left();
  const double sf_t = step.sf(t);

  QuadratureOptions opt;
  opt.rel_tol = 1e-11;
  opt.abs_tol = 0.0;

  DecompositionTerms terms;
  terms.t = t;
  terms.h = h;

  // p: tail-tail convolution over the middle of the range, humps at both
  // endpoints.
  auto pp = [&step, t](double s) { return step.sf(t - s) * step.sf(s); };
  terms.p = integrate_or_throw(
                pp, two_sided_geometric_breakpoints(h, t - h, std::max(step.scale(), h / 8.0)),
                opt, "decomposition p") /
            abs_mean;

  // q: sf(t) * [2 I(h) - int_h^inf F(-s) ds] / |EX|. The second integral is
  // supported on [h, -lo] and vanishes exactly once h clears the support
  // bound.
  double left_tail_mass = 0.0;
  if (h < -lo) {
    auto cdf_neg = [&step](double s) { return step.cdf(-s); };
    left_tail_mass =
        integrate_or_throw(cdf_neg, {h, -lo}, opt, "decomposition q correction");
  }
  terms.q = sf_t * (2.0 * step.integrated_tail(h) - left_tail_mass) / abs_mean;

  // eps1: near-diagonal corrections; sf(t-s) - sf(t) is evaluated through
  // the stable ratio form.
  auto diff_kernel = [&step, t, sf_t](double s) {
    return sf_t * step.sf_ratio_minus_one(t, s);
  };
  auto g_pos = [&](double s) { return diff_kernel(s) * step.sf(s); };
  const double piece_0_h = integrate_or_throw(
      g_pos, geometric_breakpoints(0.0, h, std::min(step.scale(), h)), opt,
      "decomposition eps1 [0,h]");
  double piece_z0_h;
  if (z0 >= 0.0) {
    piece_z0_h = integrate_or_throw(
        g_pos, geometric_breakpoints(z0, h, std::min(step.scale(), h - z0)), opt,
        "decomposition eps1 [z0,h]");
  } else {
    std::vector<double> pts{z0};
    if (lo > z0 && lo < 0.0) pts.push_back(lo);
    pts.push_back(0.0);
    const double neg_part =
        integrate_or_throw(g_pos, pts, opt, "decomposition eps1 [z0,0]");
    piece_z0_h = neg_part + piece_0_h;
  }
  auto g_neg = [&](double s) { return -diff_kernel(s) * step.cdf(s); };
  std::vector<double> neg_pts{-h};
  if (lo > -h && lo < 0.0) neg_pts.push_back(lo);
  neg_pts.push_back(0.0);
  const double piece_neg =
      integrate_or_throw(g_neg, neg_pts, opt, "decomposition eps1 [-h,0]");
  terms.eps1 = (piece_0_h + piece_z0_h + piece_neg) / abs_mean;

  // eps2: far-left mass, exactly zero once h >= -lo.
  if (h < -lo) {
    auto far_left = [&step, t](double s) { return step.sf(t - s) * step.cdf(s); };
    terms.eps2 =
        integrate_or_throw(far_left, {lo, -h}, opt, "decomposition eps2") / abs_mean;
  } else {
    terms.eps2 = 0.0;
  }
  return terms;
}

double tail_difference(const ResidualLaw& residual, double t) {
  return decomposition(residual, t).difference();
}

double pv_estimate(const ResidualLaw& residual, double b) {
  if (!(b >= 0.0)) {
    throw DomainError("pv_estimate requires b >= 0, got " + std::to_string(b));
  }
  return residual.tail(b);
}

double karamata_ratio(const ResidualLaw& residual, double t) {
  if (!(t > residual.z0())) {
    throw DomainError("karamata_ratio requires t > z0");
  }
  const StepLaw& step = residual.step();
  return residual.tail(t) * (step.alpha() - 1.0) * residual.abs_mean() /
         (t * step.sf(t));
}

}  // namespace tailwalk
