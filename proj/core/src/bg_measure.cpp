#include "tailwalk/bg_measure.hpp"

#include <cmath>
#include <limits>
#include <mutex>
#include <vector>

#include <nlohmann/json.hpp>

#include "tailwalk/analysis.hpp"
#include "tailwalk/errors.hpp"
#include "tailwalk/quadrature.hpp"

namespace tailwalk {

namespace {
constexpr int kBisectionBudget = 200;
}

BgMeasure::BgMeasure(StepLaw step, double barrier, double translation,
                     double quadrature_tol)
    : step_(std::move(step)),
      residual_(step_),
      barrier_(barrier),
      translation_(translation),
      quad_tol_(quadrature_tol) {
  if (!(barrier_ >= 0.0)) {
    throw ConstructionError("barrier must be nonnegative, got " +
                            std::to_string(barrier_));
  }
  if (!std::isfinite(translation_)) {
    throw ConstructionError("translation parameter must be finite");
  }
  if (!(quad_tol_ > 0.0) || quad_tol_ >= 1e-2) {
    throw ConstructionError("quadrature tolerance must lie in (0, 1e-2)");
  }
}

double BgMeasure::head_piece_integral(double s, double from, double to,
                                      double abs_tol) const {
  auto integrand = [this, s](double u) {
    return step_.pdf(u) * residual_.tail(s - u);
  };
  QuadratureOptions opt;
  opt.rel_tol = quad_tol_;
  opt.abs_tol = abs_tol;
  opt.max_panels = 4000;
  return integrate_or_throw(integrand,
                            geometric_breakpoints(from, to, step_.scale()), opt,
                            "conditional step integral");
}

double BgMeasure::w_head(double s) const {
  {
    std::shared_lock lock(memo_mutex_);
    auto it = w_head_memo_.find(s);
    if (it != w_head_memo_.end()) return it->second;
  }
  const double lo = step_.support_left();
  const double hi = s - residual_.z0();
  double value = 0.0;
  if (hi > lo) value = head_piece_integral(s, lo, hi, 0.0);
  {
    std::unique_lock lock(memo_mutex_);
    w_head_memo_.emplace(s, value);
  }
  return value;
}

double BgMeasure::w_eval(double x) const {
  const double s = -x;
  if (s - residual_.z0() <= step_.support_left()) return 1.0;
  const double w = w_head(s) + step_.sf(s - residual_.z0());
  return std::min(w, 1.0);
}

std::size_t BgMeasure::w_cache_size() const {
  std::shared_lock lock(memo_mutex_);
  return w_head_memo_.size();
}

double BgMeasure::kernel_sample(double y, Rng& rng) const {
  const double s = translation_ + barrier_ - y;
  const double lo = step_.support_left();
  const double z0 = residual_.z0();
  if (s - z0 <= lo) {
    // X + Z > s holds almost surely: the conditional law is the step law.
    return y + step_.sample_step(rng);
  }

  const double split = s - z0;
  const double head = w_head(s);
  const double tail = step_.sf(split);
  const double total = head + tail;

  const double target = rng.uniform_open() * total;
  if (target >= head) {
    // Above the split Z's tail clamps at 1, so the conditional CDF reduces
    // to the step survival function; invert it in closed form.
    double sf_value = tail - (target - head);
    sf_value = std::min(std::max(sf_value, std::numeric_limits<double>::min()), 1.0);
    return y + step_.quantile(sf_value);
  }

  // Bracketed bisection on N(a) = integral_lo^a f(u) P(Z > s-u) du. Only the
  // delta over the newly pinned subinterval is integrated per iteration.
  const double tol = 1e-10 * total;
  const double delta_tol = 1e-13 * total;
  double a_lo = lo, a_hi = split;
  double n_lo = 0.0, n_hi = head;
  for (int iter = 0; iter < kBisectionBudget && n_hi - n_lo > tol; ++iter) {
    const double mid = 0.5 * (a_lo + a_hi);
    if (mid <= a_lo || mid >= a_hi) break;
    const double n_mid = n_lo + head_piece_integral(s, a_lo, mid, delta_tol);
    if (n_mid < target) {
      a_lo = mid;
      n_lo = n_mid;
    } else {
      a_hi = mid;
      n_hi = n_mid;
    }
  }
  return y + 0.5 * (a_lo + a_hi);
}

double BgMeasure::step_log_lr(double y, double z) const {
  const double v = v_eval(z - barrier_ - translation_);
  if (!(v > 0.0)) {
    throw DomainError("v vanished at state " + std::to_string(z));
  }
  const double w = w_eval(y - barrier_ - translation_);
  return std::log(w) - std::log(v);
}

std::string BgMeasure::to_json() const {
  nlohmann::json j;
  j["step"] = nlohmann::json::parse(step_.to_json());
  j["b"] = barrier_;
  j["c"] = translation_;
  j["quadrature_tol"] = quad_tol_;
  return j.dump();
}

BgMeasure BgMeasure::from_json(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  try {
    StepLaw step = StepLaw::from_json(j.at("step").dump());
    const double tol = j.value("quadrature_tol", 1e-10);
    return BgMeasure(std::move(step), j.at("b").get<double>(),
                     j.at("c").get<double>(), tol);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad measure JSON: ") + e.what());
  }
}

double default_certify_t_max(const StepLaw& step) { return 1e8 * step.scale(); }

double certify_c(const StepLaw& step, double t_max, int grid_size) {
  if (grid_size <= 0) {
    throw CertificationFailure("certification grid is empty");
  }
  const ResidualLaw residual(step);
  // tail_difference is defined for t > max{2 z0, 0}; start the grid there.
  const double t_min =
      std::max(1.0, std::max(2.0 * residual.z0(), 0.0) * (1.0 + 1e-9) + 1e-12);
  if (!(t_max > t_min)) {
    throw CertificationFailure("certification range [" + std::to_string(t_min) +
                               ", " + std::to_string(t_max) + "] is empty");
  }

  std::vector<double> grid(grid_size);
  const double log_lo = std::log(t_min), log_hi = std::log(t_max);
  for (int i = 0; i < grid_size; ++i) {
    const double frac = grid_size == 1 ? 0.0 : static_cast<double>(i) / (grid_size - 1);
    grid[i] = std::exp(log_lo + frac * (log_hi - log_lo));
  }

  // Smallest grid point from which the difference stays nonpositive.
  int onset = -1;
  for (int i = grid_size - 1; i >= 0; --i) {
    if (tail_difference(residual, grid[i]) <= 0.0) {
      onset = i;
    } else {
      break;
    }
  }
  if (onset < 0) {
    throw CertificationFailure(
        "P(X+Z>t) <= P(Z>t) fails at every grid point up to t_max = " +
        std::to_string(t_max) + "; the measure is not a direct proposal here");
  }
  return grid[onset];
}

}  // namespace tailwalk
