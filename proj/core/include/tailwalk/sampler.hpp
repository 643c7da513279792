#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tailwalk/bg_measure.hpp"
#include "tailwalk/rng.hpp"
#include "tailwalk/step_law.hpp"

namespace tailwalk {

/// One simulated path. states always begins at 0 and is truncated beyond
/// state_cap entries (tau, final_state and log_lr stay exact regardless);
/// paths in the infinite-mean-hitting-time regime can be enormous.
struct PathRecord {
  std::vector<double> states;
  std::uint64_t tau = 0;      // steps taken; first-crossing index when crossed
  double final_state = 0.0;   // S_tau
  bool crossed = false;       // final_state > b at step tau, none earlier
  bool guard_hit = false;     // stopped by the step guard, not by crossing
  double log_lr = 0.0;        // log dP/dQ up to tau; 0 for paths under P
  bool states_truncated = false;

  double overshoot(double barrier) const { return final_state - barrier; }
};

inline constexpr std::uint64_t kDefaultStateCap = 1 << 16;

/// Tolerance above which an accumulated log likelihood ratio counts as a
/// directness violation; absorbs per-step quadrature rounding on genuinely
/// nonpositive values.
inline constexpr double kLogLrViolationTol = 1e-9;

/// Simulate iid steps under the original law until the first crossing of
/// `barrier` or `horizon` steps.
PathRecord walk_under_p(const StepLaw& law, std::uint64_t horizon, double barrier,
                        Rng& rng, std::uint64_t state_cap = kDefaultStateCap);

/// Simulate under the proposal kernel until crossing or `guard` steps,
/// accumulating the log likelihood ratio one transition at a time.
/// A guard hit is flagged on the record, never silently dropped.
PathRecord walk_under_q(const BgMeasure& measure, std::uint64_t guard, Rng& rng,
                        std::uint64_t state_cap = kDefaultStateCap);

/// Recompute the telescoped log likelihood ratio from a stored state
/// sequence; equals PathRecord::log_lr up to accumulation order.
double recompute_log_lr(const BgMeasure& measure, std::span<const double> states);

struct ArSample {
  PathRecord path;
  std::uint64_t attempts = 0;       // rejections + 1
  std::uint64_t lr_violations = 0;  // paths seen with log_lr > tolerance
};

/// Acceptance-rejection with C = 1: draw Q-paths and uniforms until
/// U <= exp(log_lr). The accepted path is an exact draw from the original
/// law conditioned on a finite crossing time.
///
/// In strict mode a path with log_lr above kLogLrViolationTol aborts with
/// DirectnessViolation -- the detector for a non-direct regime. Non-strict
/// mode counts violations and keeps going (the caller owns the bias
/// assessment). Guard hits raise BudgetExceeded.
ArSample ar_exact_sample(const BgMeasure& measure, std::uint64_t guard, Rng& rng,
                         bool strict = true,
                         std::uint64_t state_cap = kDefaultStateCap);

struct BernoulliSample {
  bool indicator = false;
  PathRecord path;
  std::uint64_t lr_violations = 0;
};

/// One Q-path and one uniform; indicator = 1 with probability
/// P(tau_b < infinity), in which case the path is conditionally distributed
/// as the original law given crossing. Error behavior as ar_exact_sample.
BernoulliSample bernoulli_crossing(const BgMeasure& measure, std::uint64_t guard,
                                   Rng& rng, bool strict = true,
                                   std::uint64_t state_cap = kDefaultStateCap);

/// Horizon oracle: repeat walk_under_p, keep paths that crossed within the
/// horizon, until `want` of them are collected. Exact draws from the law
/// conditioned on {tau <= horizon}. Throws BudgetExceeded at attempt_cap.
/// When attempts_out is given it receives the total number of walks run
/// (kept + discarded), the denominator of the crossing-frequency estimate.
std::vector<PathRecord> naive_conditional(const StepLaw& law, std::uint64_t horizon,
                                          double barrier, std::size_t want,
                                          std::uint64_t attempt_cap, Rng& rng,
                                          std::uint64_t state_cap = kDefaultStateCap,
                                          std::uint64_t* attempts_out = nullptr);

}  // namespace tailwalk
