#include "tailwalk/sampler.hpp"

#include <cmath>

#include "tailwalk/errors.hpp"

namespace tailwalk {

namespace {

void push_state(PathRecord& record, double state, std::uint64_t cap) {
  if (record.states.size() < cap) {
    record.states.push_back(state);
  } else {
    record.states_truncated = true;
  }
}

}  // namespace

PathRecord walk_under_p(const StepLaw& law, std::uint64_t horizon, double barrier,
                        Rng& rng, std::uint64_t state_cap) {
  if (horizon == 0) throw DomainError("walk_under_p requires horizon >= 1");
  PathRecord record;
  record.states.reserve(std::min<std::uint64_t>(horizon + 1, state_cap));
  record.states.push_back(0.0);
  double state = 0.0;
  for (std::uint64_t n = 1; n <= horizon; ++n) {
    state += law.sample_step(rng);
    push_state(record, state, state_cap);
    record.tau = n;
    record.final_state = state;
    if (state > barrier) {
      record.crossed = true;
      break;
    }
  }
  return record;
}

PathRecord walk_under_q(const BgMeasure& measure, std::uint64_t guard, Rng& rng,
                        std::uint64_t state_cap) {
  if (guard == 0) throw DomainError("walk_under_q requires guard >= 1");
  PathRecord record;
  record.states.push_back(0.0);
  const double barrier = measure.barrier();
  double state = 0.0;
  for (std::uint64_t n = 1; n <= guard; ++n) {
    const double next = measure.kernel_sample(state, rng);
    record.log_lr += measure.step_log_lr(state, next);
    state = next;
    push_state(record, state, state_cap);
    record.tau = n;
    record.final_state = state;
    if (state > barrier) {
      record.crossed = true;
      return record;
    }
  }
  record.guard_hit = true;
  return record;
}

double recompute_log_lr(const BgMeasure& measure, std::span<const double> states) {
  double total = 0.0;
  for (std::size_t n = 0; n + 1 < states.size(); ++n) {
    total += measure.step_log_lr(states[n], states[n + 1]);
  }
  return total;
}

ArSample ar_exact_sample(const BgMeasure& measure, std::uint64_t guard, Rng& rng,
                         bool strict, std::uint64_t state_cap) {
  ArSample result;
  while (true) {
    PathRecord path = walk_under_q(measure, guard, rng, state_cap);
    ++result.attempts;
    if (path.guard_hit) {
      throw BudgetExceeded("proposal path exhausted its " + std::to_string(guard) +
                           "-step guard during acceptance-rejection");
    }
    if (path.log_lr > kLogLrViolationTol) {
      ++result.lr_violations;
      if (strict) {
        throw DirectnessViolation(
            "path with positive log likelihood ratio under a proposal assumed "
            "direct: log_lr = " +
            std::to_string(path.log_lr) + ", tau = " + std::to_string(path.tau));
      }
    }
    const double u = rng.uniform01();
    if (u <= std::exp(path.log_lr)) {
      result.path = std::move(path);
      return result;
    }
  }
}

BernoulliSample bernoulli_crossing(const BgMeasure& measure, std::uint64_t guard,
                                   Rng& rng, bool strict, std::uint64_t state_cap) {
  BernoulliSample result;
  PathRecord path = walk_under_q(measure, guard, rng, state_cap);
  if (path.guard_hit) {
    throw BudgetExceeded("proposal path exhausted its " + std::to_string(guard) +
                         "-step guard during Bernoulli sampling");
  }
  if (path.log_lr > kLogLrViolationTol) {
    ++result.lr_violations;
    if (strict) {
      throw DirectnessViolation(
          "path with positive log likelihood ratio under a proposal assumed "
          "direct: log_lr = " +
          std::to_string(path.log_lr) + ", tau = " + std::to_string(path.tau));
    }
  }
  const double u = rng.uniform01();
  result.indicator = u <= std::exp(path.log_lr);
  result.path = std::move(path);
  return result;
}

std::vector<PathRecord> naive_conditional(const StepLaw& law, std::uint64_t horizon,
                                          double barrier, std::size_t want,
                                          std::uint64_t attempt_cap, Rng& rng,
                                          std::uint64_t state_cap,
                                          std::uint64_t* attempts_out) {
  std::vector<PathRecord> kept;
  kept.reserve(want);
  std::uint64_t attempts = 0;
  while (kept.size() < want) {
    if (attempts >= attempt_cap) {
      if (attempts_out) *attempts_out = attempts;
      throw BudgetExceeded("naive conditional sampler: " + std::to_string(attempts) +
                           " attempts yielded only " + std::to_string(kept.size()) +
                           " of " + std::to_string(want) + " crossing paths");
    }
    PathRecord path = walk_under_p(law, horizon, barrier, rng, state_cap);
    ++attempts;
    if (path.crossed) kept.push_back(std::move(path));
  }
  if (attempts_out) *attempts_out = attempts;
  return kept;
}

}  // namespace tailwalk
