#include "tailwalk/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "tailwalk/analysis.hpp"
#include "tailwalk/bg_measure.hpp"
#include "tailwalk/sampler.hpp"
#include "tailwalk/stats.hpp"

namespace tailwalk {

namespace {

using nlohmann::json;

constexpr const char* kVersion = "0.1.0";
constexpr std::uint64_t kSummaryStateCap = 1;  // keep only S_0 on bulk runs

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string fmt(std::uint64_t x) { return std::to_string(x); }
std::string fmt(bool x) { return x ? "1" : "0"; }

double quantile_nearest(std::vector<double> values, double q) {
  if (values.empty()) return std::nan("");
  std::sort(values.begin(), values.end());
  const auto n = values.size();
  const std::size_t idx = std::min<std::size_t>(
      n - 1, static_cast<std::size_t>(std::ceil(q * static_cast<double>(n))) -
                 (q > 0.0 ? 1 : 0));
  return values[idx];
}

std::uint64_t fnv1a_hash(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// One replication's worth of path summary for CSV and estimates.
struct RepSummary {
  std::uint64_t tau = 0;
  double s_tau = 0.0;
  double log_lr = 0.0;
  bool crossed = false;
  bool guard_hit = false;
  std::uint64_t attempts = 0;
  std::uint64_t lr_violations = 0;
};

RepSummary summarize(const PathRecord& p) {
  RepSummary s;
  s.tau = p.tau;
  s.s_tau = p.final_state;
  s.log_lr = p.log_lr;
  s.crossed = p.crossed;
  s.guard_hit = p.guard_hit;
  return s;
}

std::vector<double> default_alpha_grid() {
  return {1.1, 1.2, 1.3, 1.4, 1.5, 1.6, 1.7, 1.8, 1.9};
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) {
    const double f = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
    g[i] = std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo)));
  }
  return g;
}

std::vector<double> default_t_grid(const ResidualLaw& residual) {
  const double z0 = residual.z0();
  const double lo = std::max({4.0, 2.2 * (z0 + 1.0), 2.2});
  const double hi = std::max(1e8 * residual.step().scale(), 100.0 * lo);
  return log_grid(lo, hi, 12);
}

struct ResolvedMeasure {
  BgMeasure measure;
  bool auto_certified = false;
};

ResolvedMeasure make_measure(const ExperimentConfig& cfg) {
  const StepLaw& step = *cfg.step;
  if (cfg.translation.has_value()) {
    return {BgMeasure(step, cfg.barrier, *cfg.translation, cfg.quadrature_tol), false};
  }
  const double t_max =
      cfg.certify_t_max > 0.0 ? cfg.certify_t_max : default_certify_t_max(step);
  const double c_star = certify_c(step, t_max, cfg.certify_grid_size);
  return {BgMeasure(step, cfg.barrier, c_star, cfg.quadrature_tol), true};
}

json base_manifest(const ExperimentConfig& cfg) {
  json m;
  m["subcommand"] = subcommand_name(cfg.subcommand);
  m["seed"] = cfg.seed;
  m["config"] = json::parse(cfg.canonical_json());
  m["config_hash"] = hex64(fnv1a_hash(cfg.canonical_json()));
  m["generator"] = {
      {"family", "mt19937_64"},
      {"stream_derivation",
       "splitmix64 applied twice to (master_seed XOR 0x9E3779B97F4A7C15 * (stream+1))"},
      {"uniform", "top 53 bits / 2^53"}};
  m["version"] = kVersion;
  return m;
}

void attach_diagnostics(json& manifest, const Diagnostics& d) {
  manifest["diagnostics"] = {{"guard_hits", d.guard_hits},
                             {"lr_violations", d.lr_violations},
                             {"quadrature_failures", d.quadrature_failures}};
}

std::string path_row(std::uint64_t run_id, const RepSummary& s, bool accepted) {
  return fmt(run_id) + "," + fmt(s.tau) + "," + fmt(s.s_tau) + "," + fmt(s.log_lr) +
         "," + fmt(s.crossed) + "," + fmt(s.guard_hit) + "," + fmt(accepted);
}

json mean_json(const MeanWithError& m) {
  return {{"mean", m.mean}, {"std_error", m.std_error}, {"n", m.n}};
}

// ---------------------------------------------------------------------------
// Pipelines
// ---------------------------------------------------------------------------

ExperimentReport run_constants(const ExperimentConfig& cfg) {
  ExperimentReport report;
  report.csv_header = "alpha,threshold_integral,k_alpha,identity_gap";
  const auto grid = cfg.alpha_grid.empty() ? default_alpha_grid() : cfg.alpha_grid;

  json signs = json::object();
  for (double alpha : grid) {
    const double ti = threshold_integral(alpha);
    const double ka = k_alpha(alpha);
    // K_alpha = 2 (alpha-1) * threshold_integral(alpha): same dichotomy by
    // two quadrature routes.
    const double gap = ka - 2.0 * (alpha - 1.0) * ti;
    report.csv_rows.push_back(fmt(alpha) + "," + fmt(ti) + "," + fmt(ka) + "," +
                              fmt(gap));
    signs[fmt(alpha)] = ti < 0.0 ? "negative" : (ti > 0.0 ? "positive" : "zero");
  }
  const double root = threshold_root();

  json manifest = base_manifest(cfg);
  manifest["estimates"] = {{"threshold_root", root}, {"signs", signs}};
  attach_diagnostics(manifest, report.diagnostics);
  report.manifest_json = manifest.dump(2);
  return report;
}

void decomposition_rows(const ResidualLaw& residual, const std::vector<double>& grid,
                        std::vector<std::string>& rows, int& negatives,
                        int& positives) {
  const double alpha = residual.step().alpha();
  const bool have_k = alpha > 1.0 && alpha < 2.0;
  const double k = have_k ? k_alpha(alpha) : std::nan("");
  for (double t : grid) {
    const DecompositionTerms d = decomposition(residual, t);
    const double diff = d.difference();
    (diff < 0.0 ? negatives : positives) += 1;
    const double scale =
        residual.tail(t) * residual.step().sf(t);
    const double ratio_to_k = have_k ? diff / (scale * k) : std::nan("");
    rows.push_back(fmt(t) + "," + fmt(d.p) + "," + fmt(d.q) + "," + fmt(d.eps1) +
                   "," + fmt(d.eps2) + "," + fmt(diff) + "," + fmt(ratio_to_k));
  }
}

ExperimentReport run_dichotomy(const ExperimentConfig& cfg) {
  ExperimentReport report;
  report.csv_header = "alpha_or_t,p,q,eps1,eps2,difference,ratio_to_K";
  const ResidualLaw residual(*cfg.step);
  const auto grid = cfg.t_grid.empty() ? default_t_grid(residual) : cfg.t_grid;

  int negatives = 0, positives = 0;
  decomposition_rows(residual, grid, report.csv_rows, negatives, positives);

  json manifest = base_manifest(cfg);
  manifest["estimates"] = {{"negative_points", negatives},
                           {"positive_points", positives},
                           {"z0", residual.z0()}};
  const double alpha = cfg.step->alpha();
  if (alpha > 1.0 && alpha < 2.0) {
    manifest["estimates"]["k_alpha"] = k_alpha(alpha);
  }
  attach_diagnostics(manifest, report.diagnostics);
  report.manifest_json = manifest.dump(2);
  return report;
}

ExperimentReport run_certify(const ExperimentConfig& cfg) {
  ExperimentReport report;
  report.csv_header = "alpha_or_t,p,q,eps1,eps2,difference,ratio_to_K";
  const StepLaw& step = *cfg.step;
  const double t_max =
      cfg.certify_t_max > 0.0 ? cfg.certify_t_max : default_certify_t_max(step);
  // certify_c throws CertificationFailure when no grid point qualifies; the
  // CLI maps that to the directness exit code.
  const double c_star = certify_c(step, t_max, cfg.certify_grid_size);
  report.resolved_c = c_star;

  const ResidualLaw residual(step);
  const double t_min =
      std::max(1.0, std::max(2.0 * residual.z0(), 0.0) * (1.0 + 1e-9) + 1e-12);
  int negatives = 0, positives = 0;
  decomposition_rows(residual, log_grid(t_min, t_max, std::min(cfg.certify_grid_size, 64)),
                     report.csv_rows, negatives, positives);

  json manifest = base_manifest(cfg);
  manifest["resolved_c"] = c_star;
  manifest["estimates"] = {{"certified_c", c_star},
                           {"t_max", t_max},
                           {"negative_points", negatives},
                           {"positive_points", positives}};
  attach_diagnostics(manifest, report.diagnostics);
  report.manifest_json = manifest.dump(2);
  return report;
}

ExperimentReport run_sample(const ExperimentConfig& cfg) {
  ExperimentReport report;
  report.csv_header = "run_id,tau,s_tau,log_lr,crossed,guard_hit,accepted";
  auto [measure, auto_certified] = make_measure(cfg);
  report.resolved_c = measure.translation();

  const std::uint64_t n = cfg.replications;
  std::vector<RepSummary> reps(n);
  parallel_for(n, cfg.threads, [&](std::uint64_t i) {
    Rng rng(cfg.seed, i);
    ArSample s = ar_exact_sample(measure, cfg.guard, rng, cfg.strict, kSummaryStateCap);
    RepSummary r = summarize(s.path);
    r.attempts = s.attempts;
    r.lr_violations = s.lr_violations;
    reps[i] = r;
  });

  std::uint64_t attempts = 0;
  std::vector<double> taus, overshoots, log_lrs;
  taus.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    report.csv_rows.push_back(path_row(i, reps[i], true));
    attempts += reps[i].attempts;
    report.diagnostics.lr_violations += reps[i].lr_violations;
    taus.push_back(static_cast<double>(reps[i].tau));
    overshoots.push_back(reps[i].s_tau - cfg.barrier);
    log_lrs.push_back(reps[i].log_lr);
  }
  const double rate = static_cast<double>(n) / static_cast<double>(attempts);

  json manifest = base_manifest(cfg);
  manifest["resolved_c"] = measure.translation();
  manifest["auto_certified"] = auto_certified;
  manifest["estimates"] = {
      {"acceptance_rate",
       {{"mean", rate}, {"std_error", binomial_std_error(rate, attempts)}, {"n", attempts}}},
      {"tau", mean_json(sample_mean(taus))},
      {"tau_median", quantile_nearest(taus, 0.5)},
      {"overshoot_quantiles",
       {{"q50", quantile_nearest(overshoots, 0.5)},
        {"q90", quantile_nearest(overshoots, 0.9)},
        {"q99", quantile_nearest(overshoots, 0.99)}}},
      {"max_log_lr", *std::max_element(log_lrs.begin(), log_lrs.end())},
      {"attempts", attempts}};
  attach_diagnostics(manifest, report.diagnostics);
  report.manifest_json = manifest.dump(2);
  if (report.diagnostics.lr_violations > 0 && (auto_certified || cfg.strict)) {
    report.exit_code = ExitCode::DirectnessViolation;
  }
  return report;
}

ExperimentReport run_naive(const ExperimentConfig& cfg) {
  ExperimentReport report;
  report.csv_header = "run_id,tau,s_tau,log_lr,crossed,guard_hit,accepted";
  const StepLaw& step = *cfg.step;

  const std::uint64_t n = cfg.replications;
  std::vector<RepSummary> reps(n);
  std::vector<std::uint64_t> attempts(n, 0);
  parallel_for(n, cfg.threads, [&](std::uint64_t i) {
    Rng rng(cfg.seed, i);
    auto kept = naive_conditional(step, cfg.horizon, cfg.barrier, 1, cfg.attempt_cap,
                                  rng, kSummaryStateCap, &attempts[i]);
    reps[i] = summarize(kept.front());
  });

  std::uint64_t total_attempts = 0;
  std::vector<double> taus, overshoots;
  for (std::uint64_t i = 0; i < n; ++i) {
    report.csv_rows.push_back(path_row(i, reps[i], true));
    total_attempts += attempts[i];
    taus.push_back(static_cast<double>(reps[i].tau));
    overshoots.push_back(reps[i].s_tau - cfg.barrier);
  }
  const double freq = static_cast<double>(n) / static_cast<double>(total_attempts);

  json manifest = base_manifest(cfg);
  manifest["estimates"] = {
      {"crossing_frequency",
       {{"mean", freq},
        {"std_error", binomial_std_error(freq, total_attempts)},
        {"n", total_attempts}}},
      {"tau", mean_json(sample_mean(taus))},
      {"tau_median", quantile_nearest(taus, 0.5)},
      {"overshoot_quantiles",
       {{"q50", quantile_nearest(overshoots, 0.5)},
        {"q90", quantile_nearest(overshoots, 0.9)},
        {"q99", quantile_nearest(overshoots, 0.99)}}},
      {"attempts", total_attempts}};
  attach_diagnostics(manifest, report.diagnostics);
  report.manifest_json = manifest.dump(2);
  return report;
}

ExperimentReport run_hitting(const ExperimentConfig& cfg) {
  ExperimentReport report;
  report.csv_header = "barrier,run_id,tau,s_tau,log_lr,crossed,guard_hit";
  const std::vector<double> barriers =
      cfg.barriers.empty() ? std::vector<double>{10, 20, 40, 80, 160} : cfg.barriers;
  const std::uint64_t n = cfg.replications;

  json per_barrier = json::array();
  std::vector<double> barrier_values, mean_taus;
  for (std::size_t bi = 0; bi < barriers.size(); ++bi) {
    ExperimentConfig sub = cfg;
    sub.barrier = barriers[bi];
    auto [measure, auto_certified] = make_measure(sub);
    if (bi == 0) report.resolved_c = measure.translation();

    std::vector<RepSummary> reps(n);
    parallel_for(n, cfg.threads, [&](std::uint64_t i) {
      Rng rng(cfg.seed, bi * n + i);
      reps[i] = summarize(walk_under_q(measure, cfg.guard, rng, kSummaryStateCap));
    });

    std::vector<double> taus;
    taus.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
      const RepSummary& r = reps[i];
      report.csv_rows.push_back(fmt(barriers[bi]) + "," + fmt(i) + "," + fmt(r.tau) +
                                "," + fmt(r.s_tau) + "," + fmt(r.log_lr) + "," +
                                fmt(r.crossed) + "," + fmt(r.guard_hit));
      report.diagnostics.guard_hits += r.guard_hit ? 1 : 0;
      if (r.log_lr > kLogLrViolationTol) report.diagnostics.lr_violations += 1;
      taus.push_back(static_cast<double>(r.tau));
    }
    const auto m = sample_mean(taus);
    json entry = {{"barrier", barriers[bi]}, {"tau", mean_json(m)}};
    if (n >= 20) {
      const std::size_t k = std::max<std::size_t>(1, std::min<std::size_t>(1000, n / 10));
      entry["hill_tail_index"] = hill_estimator(taus, k);
      entry["max_tau"] = quantile_nearest(taus, 1.0);
    }
    per_barrier.push_back(entry);
    barrier_values.push_back(barriers[bi]);
    mean_taus.push_back(m.mean);
  }

  json manifest = base_manifest(cfg);
  if (report.resolved_c) manifest["resolved_c"] = *report.resolved_c;
  manifest["estimates"] = {{"per_barrier", per_barrier}};
  if (barriers.size() >= 2) {
    const LinearFit fit = linear_fit(barrier_values, mean_taus);
    manifest["estimates"]["linear_fit"] = {{"slope", fit.slope},
                                           {"intercept", fit.intercept},
                                           {"r_squared", fit.r_squared}};
  }
  attach_diagnostics(manifest, report.diagnostics);
  report.manifest_json = manifest.dump(2);
  if (report.diagnostics.guard_hits > 0) {
    report.exit_code = ExitCode::BudgetExhausted;
  }
  return report;
}

ExperimentReport run_crosscheck(const ExperimentConfig& cfg) {
  ExperimentReport report;
  report.csv_header = "arm,run_id,tau,s_tau";
  const StepLaw& step = *cfg.step;
  auto [measure, auto_certified] = make_measure(cfg);
  report.resolved_c = measure.translation();
  const std::uint64_t n = cfg.replications;

  // Arm 1: horizon oracle. Streams [0, n).
  std::vector<RepSummary> naive_reps(n);
  std::vector<std::uint64_t> naive_attempts(n, 0);
  parallel_for(n, cfg.threads, [&](std::uint64_t i) {
    Rng rng(cfg.seed, i);
    std::uint64_t tries = 0;
    while (true) {
      PathRecord p = walk_under_p(step, cfg.horizon, cfg.barrier, rng, kSummaryStateCap);
      ++tries;
      if (p.crossed) {
        naive_reps[i] = summarize(p);
        break;
      }
      if (tries >= cfg.attempt_cap) {
        throw BudgetExceeded("crosscheck naive arm exhausted its attempt cap");
      }
    }
    naive_attempts[i] = tries;
  });

  // Arm 2: acceptance-rejection. Streams [n, 2n).
  std::vector<RepSummary> ar_reps(n);
  parallel_for(n, cfg.threads, [&](std::uint64_t i) {
    Rng rng(cfg.seed, n + i);
    ArSample s = ar_exact_sample(measure, cfg.guard, rng, cfg.strict, kSummaryStateCap);
    RepSummary r = summarize(s.path);
    r.attempts = s.attempts;
    r.lr_violations = s.lr_violations;
    ar_reps[i] = r;
  });

  std::uint64_t naive_total = 0, ar_total = 0;
  std::vector<double> naive_taus, naive_over, ar_taus_t, ar_over_t;
  std::uint64_t ar_within_horizon = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const RepSummary& a = naive_reps[i];
    report.csv_rows.push_back("naive," + fmt(i) + "," + fmt(a.tau) + "," + fmt(a.s_tau));
    naive_total += naive_attempts[i];
    naive_taus.push_back(static_cast<double>(a.tau));
    naive_over.push_back(a.s_tau - cfg.barrier);
  }
  for (std::uint64_t i = 0; i < n; ++i) {
    const RepSummary& a = ar_reps[i];
    report.csv_rows.push_back("ar," + fmt(i) + "," + fmt(a.tau) + "," + fmt(a.s_tau));
    ar_total += a.attempts;
    report.diagnostics.lr_violations += a.lr_violations;
    if (a.tau <= cfg.horizon) {
      ++ar_within_horizon;
      ar_taus_t.push_back(static_cast<double>(a.tau));
      ar_over_t.push_back(a.s_tau - cfg.barrier);
    }
  }

  // Both arms estimate P(tau <= horizon): kept/attempts for the oracle,
  // (accepted AND tau <= horizon)/attempts for acceptance-rejection.
  const double p_naive = static_cast<double>(n) / static_cast<double>(naive_total);
  const double p_ar =
      static_cast<double>(ar_within_horizon) / static_cast<double>(ar_total);
  const double se_naive = binomial_std_error(p_naive, naive_total);
  const double se_ar = binomial_std_error(p_ar, ar_total);
  const double z = (p_naive - p_ar) / std::sqrt(se_naive * se_naive + se_ar * se_ar);

  const KsResult ks_tau = ks_two_sample(naive_taus, ar_taus_t);
  const KsResult ks_over = ks_two_sample(naive_over, ar_over_t);

  json manifest = base_manifest(cfg);
  manifest["resolved_c"] = measure.translation();
  manifest["auto_certified"] = auto_certified;
  manifest["estimates"] = {
      {"p_naive_horizon",
       {{"mean", p_naive}, {"std_error", se_naive}, {"n", naive_total}}},
      {"p_ar_restricted", {{"mean", p_ar}, {"std_error", se_ar}, {"n", ar_total}}},
      {"rate_z_score", z},
      {"ar_within_horizon", ar_within_horizon},
      {"ks_tau",
       {{"statistic", ks_tau.statistic},
        {"threshold", ks_tau.threshold},
        {"reject", ks_tau.reject}}},
      {"ks_overshoot",
       {{"statistic", ks_over.statistic},
        {"threshold", ks_over.threshold},
        {"reject", ks_over.reject}}}};
  attach_diagnostics(manifest, report.diagnostics);
  report.manifest_json = manifest.dump(2);
  if (report.diagnostics.lr_violations > 0 && (auto_certified || cfg.strict)) {
    report.exit_code = ExitCode::DirectnessViolation;
  }
  return report;
}

}  // namespace

std::string subcommand_name(Subcommand s) {
  switch (s) {
    case Subcommand::Constants: return "constants";
    case Subcommand::Dichotomy: return "dichotomy";
    case Subcommand::Sample: return "sample";
    case Subcommand::Naive: return "naive";
    case Subcommand::Hitting: return "hitting";
    case Subcommand::CertifyC: return "certify-c";
    case Subcommand::Crosscheck: return "crosscheck";
  }
  return "unknown";
}

Subcommand subcommand_from_name(const std::string& name) {
  if (name == "constants") return Subcommand::Constants;
  if (name == "dichotomy") return Subcommand::Dichotomy;
  if (name == "sample") return Subcommand::Sample;
  if (name == "naive") return Subcommand::Naive;
  if (name == "hitting") return Subcommand::Hitting;
  if (name == "certify-c") return Subcommand::CertifyC;
  if (name == "crosscheck") return Subcommand::Crosscheck;
  throw ConfigError("unknown subcommand: " + name);
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text,
                                                  Subcommand sub) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  static const std::vector<std::string> known = {
      "step",        "b",       "c",          "quadrature_tol", "seed",
      "replications", "horizon", "guard",      "attempt_cap",    "strict",
      "t_grid",      "alpha_grid", "barriers", "certify_t_max",
      "certify_grid_size", "threads"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(known.begin(), known.end(), it.key()) == known.end()) {
      throw ConfigError("unknown config key: " + it.key());
    }
  }

  ExperimentConfig cfg;
  cfg.subcommand = sub;
  try {
    if (j.contains("step")) cfg.step = StepLaw::from_json(j.at("step").dump());
    cfg.barrier = j.value("b", 0.0);
    if (j.contains("c")) {
      if (j.at("c").is_string()) {
        if (j.at("c").get<std::string>() != "auto") {
          throw ConfigError("config key \"c\" must be a number or \"auto\"");
        }
      } else {
        cfg.translation = j.at("c").get<double>();
      }
    }
    cfg.quadrature_tol = j.value("quadrature_tol", 1e-10);
    cfg.seed = j.value("seed", std::uint64_t{1});
    cfg.replications = j.value("replications", std::uint64_t{0});
    cfg.horizon = j.value("horizon", std::uint64_t{10'000});
    cfg.guard = j.value("guard", std::uint64_t{10'000'000});
    cfg.attempt_cap = j.value("attempt_cap", std::uint64_t{1'000'000});
    cfg.strict = j.value("strict", true);
    cfg.t_grid = j.value("t_grid", std::vector<double>{});
    cfg.alpha_grid = j.value("alpha_grid", std::vector<double>{});
    cfg.barriers = j.value("barriers", std::vector<double>{});
    cfg.certify_t_max = j.value("certify_t_max", 0.0);
    cfg.certify_grid_size = j.value("certify_grid_size", 200);
    cfg.threads = j.value("threads", 0u);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

void ExperimentConfig::validate() const {
  const bool needs_step = subcommand != Subcommand::Constants;
  if (needs_step && !step.has_value()) {
    throw ConfigError("subcommand " + subcommand_name(subcommand) +
                      " requires a \"step\" law");
  }
  const bool samples = subcommand == Subcommand::Sample ||
                       subcommand == Subcommand::Naive ||
                       subcommand == Subcommand::Hitting ||
                       subcommand == Subcommand::Crosscheck;
  if (samples && replications == 0) {
    throw ConfigError("replications must be >= 1 for subcommand " +
                      subcommand_name(subcommand));
  }
  if (!(barrier >= 0.0)) throw ConfigError("barrier b must be >= 0");
  if (samples && (horizon == 0 || guard == 0)) {
    throw ConfigError("horizon and guard must be >= 1");
  }
  if (!(quadrature_tol > 0.0) || quadrature_tol >= 1e-2) {
    throw ConfigError("quadrature_tol must lie in (0, 1e-2)");
  }
  for (double a : alpha_grid) {
    if (!(a > 1.0) || !(a < 2.0)) {
      throw ConfigError("alpha_grid entries must lie in (1, 2)");
    }
  }
  for (double t : t_grid) {
    if (!(t > 0.0)) throw ConfigError("t_grid entries must be positive");
  }
  for (double b : barriers) {
    if (!(b >= 0.0)) throw ConfigError("barriers must be >= 0");
  }
  if (certify_grid_size < 0) throw ConfigError("certify_grid_size must be >= 0");
}

std::string ExperimentConfig::canonical_json() const {
  json j;
  j["subcommand"] = subcommand_name(subcommand);
  if (step) j["step"] = json::parse(step->to_json());
  j["b"] = barrier;
  if (translation) {
    j["c"] = *translation;
  } else {
    j["c"] = "auto";
  }
  j["quadrature_tol"] = quadrature_tol;
  j["seed"] = seed;
  j["replications"] = replications;
  j["horizon"] = horizon;
  j["guard"] = guard;
  j["attempt_cap"] = attempt_cap;
  j["strict"] = strict;
  j["t_grid"] = t_grid;
  j["alpha_grid"] = alpha_grid;
  j["barriers"] = barriers;
  j["certify_t_max"] = certify_t_max;
  j["certify_grid_size"] = certify_grid_size;
  return j.dump();
}

void parallel_for(std::uint64_t n, unsigned threads,
                  const std::function<void(std::uint64_t)>& body) {
  if (n == 0) return;
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  unsigned workers = threads == 0 ? hw : threads;
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, n));
  if (workers <= 1) {
    for (std::uint64_t i = 0; i < n; ++i) body(i);
    return;
  }

  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> stop{false};
  std::mutex error_mutex;
  std::exception_ptr first_error;

  auto worker = [&] {
    while (!stop.load(std::memory_order_relaxed)) {
      const std::uint64_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::scoped_lock lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        stop.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  switch (config.subcommand) {
    case Subcommand::Constants: return run_constants(config);
    case Subcommand::Dichotomy: return run_dichotomy(config);
    case Subcommand::Sample: return run_sample(config);
    case Subcommand::Naive: return run_naive(config);
    case Subcommand::Hitting: return run_hitting(config);
    case Subcommand::CertifyC: return run_certify(config);
    case Subcommand::Crosscheck: return run_crosscheck(config);
  }
  throw ConfigError("unhandled subcommand");
}

void emit_report(const ExperimentReport& report, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw IoError("cannot create output directory " + out_dir.string() + ": " +
                  ec.message());
  }
  {
    std::ofstream csv(out_dir / "results.csv", std::ios::binary);
    if (!csv) throw IoError("cannot open results.csv for writing");
    csv << report.csv_header << "\n";
    for (const auto& row : report.csv_rows) csv << row << "\n";
    if (!csv) throw IoError("failed writing results.csv");
  }
  {
    std::ofstream mf(out_dir / "manifest.json", std::ios::binary);
    if (!mf) throw IoError("cannot open manifest.json for writing");
    mf << report.manifest_json << "\n";
    if (!mf) throw IoError("failed writing manifest.json");
  }
}

StepLaw canonical_config_a() { return StepLaw::shifted_lomax(1.2, 1.0, 6.0); }
StepLaw canonical_config_b() { return StepLaw::shifted_lomax(1.8, 1.0, 2.25); }
StepLaw canonical_config_c() { return StepLaw::shifted_lomax(2.5, 1.0, 5.0 / 3.0); }

}  // namespace tailwalk
