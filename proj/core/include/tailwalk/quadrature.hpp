#pragma once

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include "tailwalk/errors.hpp"

namespace tailwalk {

/// Tolerances and budget for adaptive integration. The integral is accepted
/// once the summed panel error estimate drops below
/// max(abs_tol, rel_tol * |value|).
struct QuadratureOptions {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  int max_panels = 4000;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // summed |K15 - G7| estimates
  int panels = 0;
  bool converged = false;
};

namespace detail {

// Gauss-Kronrod 7-15 nodes and weights (QUADPACK dqk15).
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
};

struct PanelWorse {
  bool operator()(const Panel& x, const Panel& y) const { return x.error < y.error; }
};

template <class F>
Panel gk15_panel(F&& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double resk = fc * kWgk[7];
  double resg = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double sum = f(center - dx) + f(center + dx);
    resk += kWgk[j] * sum;
    if (j % 2 == 1) resg += kWg[(j - 1) / 2] * sum;
  }
  return Panel{a, b, resk * half, std::abs((resk - resg) * half)};
}

}  // namespace detail

/// Adaptive Gauss-Kronrod over [a, b], optionally pre-split at the given
/// interior breakpoints (kinks, scale changes). Panels are refined worst
/// first until the summed error estimate meets the tolerance.
template <class F>
QuadratureResult integrate_adaptive(F&& f, const std::vector<double>& breakpoints,
                                    const QuadratureOptions& opt = {}) {
  QuadratureResult result;
  if (breakpoints.size() < 2) {
    result.converged = true;
    return result;
  }

  std::priority_queue<detail::Panel, std::vector<detail::Panel>, detail::PanelWorse> heap;
  double total = 0.0, toterr = 0.0;
  int panels = 0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (breakpoints[i] == breakpoints[i + 1]) continue;
    auto p = detail::gk15_panel(f, breakpoints[i], breakpoints[i + 1]);
    total += p.value;
    toterr += p.error;
    heap.push(p);
    ++panels;
  }

  auto tolerance = [&] { return std::max(opt.abs_tol, opt.rel_tol * std::abs(total)); };

  while (toterr > tolerance() && panels < opt.max_panels && !heap.empty()) {
    detail::Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) continue;  // interval at float resolution
    auto left = detail::gk15_panel(f, worst.a, mid);
    auto right = detail::gk15_panel(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    toterr += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++panels;
  }

  // Re-sum panel values in extended precision; the incremental total drifts
  // after many heap updates.
  if (!heap.empty()) {
    long double acc = 0.0L;
    std::vector<detail::Panel> rest;
    rest.reserve(heap.size());
    while (!heap.empty()) {
      acc += heap.top().value;
      rest.push_back(heap.top());
      heap.pop();
    }
    total = static_cast<double>(acc);
  }

  result.value = total;
  result.error = toterr;
  result.panels = panels;
  result.converged = toterr <= tolerance();
  return result;
}

template <class F>
QuadratureResult integrate_adaptive(F&& f, double a, double b,
                                    const QuadratureOptions& opt = {}) {
  return integrate_adaptive(std::forward<F>(f), std::vector<double>{a, b}, opt);
}

template <class F>
double integrate_or_throw(F&& f, const std::vector<double>& breakpoints,
                          const QuadratureOptions& opt, const char* what) {
  auto r = integrate_adaptive(std::forward<F>(f), breakpoints, opt);
  if (!r.converged) {
    throw QuadratureError(std::string(what) + ": tolerance not reached within " +
                          std::to_string(r.panels) + " panels (err=" +
                          std::to_string(r.error) + ")");
  }
  return r.value;
}

/// Breakpoints a = x0 < x1 < ... = b with geometrically doubling spacing away
/// from a. Seeds adaptive integration of integrands whose mass sits near the
/// left endpoint of a long interval.
inline std::vector<double> geometric_breakpoints(double a, double b, double first_width) {
  std::vector<double> pts{a};
  double w = std::max(first_width, 1e-12 * std::max(1.0, std::abs(a)));
  double x = a;
  while (x + w < b) {
    x += w;
    pts.push_back(x);
    w *= 2.0;
    if (pts.size() > 200) break;
  }
  pts.push_back(b);
  return pts;
}

/// Geometric grading from both endpoints toward the middle, for integrands
/// with humps at both ends (tail-tail convolutions).
inline std::vector<double> two_sided_geometric_breakpoints(double a, double b,
                                                           double first_width) {
  const double mid = 0.5 * (a + b);
  std::vector<double> pts{a};
  double w = std::max(first_width, 1e-12 * std::max(1.0, std::abs(a)));
  double x = a;
  while (x + w < mid) {
    x += w;
    pts.push_back(x);
    w *= 2.0;
    if (pts.size() > 200) break;
  }
  std::vector<double> right{b};
  w = std::max(first_width, 1e-12 * std::max(1.0, std::abs(b)));
  x = b;
  while (x - w > mid) {
    x -= w;
    right.push_back(x);
    w *= 2.0;
    if (right.size() > 200) break;
  }
  pts.push_back(mid);
  pts.insert(pts.end(), right.rbegin(), right.rend());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

}  // namespace tailwalk
