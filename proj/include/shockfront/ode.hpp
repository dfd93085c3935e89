#pragma once

// Adaptive embedded Runge-Kutta pair (Dormand-Prince 5(4), FSAL) for scalar
// ODEs, with cubic-Hermite dense output on accepted steps. Scalar is all the
// library needs: characteristics, boundary curves and Riccati trajectories are
// one-dimensional; coupled marching is done by the angular solver itself.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "shockfront/errors.hpp"

namespace shockfront {

struct OdeOptions {
  double abs_tol = 1e-9;
  double rel_tol = 1e-9;
  double max_step = 0.0;     // 0 = unlimited
  double initial_step = 0.0; // 0 = auto
  std::size_t max_steps = 2'000'000;
};

/// Accepted-step record: y and y' at the step start; Hermite data for [t, t_next].
struct OdeNode {
  double t;
  double y;
  double dy;
};

class OdeSolution {
public:
  std::vector<OdeNode> nodes; // includes the final point
  bool reached_end = false;
  double stop_time = 0.0;     // where integration actually stopped

  double back_y() const { return nodes.back().y; }

  /// Cubic Hermite evaluation; clamps outside the covered interval.
  double operator()(double t) const {
    if (nodes.size() == 1) return nodes.front().y;
    const bool fwd = nodes.back().t >= nodes.front().t;
    auto cmp = [fwd](const OdeNode& n, double tt) { return fwd ? n.t < tt : n.t > tt; };
    auto it = std::lower_bound(nodes.begin(), nodes.end(), t, cmp);
    if (it == nodes.begin()) ++it;
    if (it == nodes.end()) --it;
    const OdeNode& b = *it;
    const OdeNode& a = *(it - 1);
    const double h = b.t - a.t;
    if (h == 0.0) return a.y;
    const double s = (t - a.t) / h;
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * a.y + (s3 - 2 * s2 + s) * h * a.dy +
           (-2 * s3 + 3 * s2) * b.y + (s3 - s2) * h * b.dy;
  }
};

namespace detail {
// Dormand-Prince coefficients.
constexpr double dp_c[7] = {0., 1. / 5, 3. / 10, 4. / 5, 8. / 9, 1., 1.};
constexpr double dp_a[7][6] = {
    {},
    {1. / 5},
    {3. / 40, 9. / 40},
    {44. / 45, -56. / 15, 32. / 9},
    {19372. / 6561, -25360. / 2187, 64448. / 6561, -212. / 729},
    {9017. / 3168, -355. / 33, 46732. / 5247, 49. / 176, -5103. / 18656},
    {35. / 384, 0., 500. / 1113, 125. / 192, -2187. / 6784, 11. / 84}};
constexpr double dp_e[7] = {71. / 57600,  0.,          -71. / 16695, 71. / 1920,
                            -17253. / 339200, 22. / 525, -1. / 40};
} // namespace detail

/// Integrates y' = f(t, y) from (t0, y0) to t1 (either direction).
/// `stop` (optional) is queried after every accepted step; returning true ends
/// the integration there with reached_end=false.
inline OdeSolution integrate_ode(const std::function<double(double, double)>& f, double t0,
                                 double y0, double t1, const OdeOptions& opt = {},
                                 const std::function<bool(double, double)>& stop = {}) {
  OdeSolution sol;
  const double dir = (t1 >= t0) ? 1.0 : -1.0;
  double t = t0, y = y0;
  double k0 = f(t, y);
  sol.nodes.push_back({t, y, k0});
  if (t0 == t1) {
    sol.reached_end = true;
    sol.stop_time = t0;
    return sol;
  }

  double h = opt.initial_step > 0.0
                 ? opt.initial_step
                 : std::min(std::abs(t1 - t0),
                            1e-2 * (std::abs(t1 - t0) + 1.0) /
                                (1.0 + std::abs(k0) / (opt.abs_tol + opt.rel_tol * std::abs(y0) + 1e-300)));
  if (opt.max_step > 0.0) h = std::min(h, opt.max_step);
  h = std::max(h, 1e-14 * std::abs(t1 - t0));

  const double span = std::abs(t1 - t0);
  const double end_snap = 4.0 * std::numeric_limits<double>::epsilon() *
                          std::max({std::abs(t0), std::abs(t1), 1.0});
  double k[7];
  for (std::size_t step = 0; step < opt.max_steps; ++step) {
    if (dir * (t - t1) >= 0.0 || std::abs(t1 - t) <= end_snap) {
      sol.nodes.back().t = t1;
      sol.reached_end = true;
      sol.stop_time = t1;
      return sol;
    }
    const double h_step = std::min(h, std::abs(t1 - t));

    k[0] = k0;
    bool rejected_nan = false;
    for (int i = 1; i < 7; ++i) {
      double yi = y;
      for (int j = 0; j < i; ++j) yi += dir * h_step * detail::dp_a[i][j] * k[j];
      k[i] = f(t + dir * h_step * detail::dp_c[i], yi);
      if (!std::isfinite(k[i])) { rejected_nan = true; break; }
    }
    double y5 = y, err = 0.0;
    if (!rejected_nan) {
      for (int j = 0; j < 6; ++j) y5 += dir * h_step * detail::dp_a[6][j] * k[j];
      for (int j = 0; j < 7; ++j) err += detail::dp_e[j] * k[j];
      err = std::abs(dir * h_step * err);
    }
    const double scale = opt.abs_tol + opt.rel_tol * std::max(std::abs(y), std::abs(y5));
    if (!rejected_nan && (err <= scale || h_step <= 1e-14 * (std::abs(t) + 1.0))) {
      t += dir * h_step;
      y = y5;
      k0 = k[6]; // FSAL
      sol.nodes.push_back({t, y, k0});
      if (stop && stop(t, y)) {
        sol.reached_end = false;
        sol.stop_time = t;
        return sol;
      }
    }
    const double grow = rejected_nan ? 0.25
                                     : std::clamp(0.9 * std::pow(scale / (err + 1e-300), 0.2),
                                                  0.2, 5.0);
    h = h_step * grow;
    if (opt.max_step > 0.0) h = std::min(h, opt.max_step);
    if (h < 1e-15 * span && std::abs(t1 - t) > 1e-12 * span)
      throw StepFailureError("integrate_ode: step size underflow at t=" + std::to_string(t));
  }
  throw StepFailureError("integrate_ode: max step count exceeded");
}

} // namespace shockfront
