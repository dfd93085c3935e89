#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "shockfront/errors.hpp"

namespace shockfront {

/// Newton iteration kept inside a bracket [lo, hi] with f(lo), f(hi) of opposite
/// sign; falls back to bisection whenever the Newton step leaves the bracket or
/// fails to contract. Tolerance is on |f| (scaled) and on the bracket width.
inline double newton_bisect(const std::function<double(double)>& f,
                            const std::function<double(double)>& df, double lo, double hi,
                            double x0, double f_tol, double x_tol = 0.0,
                            int max_iter = 200) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0) throw ConvergenceError("newton_bisect: endpoints do not bracket");
  double x = std::clamp(x0, lo, hi);
  for (int it = 0; it < max_iter; ++it) {
    const double fx = f(x);
    if (std::abs(fx) <= f_tol || hi - lo <= x_tol) return x;
    if (flo * fx <= 0.0) {
      hi = x;
      fhi = fx;
    } else {
      lo = x;
      flo = fx;
    }
    const double d = df(x);
    double xn = (d != 0.0 && std::isfinite(d)) ? x - fx / d : lo;
    if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
    x = xn;
  }
  throw ConvergenceError("newton_bisect: no convergence");
}

/// Plain bisection; requires a sign change on [lo, hi].
inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     double x_tol, int max_iter = 200) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0) throw ConvergenceError("bisect: endpoints do not bracket");
  for (int it = 0; it < max_iter && hi - lo > x_tol; ++it) {
    const double m = 0.5 * (lo + hi);
    const double fm = f(m);
    if (fm == 0.0) return m;
    if (flo * fm < 0.0) {
      hi = m;
      fhi = fm;
    } else {
      lo = m;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

} // namespace shockfront
