#pragma once

// Adaptive Gauss-Kronrod (G7,K15) quadrature and trapezoid helpers.

#include <cmath>
#include <functional>
#include <vector>

#include "shockfront/errors.hpp"

namespace shockfront {

namespace detail {
// 15-point Kronrod nodes/weights on [-1,1] and the embedded 7-point Gauss weights.
constexpr double gk_x[15] = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769, -0.741531185599394,
    -0.586087235467691, -0.405845151377397, -0.207784955007898, 0.0,
    0.207784955007898,  0.405845151377397,  0.586087235467691,  0.741531185599394,
    0.864864423359769,  0.949107912342759,  0.991455371120813};
constexpr double gk_wk[15] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728,
    0.204432940075298, 0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529};
constexpr double gk_wg[7] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                             0.417959183673469, 0.381830050505119, 0.279705391489277,
                             0.129484966168870};

struct GkResult {
  double value;
  double error;
};

inline GkResult gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double k = 0.0, g = 0.0;
  for (int i = 0; i < 15; ++i) {
    const double v = f(c + h * gk_x[i]);
    k += gk_wk[i] * v;
    if (i % 2 == 1) g += gk_wg[i / 2] * v;
  }
  k *= h;
  g *= h;
  const double diff = std::abs(k - g);
  return {k, std::pow(200.0 * diff, 1.5) > diff ? diff : std::pow(200.0 * diff, 1.5)};
}
} // namespace detail

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
};

/// Adaptive bisection on GK15 panels until the summed error estimate meets
/// abs_tol + rel_tol * |I|.
inline QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                            double rel_tol = 1e-10, double abs_tol = 1e-14,
                            int max_depth = 48) {
  if (a == b) return {0.0, 0.0};
  struct Panel {
    double a, b, value, error;
    int depth;
  };
  const auto first = detail::gk15(f, a, b);
  std::vector<Panel> stack{{a, b, first.value, first.error, 0}};
  double total = first.value, toterr = first.error;
  while (!stack.empty()) {
    if (toterr <= abs_tol + rel_tol * std::abs(total)) break;
    // split the worst panel; panels at max depth keep their error in the budget
    std::size_t worst = 0;
    for (std::size_t i = 1; i < stack.size(); ++i)
      if (stack[i].error > stack[worst].error) worst = i;
    Panel p = stack[worst];
    stack.erase(stack.begin() + static_cast<std::ptrdiff_t>(worst));
    if (p.depth >= max_depth) continue;
    const double m = 0.5 * (p.a + p.b);
    const auto l = detail::gk15(f, p.a, m);
    const auto r = detail::gk15(f, m, p.b);
    total += l.value + r.value - p.value;
    toterr += l.error + r.error - p.error;
    stack.push_back({p.a, m, l.value, l.error, p.depth + 1});
    stack.push_back({m, p.b, r.value, r.error, p.depth + 1});
  }
  if (!std::isfinite(total)) throw QuadratureError("integrate: non-finite integral");
  return {total, toterr};
}

/// Cumulative trapezoid of samples (x_i, y_i); result[i] = integral up to x_i.
inline std::vector<double> cumulative_trapezoid(const std::vector<double>& x,
                                                const std::vector<double>& y) {
  if (x.size() != y.size()) throw DomainError("cumulative_trapezoid: size mismatch");
  std::vector<double> out(x.size(), 0.0);
  for (std::size_t i = 1; i < x.size(); ++i)
    out[i] = out[i - 1] + 0.5 * (y[i] + y[i - 1]) * (x[i] - x[i - 1]);
  return out;
}

/// Linear interpolation in a sorted abscissa table; clamps at the ends.
inline double interp_linear(const std::vector<double>& x, const std::vector<double>& y,
                            double xq) {
  if (x.empty()) throw DomainError("interp_linear: empty table");
  if (xq <= x.front()) return y.front();
  if (xq >= x.back()) return y.back();
  const auto it = std::upper_bound(x.begin(), x.end(), xq);
  const std::size_t j = static_cast<std::size_t>(it - x.begin());
  const double s = (xq - x[j - 1]) / (x[j] - x[j - 1]);
  return (1.0 - s) * y[j - 1] + s * y[j];
}

} // namespace shockfront
