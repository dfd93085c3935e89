#pragma once

// Test-only oracles, independent of the implementation paths they check:
//  * central finite differences,
//  * quadrature of c(u)/u for H (adaptive panels + analytic power-law tail),
//  * bisection inversion of Q(r) = r e^r.

#include <cmath>
#include <functional>
#include <random>

#include "shockfront/eos.hpp"
#include "shockfront/quadrature.hpp"

namespace oracles {

inline double central_diff(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// H(rho) by quadrature of c(u)/u on [eps, rho] plus the analytic tail of the
/// power-law integrand on [0, eps]: near 0, c(u)/u ~ A u^{(g-3)/2} for every law.
inline double enthalpy_by_quadrature(const shockfront::GasModel& model, double rho,
                                     double eps = 1e-10) {
  const auto main_part = shockfront::integrate(
      [&](double u) { return model.sound_speed(u) / u; }, eps, rho, 1e-12, 1e-15);
  // tail: integral_0^eps A u^{p} du with p = (g-3)/2 read off two samples
  const double f1 = model.sound_speed(eps) / eps;
  const double f2 = model.sound_speed(0.5 * eps) / (0.5 * eps);
  const double p = std::log(f1 / f2) / std::log(2.0);
  const double tail = f1 * eps / (p + 1.0);
  return main_part.value + tail;
}

/// Q^{-1}(y) for Q(r) = r e^r, by pure bisection (no Newton shared with the library).
inline double q_inverse_bisect(double y) {
  double lo = 0.0;
  double hi = 1.0;
  while (hi * std::exp(hi) < y) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (lo + hi);
    if (m * std::exp(m) < y)
      lo = m;
    else
      hi = m;
  }
  return 0.5 * (lo + hi);
}

inline std::mt19937_64 seeded_rng(std::uint64_t seed = 0x5eedf00dULL) {
  return std::mt19937_64(seed);
}

} // namespace oracles
