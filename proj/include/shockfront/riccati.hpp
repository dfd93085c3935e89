#pragma once

// Scalar Riccati toolbox: y' = a0(t) y^2 + a1(t) y + a2(t) on [0, T].
// Existence conditions and guaranteed bounds follow the Hormander-type ODE
// lemma; `integrate` is the high-accuracy oracle used across the test suite.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "shockfront/errors.hpp"
#include "shockfront/ode.hpp"
#include "shockfront/quadrature.hpp"

namespace shockfront::riccati {

using Coefficient = std::function<double(double)>;

struct RiccatiProblem {
  Coefficient a0, a1, a2;
  double y0 = 0.0;
  double T = 1.0;

  void validate() const {
    if (!(T > 0.0)) throw DomainError("riccati: T must be > 0");
    if (!a0 || !a1 || !a2) throw DomainError("riccati: coefficients must be set");
  }
};

struct QuadBudget {
  double value;
  double error;
};

namespace detail {
inline QuadBudget integral_abs(const Coefficient& c, double T) {
  auto q = integrate([&](double t) { return std::abs(c(t)); }, 0.0, T, 1e-11, 1e-14);
  return {q.value, q.error};
}
inline QuadBudget integral_pos(const Coefficient& c, double T) {
  auto q = integrate([&](double t) { return std::max(c(t), 0.0); }, 0.0, T, 1e-11, 1e-14);
  return {q.value, q.error};
}
} // namespace detail

/// K = (integral of |a2|) * exp(integral of |a1|) over [0, T].
inline double k_constant(const RiccatiProblem& p) {
  p.validate();
  const auto i2 = detail::integral_abs(p.a2, p.T);
  const auto i1 = detail::integral_abs(p.a1, p.T);
  return i2.value * std::exp(i1.value);
}

struct ExistenceConditions {
  bool cond1 = false;     // 1/(y0+K) > int a0^+ * exp(int |a1|)
  bool cond2 = false;     // 1/K > int |a0| * exp(int |a1|)
  double margin1 = 0.0;   // LHS - RHS, signed
  double margin2 = 0.0;
  double K = 0.0;
};

inline ExistenceConditions existence_conditions(const RiccatiProblem& p) {
  p.validate();
  if (p.y0 < 0.0) throw HypothesisError("existence_conditions: requires y0 >= 0");
  ExistenceConditions out;
  const auto i1 = detail::integral_abs(p.a1, p.T);
  const auto i2 = detail::integral_abs(p.a2, p.T);
  const auto i0p = detail::integral_pos(p.a0, p.T);
  const auto i0a = detail::integral_abs(p.a0, p.T);
  const double e1 = std::exp(i1.value);
  out.K = i2.value * e1;

  const double rhs1 = i0p.value * e1;
  out.margin1 = 1.0 / (p.y0 + out.K) - rhs1; // y0 + K > 0 unless both vanish
  if (p.y0 + out.K == 0.0) out.margin1 = std::numeric_limits<double>::infinity();
  out.cond1 = out.margin1 > 0.0;

  if (out.K == 0.0) {
    out.margin2 = std::numeric_limits<double>::infinity(); // 1/K = +inf: vacuous
    out.cond2 = true;
  } else {
    out.margin2 = 1.0 / out.K - i0a.value * e1;
    out.cond2 = out.margin2 > 0.0;
  }
  return out;
}

struct Trajectory {
  OdeSolution path;
  bool completed = false;  // reached t = T without blow-up
  bool blew_up = false;
  double blowup_lo = 0.0;  // bracket of the blow-up time when blew_up
  double blowup_hi = 0.0;
  double ode_tol = 0.0;
};

/// High-order adaptive integration with blow-up detection: |y| exceeding
/// 1e12 * max(1, |y0|) aborts and brackets the event time.
inline Trajectory integrate(const RiccatiProblem& p, double tol = 1e-11) {
  p.validate();
  const double ceiling = 1e12 * std::max(1.0, std::abs(p.y0));
  OdeOptions opt;
  opt.abs_tol = opt.rel_tol = tol;
  Trajectory out;
  out.ode_tol = tol;
  auto rhs = [&](double t, double y) {
    return p.a0(t) * y * y + p.a1(t) * y + p.a2(t);
  };
  try {
    out.path = integrate_ode(rhs, 0.0, p.y0, p.T, opt,
                             [&](double, double y) { return std::abs(y) > ceiling; });
  } catch (const StepFailureError&) {
    // step underflow right at a pole counts as blow-up
    out.blew_up = true;
  }
  if (!out.path.nodes.empty() && out.path.reached_end) {
    out.completed = true;
    return out;
  }
  out.blew_up = true;
  const auto& nodes = out.path.nodes;
  out.blowup_hi = nodes.empty() ? 0.0 : nodes.back().t;
  out.blowup_lo = nodes.size() > 1 ? nodes[nodes.size() - 2].t : 0.0;
  // the true pole sits at or after the last finite sample
  out.blowup_hi = std::min(p.T, out.blowup_hi + (out.blowup_hi - out.blowup_lo) + 1e-12);
  return out;
}

struct BoundReport {
  bool all_hold = true;
  double worst_slack = std::numeric_limits<double>::infinity(); // min over checks of LHS-RHS+slack
  std::size_t checks = 0;
  std::size_t failures = 0;
  double slack = 0.0;
};

/// Verifies the positive/negative reciprocal bounds at every accepted node of
/// the trajectory. Slack is 10 * (quadrature error + ODE tolerance), so a
/// failure is genuinely outside numerics.
inline BoundReport bound_check(const RiccatiProblem& p, const Trajectory& traj) {
  p.validate();
  const auto i1 = detail::integral_abs(p.a1, p.T);
  const auto i2 = detail::integral_abs(p.a2, p.T);
  const double K = i2.value * std::exp(i1.value);

  // cumulative integrals at the trajectory's node times, one GK panel per
  // node interval (adaptive nodes can be far apart; trapezoid is too lossy)
  std::vector<double> ts;
  ts.reserve(traj.path.nodes.size());
  for (const auto& n : traj.path.nodes) ts.push_back(n.t);
  auto cumulative = [&](const std::function<double(double)>& f) {
    std::vector<double> out(ts.size(), 0.0);
    for (std::size_t i = 1; i < ts.size(); ++i)
      out[i] = out[i - 1] + shockfront::detail::gk15(f, ts[i - 1], ts[i]).value;
    return out;
  };
  const auto cum_a1 = cumulative([&](double t) { return std::abs(p.a1(t)); });
  const auto cum_a1s = cumulative([&](double t) { return p.a1(t); }); // signed
  const auto cum_a0p = cumulative([&](double t) { return std::max(p.a0(t), 0.0); });
  const auto cum_a0a = cumulative([&](double t) { return std::abs(p.a0(t)); });

  BoundReport rep;
  rep.slack = 10.0 * (i1.error + i2.error + traj.ode_tol);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    // the bounds govern the gauge variable Y = y e^{-int a1} (the weight the
    // C1 lemmas carry on their left-hand sides); sign(Y) = sign(y)
    const double Y = traj.path.nodes[i].y * std::exp(-cum_a1s[i]);
    const double w = std::exp(cum_a1[i]);
    double lhs, rhs;
    if (Y >= 0.0) {
      if (Y == 0.0) continue; // 1/Y = +inf, vacuous
      lhs = 1.0 / Y;
      rhs = 1.0 / (p.y0 + K) - cum_a0p[i] * w;
    } else {
      lhs = 1.0 / std::abs(Y);
      rhs = (K == 0.0 ? -std::numeric_limits<double>::infinity()
                      : 1.0 / K - cum_a0a[i] * w);
    }
    const double slackful = lhs - rhs + rep.slack;
    rep.worst_slack = std::min(rep.worst_slack, slackful);
    ++rep.checks;
    if (!(slackful > 0.0)) {
      rep.all_hold = false;
      ++rep.failures;
    }
  }
  return rep;
}

/// Maximum-principle check: w' = a w^2 + b from w0, z given with z(0) >= w(0)
/// and z' >= a z^2 + b  =>  z >= w on [0, T]. The differential inequality is
/// sampled with a central-difference z'.
inline bool comparison_check(const Coefficient& a, const Coefficient& b, double w0,
                             const std::function<double(double)>& z, double T,
                             double tol = 1e-7, int samples = 512) {
  if (!(T > 0.0)) throw DomainError("comparison_check: T must be > 0");
  if (z(0.0) < w0 - tol) throw HypothesisError("comparison_check: z(0) < w(0)");
  const double h = 1e-6 * std::max(1.0, T);
  for (int i = 0; i <= samples; ++i) {
    const double t = T * i / samples;
    const double tl = std::max(0.0, t - h), tr = std::min(T, t + h);
    const double dz = (z(tr) - z(tl)) / (tr - tl);
    const double zt = z(t);
    if (dz < a(t) * zt * zt + b(t) - tol)
      throw HypothesisError("comparison_check: z' >= a z^2 + b fails at t=" +
                            std::to_string(t));
  }
  OdeOptions opt;
  opt.abs_tol = opt.rel_tol = 1e-11;
  const auto w = integrate_ode(
      [&](double t, double y) { return a(t) * y * y + b(t); }, 0.0, w0, T, opt);
  for (int i = 0; i <= samples; ++i) {
    const double t = T * i / samples;
    if (z(t) < w(t) - tol) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Seeded random problem generator (clamped trigonometric polynomials). Used by
// the lemma battery: amplitudes are rescaled by rejection until the existence
// conditions hold with the requested margin.
// ---------------------------------------------------------------------------

struct TrigCoefficient {
  double c0 = 0.0;
  std::array<double, 3> amp{};
  std::array<double, 3> freq{};
  std::array<double, 3> phase{};
  double clamp_abs = 1e3;

  double operator()(double t) const {
    double v = c0;
    for (int k = 0; k < 3; ++k) v += amp[k] * std::sin(freq[k] * t + phase[k]);
    return std::clamp(v, -clamp_abs, clamp_abs);
  }
};

struct RandomProblemSpec {
  RiccatiProblem problem;
  TrigCoefficient a0, a1, a2;
};

inline TrigCoefficient random_trig(std::mt19937_64& rng, double base_amp) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> uf(0.3, 4.0);
  TrigCoefficient c;
  c.c0 = base_amp * u(rng);
  for (int k = 0; k < 3; ++k) {
    c.amp[k] = 0.5 * base_amp * u(rng);
    c.freq[k] = uf(rng);
    c.phase[k] = 3.14159265358979323846 * u(rng);
  }
  return c;
}

/// Draws a problem satisfying both existence conditions with margin >= `margin`
/// by geometrically shrinking the coefficient amplitudes (rejection).
inline RandomProblemSpec make_conditioned_problem(std::uint64_t seed, double T = 1.0,
                                                  double margin = 0.1) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uy(0.0, 1.0);
  RandomProblemSpec spec;
  double scale = 1.0;
  const double y0 = uy(rng);
  spec.a0 = random_trig(rng, 1.0);
  spec.a1 = random_trig(rng, 1.0);
  spec.a2 = random_trig(rng, 1.0);
  for (int attempt = 0; attempt < 64; ++attempt) {
    TrigCoefficient a0 = spec.a0, a1 = spec.a1, a2 = spec.a2;
    a0.c0 *= scale;
    a2.c0 *= scale;
    for (int k = 0; k < 3; ++k) {
      a0.amp[k] *= scale;
      a2.amp[k] *= scale;
    }
    RiccatiProblem p;
    p.a0 = a0;
    p.a1 = a1;
    p.a2 = a2;
    p.y0 = y0;
    p.T = T;
    const auto cond = existence_conditions(p);
    if (cond.cond1 && cond.cond2 && cond.margin1 >= margin && cond.margin2 >= margin) {
      spec.problem = p;
      spec.a0 = a0;
      spec.a1 = a1;
      spec.a2 = a2;
      return spec;
    }
    scale *= 0.6;
  }
  throw ConvergenceError("make_conditioned_problem: rejection did not terminate");
}

/// Draws a problem violating condition (1) hard enough to blow up before T:
/// y' = a0 y^2 with constant a0 > 0 sized so the pole sits inside (0, T).
inline RiccatiProblem make_blowup_problem(std::uint64_t seed, double T = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uy(0.5, 2.0);
  std::uniform_real_distribution<double> uf(0.2, 0.8);
  const double y0 = uy(rng);
  const double frac = uf(rng); // pole at frac * T
  const double a0 = 1.0 / (y0 * frac * T);
  RiccatiProblem p;
  p.a0 = [a0](double) { return a0; };
  p.a1 = [](double) { return 0.0; };
  p.a2 = [](double) { return 0.0; };
  p.y0 = y0;
  p.T = T;
  return p;
}

} // namespace shockfront::riccati
