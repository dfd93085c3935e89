#pragma once

// Gradient-variable machinery: the (v1, v2) change of variables, the Riccati
// coefficients of their transport equations, the Q(r) = r e^r inversion, and
// the certified C1 horizons and envelopes along characteristics.

#include <cmath>
#include <optional>
#include <vector>

#include "shockfront/characteristics.hpp"
#include "shockfront/quadrature.hpp"
#include "shockfront/riemann.hpp"
#include "shockfront/rootfind.hpp"

namespace shockfront {

// ---------------------------------------------------------------------------
// Auxiliary functions g, A, B and the shift terms Phi, Psi
// ---------------------------------------------------------------------------

struct AuxGAB {
  double g;
  double A; // 1 + g
  double B;
  // density derivatives, used to assemble the coefficient partials
  double dg_drho;
  double dB_drho;
};

namespace detail {
inline double nu_exponent(const GasModel& model) {
  if (const auto* pg = std::get_if<PerfectGas>(&model.law()))
    return (pg->gamma0 + 1.0) / (pg->gamma0 - 1.0);
  if (const auto* v = std::get_if<VanDerWaals>(&model.law()))
    return (v->gamma0 + 1.0) / (v->gamma0 - 1.0);
  return (std::get<PSystem>(model.law()).gamma + 1.0) /
         (std::get<PSystem>(model.law()).gamma - 1.0);
}

inline void guard_nu(double nu) {
  if (std::abs(nu - 2.0) < 1e-6 || std::abs(nu - 4.0) < 1e-6)
    throw SingularParameterError(
        "closed-form g/B degenerate at nu in {2,4} (gamma0 = 3 or 5/3); nu = " +
        std::to_string(nu));
}
} // namespace detail

/// Closed forms of g, A, B. All three laws are power laws in m = rho/(1-b rho),
/// so the nu-parameterised forms are exact (b = 0 covers perfect gas and the
/// p-system). Guarded at nu in {2, 4}.
inline AuxGAB aux_gAB(const GasModel& model, double rho) {
  const double nu = detail::nu_exponent(model);
  detail::guard_nu(nu);
  const double H = model.enthalpy(rho);
  const double c = model.sound_speed(rho);
  const double G = model.fundamental_derivative(rho);
  const double b = model.is_vdw() ? std::get<VanDerWaals>(model.law()).b : 0.0;
  const double one_minus = 1.0 - b * rho;

  AuxGAB out{};
  out.g = (nu - 1.0) / (2.0 - nu) * one_minus;
  out.A = 1.0 + out.g;
  out.B = H * (one_minus * nu / ((2.0 - nu) * (4.0 - nu)) + (b * rho) / (2.0 + nu));
  out.dg_drho = (1.0 - out.g * (G - 2.0)) / (2.0 * rho);
  out.dB_drho = (c * (1.0 + 2.0 * out.g) - out.B * (G - 2.0)) / (2.0 * rho);
  return out;
}

/// Shift terms of the gradient change of variables:
/// Phi = (d-1)(uA - B)/r, Psi = (d-1)(uA + B)/r.
inline std::pair<double, double> phi_psi(const GasModel& model, const SymmetryConfig& cfg,
                                         double r, const RiemannState& w) {
  if (!(r > 0.0)) throw DomainError("phi_psi: r must be > 0");
  if (cfg.d == 1) return {0.0, 0.0};
  const FluidState s = from_riemann(model, w);
  const auto aux = aux_gAB(model, s.rho);
  const double k = (cfg.d - 1) / r;
  return {k * (s.u * aux.A - aux.B), k * (s.u * aux.A + aux.B)};
}

/// The r-free parts phi = r*Phi, psi = r*Psi.
inline std::pair<double, double> phi_psi_reduced(const GasModel& model,
                                                 const SymmetryConfig& cfg,
                                                 const RiemannState& w) {
  const auto [p, q] = phi_psi(model, cfg, 1.0, w);
  return {p, q};
}

// ---------------------------------------------------------------------------
// Riccati coefficients of the transport equations for v1, v2
// ---------------------------------------------------------------------------

struct CoefficientSet {
  double a0, a1, a2; // family 1: dv1/dt = a0 v1^2 + a1 v1 + a2 along X1
  double b0, b1, b2; // family 2
  int ell = 0;
  double abar1, abar2, bbar1, bbar2; // r-free reductions: abar_i = r^i a_i
  double lambda1, lambda2;           // speeds at the state (for the ell shift)

  double abar1_ell() const { return abar1 + ell * lambda1; }
  double bbar1_ell() const { return bbar1 + ell * lambda2; }
};

/// Assembles a0..b2 from the general expressions (the normative source; the
/// appendix's expanded per-gas formulas are cross-check targets only).
inline CoefficientSet coefficients(const GasModel& model, const SymmetryConfig& cfg, double r,
                                   const RiemannState& w, int ell = 0) {
  if (!(r > 0.0)) throw DomainError("coefficients: r must be > 0");
  if (cfg.d < 2) throw DomainError("coefficients: requires d >= 2");
  if (ell < 0) throw DomainError("coefficients: ell must be >= 0");

  const FluidState s = from_riemann(model, w);
  const double rho = s.rho, u = s.u;
  const double c = model.sound_speed(rho);
  const double G = model.fundamental_derivative(rho);
  const double Hp = c / rho;            // H'
  const double cp = Hp * (G - 1.0);     // c'
  const double Hpp = Hp * (G - 2.0) / rho;
  const double eh = std::sqrt(Hp);      // e^h with h = (1/2) ln H'
  const auto aux = aux_gAB(model, rho);

  const double dm1 = cfg.d - 1;
  const double f = dm1 * u * c / r;
  const double df_du = dm1 * c / r;
  const double df_drho = dm1 * u * cp / r;
  const double d1f = 0.5 * df_du - df_drho / (2.0 * Hp);
  const double d2f = 0.5 * df_du + df_drho / (2.0 * Hp);
  const double drf = -f / r;
  const double d1h_minus_d2h = -Hpp / (2.0 * Hp * Hp);

  const double Phi = dm1 * (u * aux.A - aux.B) / r;
  const double Psi = dm1 * (u * aux.A + aux.B) / r;
  const double dPhi_du = dm1 * aux.A / r;
  const double dPhi_drho = dm1 * (u * aux.dg_drho - aux.dB_drho) / r;
  const double dPsi_du = dPhi_du;
  const double dPsi_drho = dm1 * (u * aux.dg_drho + aux.dB_drho) / r;
  const double d1Phi_minus_d2Phi = -dPhi_drho / Hp;
  const double d1Psi_minus_d2Psi = -dPsi_drho / Hp;
  const double drPhi = -Phi / r;
  const double drPsi = -Psi / r;
  (void)dPsi_du;

  const double l1 = u - c, l2 = u + c;
  CoefficientSet out{};
  out.ell = ell;
  out.lambda1 = l1;
  out.lambda2 = l2;
  out.a0 = -G / (2.0 * eh);
  out.b0 = out.a0;
  out.a1 = d1f + Phi * G + d1h_minus_d2h * f;
  out.b1 = -d2f + Psi * G + d1h_minus_d2h * f;
  out.a2 = eh * (drf - Phi * d1f - Phi * Phi * 0.5 * G + d1Phi_minus_d2Phi * f + l1 * drPhi);
  out.b2 = eh * (-drf + d2f * Psi - 0.5 * G * Psi * Psi + l2 * drPsi + d1Psi_minus_d2Psi * f);
  out.abar1 = r * out.a1;
  out.abar2 = r * r * out.a2;
  out.bbar1 = r * out.b1;
  out.bbar2 = r * r * out.b2;
  return out;
}

// ---------------------------------------------------------------------------
// Gradient variables
// ---------------------------------------------------------------------------

struct GradientVars {
  double v1, v2;   // e^h (dr w1 + Phi), e^k (dr w2 + Psi)
  double h, k;     // h = k = (1/2) ln H'
  double Phi, Psi; // shift terms
};

inline GradientVars v_transform(const GasModel& model, const SymmetryConfig& cfg, double r,
                                const RiemannState& w, double dr_w1, double dr_w2) {
  const FluidState s = from_riemann(model, w);
  const double h = 0.5 * std::log(model.enthalpy_slope(s.rho));
  const auto [Phi, Psi] = phi_psi(model, cfg, r, w);
  const double eh = std::exp(h);
  return GradientVars{eh * (dr_w1 + Phi), eh * (dr_w2 + Psi), h, h, Phi, Psi};
}

inline std::pair<double, double> v_transform_inverse(const GasModel& model,
                                                     const SymmetryConfig& cfg, double r,
                                                     const RiemannState& w, double v1,
                                                     double v2) {
  const FluidState s = from_riemann(model, w);
  const double eh = std::sqrt(model.enthalpy_slope(s.rho));
  const auto [Phi, Psi] = phi_psi(model, cfg, r, w);
  return {v1 / eh - Phi, v2 / eh - Psi};
}

// ---------------------------------------------------------------------------
// Q(r) = r e^r and its inverse
// ---------------------------------------------------------------------------

inline double q_eval(double x) { return x * std::exp(x); }

/// Unique positive solution of Q(x) = y for y > 0 (Newton with a bisection
/// safeguard on the bracket [0, max(1, ln y + ln ln(e + y))]).
inline double q_inverse(double y) {
  if (!(y > 0.0)) throw DomainError("q_inverse: y must be > 0");
  double hi = std::max(1.0, std::log(y) + std::log(std::log(std::exp(1.0) + y)));
  while (q_eval(hi) < y) hi *= 2.0; // paranoia against the analytic bracket
  return newton_bisect([y](double x) { return q_eval(x) - y; },
                       [](double x) { return std::exp(x) * (1.0 + x); }, 0.0, hi,
                       std::min(hi, std::max(0.5, std::log1p(y))), 1e-14 * y, 0.0);
}

/// x(z0, z1, z2) = Q^{-1}(z1 / sqrt(z0 z2)).
inline double x_of(double z0, double z1, double z2) {
  if (!(z0 > 0.0) || !(z1 > 0.0) || !(z2 > 0.0))
    throw DomainError("x_of: arguments must be > 0");
  return q_inverse(z1 / std::sqrt(z0 * z2));
}

// ---------------------------------------------------------------------------
// Bound constants along characteristic paths
// ---------------------------------------------------------------------------

struct BoundConstants {
  double A0 = 0, A1 = 0, A2 = 0; // suprema of |a0|, |abar1|, |abar2| along X1
  double B0 = 0, B1 = 0, B2 = 0; // same along X2
  double Ka = 0, Kb = 0;         // (int |a_2|) exp(int |a_1|) over the interval
  double theta_plus = 0;         // Theta_+ at |v| = 0, i.e. A1 / sqrt(A0 A2)
  double xi_plus = 0;            // Xi_+ at |v| = 0

  /// Theta_+/Xi_+ with a nonzero initial gradient magnitude.
  double theta_with(double v_abs, double min_x) const {
    return theta_plus / (1.0 + std::sqrt(A0 / A2) * v_abs * min_x);
  }
  double xi_with(double v_abs, double min_x) const {
    return xi_plus / (1.0 + std::sqrt(B0 / B2) * v_abs * min_x);
  }
};

namespace detail {
/// Linear state interpolation along a path at time t.
inline PathNode path_at(const CharacteristicPath& p, double t) {
  const auto& n = p.nodes;
  if (t <= n.front().t) return n.front();
  if (t >= n.back().t) return n.back();
  auto it = std::upper_bound(n.begin(), n.end(), t,
                             [](double tt, const PathNode& a) { return tt < a.t; });
  const auto& b = *it;
  const auto& a = *(it - 1);
  const double s = (t - a.t) / (b.t - a.t);
  return PathNode{t, a.r + s * (b.r - a.r), a.w1 + s * (b.w1 - a.w1),
                  a.w2 + s * (b.w2 - a.w2)};
}

struct MaxScan {
  double value = 0.0;
  double arg = 0.0;
};
template <class F>
MaxScan adaptive_max(const F& f, double lo, double hi, int base = 256, int rounds = 3) {
  MaxScan m;
  double a = lo, b = hi;
  for (int round = 0; round < rounds; ++round) {
    MaxScan local;
    for (int i = 0; i <= base; ++i) {
      const double t = a + (b - a) * i / base;
      const double v = f(t);
      if (v >= local.value) {
        local.value = v;
        local.arg = t;
      }
    }
    if (local.value > m.value) m = local;
    const double half = 2.0 * (b - a) / base;
    a = std::max(lo, m.arg - half);
    b = std::min(hi, m.arg + half);
  }
  return m;
}
} // namespace detail

/// Suprema and integral constants along a (family-1, family-2) path pair over
/// [t_lo, t_hi]; dense sampling (>= 256 points per round, 3 refinement rounds).
inline BoundConstants bound_constants(const GasModel& model, const SymmetryConfig& cfg,
                                      const CharacteristicPath& path1,
                                      const CharacteristicPath& path2, double t_lo,
                                      double t_hi) {
  if (!(t_hi > t_lo)) throw PathError("bound_constants: empty interval");
  for (const auto* p : {&path1, &path2}) {
    if (p->nodes.size() < 2 || p->t_begin() > t_lo + 1e-12 || p->t_end() < t_hi - 1e-12)
      throw PathError("bound_constants: path does not cover the interval");
  }

  auto coeff_at = [&](const CharacteristicPath& p, double t) {
    const auto n = detail::path_at(p, t);
    return coefficients(model, cfg, n.r, RiemannState{n.w1, n.w2});
  };
  BoundConstants out;
  out.A0 = detail::adaptive_max(
               [&](double t) { return std::abs(coeff_at(path1, t).a0); }, t_lo, t_hi)
               .value;
  out.A1 = detail::adaptive_max(
               [&](double t) { return std::abs(coeff_at(path1, t).abar1); }, t_lo, t_hi)
               .value;
  out.A2 = detail::adaptive_max(
               [&](double t) { return std::abs(coeff_at(path1, t).abar2); }, t_lo, t_hi)
               .value;
  out.B0 = detail::adaptive_max(
               [&](double t) { return std::abs(coeff_at(path2, t).b0); }, t_lo, t_hi)
               .value;
  out.B1 = detail::adaptive_max(
               [&](double t) { return std::abs(coeff_at(path2, t).bbar1); }, t_lo, t_hi)
               .value;
  out.B2 = detail::adaptive_max(
               [&](double t) { return std::abs(coeff_at(path2, t).bbar2); }, t_lo, t_hi)
               .value;

  const int nq = 512;
  std::vector<double> ts(nq + 1), i2a(nq + 1), i1a(nq + 1), i2b(nq + 1), i1b(nq + 1);
  for (int i = 0; i <= nq; ++i) {
    ts[i] = t_lo + (t_hi - t_lo) * i / nq;
    const auto ca = coeff_at(path1, ts[i]);
    const auto cb = coeff_at(path2, ts[i]);
    i2a[i] = std::abs(ca.a2);
    i1a[i] = std::abs(ca.a1);
    i2b[i] = std::abs(cb.b2);
    i1b[i] = std::abs(cb.b1);
  }
  out.Ka = cumulative_trapezoid(ts, i2a).back() *
           std::exp(cumulative_trapezoid(ts, i1a).back());
  out.Kb = cumulative_trapezoid(ts, i2b).back() *
           std::exp(cumulative_trapezoid(ts, i1b).back());
  out.theta_plus = (out.A0 > 0 && out.A2 > 0) ? out.A1 / std::sqrt(out.A0 * out.A2)
                                              : std::numeric_limits<double>::infinity();
  out.xi_plus = (out.B0 > 0 && out.B2 > 0) ? out.B1 / std::sqrt(out.B0 * out.B2)
                                           : std::numeric_limits<double>::infinity();
  return out;
}

// ---------------------------------------------------------------------------
// Certified C1 horizons
// ---------------------------------------------------------------------------

/// Horizon for nonnegative initial gradient variable:
/// alpha + min_X * x(A0, A1, A2) / A1 (family 1; B's for family 2).
inline double c1_horizon_pos(const BoundConstants& c, double min_x, double alpha, int which) {
  const double z0 = which == 1 ? c.A0 : c.B0;
  const double z1 = which == 1 ? c.A1 : c.B1;
  const double z2 = which == 1 ? c.A2 : c.B2;
  if (!(min_x > 0.0)) throw DomainError("c1_horizon_pos: min_X must be > 0");
  if (!(z1 > 0.0)) throw DomainError("c1_horizon_pos: constants must be positive");
  if (z0 <= 0.0 || z2 <= 0.0) return std::numeric_limits<double>::infinity();
  return alpha + min_x * x_of(z0, z1, z2) / z1;
}

/// Horizon for nonpositive initial gradient variable with magnitude |v(alpha)|:
/// alpha + (min_X / A1) Q^{-1}(Theta_+).
inline double c1_horizon_neg(const BoundConstants& c, double v_init_abs, double min_x,
                             double alpha, int which) {
  if (!(v_init_abs >= 0.0)) throw DomainError("c1_horizon_neg: |v| must be >= 0");
  if (!(min_x > 0.0)) throw DomainError("c1_horizon_neg: min_X must be > 0");
  const double z1 = which == 1 ? c.A1 : c.B1;
  if (!(z1 > 0.0)) throw DomainError("c1_horizon_neg: constants must be positive");
  const double zcap = which == 1 ? c.theta_with(v_init_abs, min_x)
                                 : c.xi_with(v_init_abs, min_x);
  if (!std::isfinite(zcap)) return std::numeric_limits<double>::infinity();
  return alpha + (min_x / z1) * q_inverse(zcap);
}

// ---------------------------------------------------------------------------
// Pointwise gradient-variable envelopes along a path
// ---------------------------------------------------------------------------

/// Evaluable lower/upper bounds for v(t, X(t)) (or X^ell v for the upper bound)
/// built from cumulative quadrature of the coefficients along the path.
class VEnvelope {
public:
  VEnvelope(const GasModel& model, const SymmetryConfig& cfg, const CharacteristicPath& path,
            int which, double v_init, int ell = 0, int samples = 1024)
      : v_init_(v_init), ell_(ell) {
    if (path.nodes.size() < 2) throw PathError("v_envelope: path too short");
    const double t0 = path.t_begin(), t1 = path.t_end();
    std::vector<double> t(samples + 1), a0(samples + 1), a1(samples + 1), a2(samples + 1),
        xs(samples + 1);
    for (int i = 0; i <= samples; ++i) {
      t[i] = t0 + (t1 - t0) * i / samples;
      const auto n = detail::path_at(path, t[i]);
      const auto c = coefficients(model, cfg, n.r, RiemannState{n.w1, n.w2}, ell);
      a0[i] = which == 1 ? c.a0 : c.b0;
      a1[i] = which == 1 ? c.a1 : c.b1;
      a2[i] = which == 1 ? c.a2 : c.b2;
      xs[i] = n.r;
    }
    init(std::move(t), a0, a1, a2, xs, which);
  }

  /// Direct construction from sampled coefficients (test oracles, frozen paths).
  VEnvelope(std::vector<double> t, const std::vector<double>& a0,
            const std::vector<double>& a1, const std::vector<double>& a2,
            const std::vector<double>& xs, int which, double v_init, int ell = 0)
      : v_init_(v_init), ell_(ell) {
    init(std::move(t), a0, a1, a2, xs, which);
  }

  double alpha() const { return alpha_; }
  double min_x() const { return min_x_; }

  /// K_a(t) (or K_b) per the lemma: (int_alpha^t |a_2|) exp(int_alpha^t |a_1|).
  double K(double t) const {
    return interp_linear(t_, cum_a2_abs_, t) * std::exp(interp_linear(t_, cum_a1_abs_, t));
  }

  /// Upper bound on X^ell v(t, X(t)) (reduces to v itself at ell = 0).
  double upper(double t) const {
    check(t);
    if (ell_ == 0)
      return (v_init_ + K(t)) * std::exp(interp_linear(t_, cum_a1_, t));
    const double w = std::exp(interp_linear(t_, cum_a1_ell_, t));
    return w * (std::pow(x_alpha_, ell_) * v_init_ + interp_linear(t_, cum_src_ell_, t));
  }

  /// Lower bound on v(t, X(t)) (ell = 0 only, per the lemma pair).
  double lower(double t) const {
    check(t);
    if (ell_ != 0) throw DomainError("v_envelope: lower bound defined for ell = 0");
    const double amp = (v_init_ >= 0.0 ? 0.0 : std::abs(v_init_)) + K(t);
    const double den = 1.0 - amp * interp_linear(t_, cum_D_, t);
    if (!(den > 0.0))
      throw HorizonExceededError("v_envelope: bound denominator vanished before t");
    return -amp / den * std::exp(interp_linear(t_, cum_a1_, t));
  }

private:
  double v_init_;
  int ell_;
  double alpha_ = 0.0, min_x_ = 0.0, x_alpha_ = 0.0;
  std::vector<double> t_, cum_a1_, cum_a1_abs_, cum_a2_abs_, cum_a1_ell_, cum_D_,
      cum_src_ell_;

  void init(std::vector<double> t, const std::vector<double>& a0,
            const std::vector<double>& a1, const std::vector<double>& a2,
            const std::vector<double>& xs, int which) {
    (void)which;
    t_ = std::move(t);
    const std::size_t n = t_.size();
    if (n < 2 || a0.size() != n || a1.size() != n || a2.size() != n || xs.size() != n)
      throw PathError("v_envelope: inconsistent sample arrays");
    alpha_ = t_.front();
    x_alpha_ = xs.front();
    min_x_ = *std::min_element(xs.begin(), xs.end());
    std::vector<double> a1_abs(n), a2_abs(n);
    for (std::size_t i = 0; i < n; ++i) {
      a1_abs[i] = std::abs(a1[i]);
      a2_abs[i] = std::abs(a2[i]);
    }
    cum_a1_ = cumulative_trapezoid(t_, a1);
    cum_a1_abs_ = cumulative_trapezoid(t_, a1_abs);
    cum_a2_abs_ = cumulative_trapezoid(t_, a2_abs);
    // D(t) = int |a0| e^{int_alpha^tau |a1|} dtau
    std::vector<double> dint(n);
    for (std::size_t i = 0; i < n; ++i) dint[i] = std::abs(a0[i]) * std::exp(cum_a1_abs_[i]);
    cum_D_ = cumulative_trapezoid(t_, dint);
    // ell-scaled weight: a1 + ell * (dX/dt)/X integrates to int a1 + ell ln(X/X(alpha))
    cum_a1_ell_.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      cum_a1_ell_[i] = cum_a1_[i] + ell_ * std::log(xs[i] / x_alpha_);
    std::vector<double> src(n);
    for (std::size_t i = 0; i < n; ++i)
      src[i] = std::pow(xs[i], ell_) * a2[i] * std::exp(-cum_a1_ell_[i]);
    cum_src_ell_ = cumulative_trapezoid(t_, src);
  }

  void check(double t) const {
    if (t < alpha_ - 1e-12 || t > t_.back() + 1e-12)
      throw HorizonExceededError("v_envelope: query outside the path interval");
  }
};

inline VEnvelope v_envelope(const GasModel& model, const SymmetryConfig& cfg,
                            const CharacteristicPath& path, int which, double v_init,
                            int ell = 0) {
  return VEnvelope(model, cfg, path, which, v_init, ell);
}

} // namespace shockfront
