#pragma once

// Rankine-Hugoniot jump algebra for single 2-shocks: the Hugoniot function F,
// downstream-state construction, Lax admissibility checks, the implicit
// boundary map g, and the along-shock gradient relation.

#include <array>
#include <cmath>

#include "shockfront/riemann.hpp"
#include "shockfront/rootfind.hpp"

namespace shockfront {

/// A 2-shock jump: left/inner state (minus), right/outer state (plus), shock
/// speed U and mass flux j = rho(U - u), equal on both sides.
struct ShockJump {
  RiemannState w_minus;
  RiemannState w_plus;
  double U = 0.0;
  double j = 0.0;
  bool degenerate = false; // rho^- == rho^+ within tolerance (zero jump)
};

/// Hugoniot function F(rho, rho^+) = (p - p^+)(1/rho^+ - 1/rho), rho >= rho^+.
inline double hugoniot_F(const GasModel& model, double rho, double rho_plus) {
  if (!(rho_plus > 0.0)) throw DomainError("hugoniot_F: rho_plus must be > 0");
  if (rho < rho_plus) throw DomainError("hugoniot_F: requires rho >= rho_plus");
  return (model.pressure(rho) - model.pressure(rho_plus)) * (1.0 / rho_plus - 1.0 / rho);
}

/// Builds the full jump from (rho^-, rho^+, u^+): u^- = u^+ + sqrt(F) and
/// U = (rho^+ u^+ - rho^- u^-)/(rho^+ - rho^-). Lax conditions are theorems
/// under rho^- > rho^+; the degenerate rho^- == rho^+ case returns the
/// continuous state flagged.
inline ShockJump downstream_state(const GasModel& model, double rho_minus, double rho_plus,
                                  double u_plus) {
  if (!(rho_plus > 0.0) || !(rho_minus > 0.0))
    throw DomainError("downstream_state: densities must be > 0");
  if (rho_minus < rho_plus)
    throw DomainError("downstream_state: requires rho^- >= rho^+");
  ShockJump out;
  out.w_plus = to_riemann(model, {rho_plus, u_plus});
  if (rho_minus - rho_plus < 1e-10 * rho_plus) {
    out.w_minus = to_riemann(model, {rho_minus, u_plus});
    out.degenerate = true;
    // zero-jump limit: U tends to the (rho u) difference quotient
    const double c = model.sound_speed(rho_plus);
    out.U = u_plus + c;
    out.j = rho_plus * (out.U - u_plus);
    return out;
  }
  const double F = hugoniot_F(model, rho_minus, rho_plus);
  const double u_minus = u_plus + std::sqrt(F);
  out.w_minus = to_riemann(model, {rho_minus, u_minus});
  out.U = (rho_plus * u_plus - rho_minus * u_minus) / (rho_plus - rho_minus);
  out.j = rho_plus * (out.U - u_plus);
  return out;
}

struct LaxReport {
  bool ordering_rho = false, ordering_p = false, ordering_u = false;
  bool lax_left = false;  // lambda1^- < U < lambda2^-
  bool lax_right = false; // U >= lambda2^+
  double margin_rho = 0.0, margin_p = 0.0, margin_u = 0.0;
  double margin_lax1 = 0.0; // min(U - lambda1^-, lambda2^- - U)
  double margin_lax2 = 0.0; // U - lambda2^+
  double rh_res1 = 0.0;     // -U[rho] + [rho u]
  double rh_res2 = 0.0;     // -U[rho u] + [rho u^2 + p]
  bool all_passed() const {
    return ordering_rho && ordering_p && ordering_u && lax_left && lax_right;
  }
};

inline LaxReport lax_check(const GasModel& model, const ShockJump& jump) {
  LaxReport rep;
  const FluidState sm = from_riemann(model, jump.w_minus);
  const FluidState sp = from_riemann(model, jump.w_plus);
  const double pm = model.pressure(sm.rho), pp = model.pressure(sp.rho);
  rep.margin_rho = sm.rho - sp.rho;
  rep.margin_p = pm - pp;
  rep.margin_u = sm.u - sp.u;
  rep.ordering_rho = rep.margin_rho > 0.0;
  rep.ordering_p = rep.margin_p > 0.0;
  rep.ordering_u = rep.margin_u > 0.0;
  const auto [l1m, l2m] = lambda(model, jump.w_minus);
  const auto [l1p, l2p] = lambda(model, jump.w_plus);
  (void)l1p;
  rep.margin_lax1 = std::min(jump.U - l1m, l2m - jump.U);
  rep.margin_lax2 = jump.U - l2p;
  rep.lax_left = rep.margin_lax1 > 0.0;
  rep.lax_right = rep.margin_lax2 >= 0.0;
  // jump brackets [q] = q^+ - q^-
  rep.rh_res1 = -jump.U * (sp.rho - sm.rho) + (sp.rho * sp.u - sm.rho * sm.u);
  rep.rh_res2 = -jump.U * (sp.rho * sp.u - sm.rho * sm.u) +
                (sp.rho * sp.u * sp.u + pp - (sm.rho * sm.u * sm.u + pm));
  return rep;
}

namespace detail {
struct JumpView {
  double rho_m, u_m, c_m, p_m;
  double rho_p, u_p, c_p, p_p;
  double F, sqrtF;
};
inline JumpView jump_view(const GasModel& model, const RiemannState& wm,
                          const RiemannState& wp) {
  JumpView v{};
  const FluidState sm = from_riemann(model, wm);
  const FluidState sp = from_riemann(model, wp);
  v.rho_m = sm.rho;
  v.u_m = sm.u;
  v.rho_p = sp.rho;
  v.u_p = sp.u;
  v.c_m = model.sound_speed(sm.rho);
  v.c_p = model.sound_speed(sp.rho);
  v.p_m = model.pressure(sm.rho);
  v.p_p = model.pressure(sp.rho);
  if (sm.rho <= sp.rho) throw DomainError("jump partials: require rho^- > rho^+");
  v.F = (v.p_m - v.p_p) * (1.0 / v.rho_p - 1.0 / v.rho_m);
  v.sqrtF = std::sqrt(v.F);
  return v;
}
} // namespace detail

/// calF(w^-, w^+) = u^- - u^+ - sqrt(F(rho^-, rho^+)); zero along the shock.
inline double compatibility_F(const GasModel& model, const RiemannState& w_minus,
                              const RiemannState& w_plus) {
  const FluidState sm = from_riemann(model, w_minus);
  const FluidState sp = from_riemann(model, w_plus);
  if (sm.rho < sp.rho)
    throw OutOfValidityError("compatibility_F: rho^- < rho^+ (outside the 2-shock branch)");
  return sm.u - sp.u - std::sqrt(hugoniot_F(model, sm.rho, sp.rho));
}

struct FPartials {
  double d_w1m, d_w2m, d_w1p, d_w2p; // signs (+, -, -, +)
};

/// Analytic partial derivatives of calF; blow up like 1/sqrt(F) at rho^- = rho^+.
inline FPartials dF_partials(const GasModel& model, const RiemannState& w_minus,
                             const RiemannState& w_plus) {
  const auto v = detail::jump_view(model, w_minus, w_plus);
  if (!(v.F > 0.0)) throw DomainError("dF_partials: degenerate jump (F = 0)");
  const double dv = 1.0 / v.rho_p - 1.0 / v.rho_m; // specific-volume jump
  const double dp = v.p_m - v.p_p;
  const double sm1 = std::sqrt(v.rho_m * v.c_m * dv);
  const double sm2 = std::sqrt(dp / (v.rho_m * v.c_m));
  const double sp1 = std::sqrt(v.rho_p * v.c_p * dv);
  const double sp2 = std::sqrt(dp / (v.rho_p * v.c_p));
  const double k = 1.0 / (4.0 * v.sqrtF);
  FPartials out;
  out.d_w1m = k * (sm1 + sm2) * (sm1 + sm2);
  out.d_w2m = -k * (sm1 - sm2) * (sm1 - sm2);
  out.d_w1p = -k * (sp1 + sp2) * (sp1 + sp2);
  out.d_w2p = k * (sp1 - sp2) * (sp1 - sp2);
  return out;
}

struct GSolution {
  double w1_minus = 0.0;
  bool degenerate = false; // returned the zero-jump boundary value
};

/// Solves the compatibility condition calF = 0 for w1^- given (w2^-, w^+).
/// Valid for w2^- > w2^+ (equivalent to rho^- > rho^+ on the shock); the
/// degenerate w2^- == w2^+ returns w1^+ flagged.
inline GSolution solve_g(const GasModel& model, double w2_minus, const RiemannState& w_plus) {
  const double gap = w2_minus - w_plus.w2;
  if (gap < -1e-10 * std::max(1.0, std::abs(w_plus.w2)))
    throw OutOfValidityError("solve_g: w2^- <= w2^+ (validity region empty)");
  if (gap <= 1e-10 * std::max(1.0, std::abs(w_plus.w2)))
    return GSolution{w_plus.w1, true};

  // calF is strictly increasing in w1^-; the upper endpoint of the validity
  // interval is h = w2^- - w2^+ + w1^+ where rho^- = rho^+ and calF = w2^- - w2^+ > 0
  const double scale = std::max({1.0, std::abs(w_plus.u()), w_plus.enthalpy()});
  const double f_tol = 1e-12 * scale;
  const double hi = w_plus.w1 + gap;
  double step = std::max(1.0, gap);
  double lo = hi - step;
  auto F_of = [&](double w1m) {
    return compatibility_F(model, RiemannState{w1m, w2_minus}, w_plus);
  };
  while (F_of(lo) > 0.0) {
    step *= 2.0;
    lo = hi - step;
    if (step > 1e12 * scale)
      throw ConvergenceError("solve_g: failed to bracket the root");
  }
  auto dF_of = [&](double w1m) {
    return dF_partials(model, RiemannState{w1m, w2_minus}, w_plus).d_w1m;
  };
  const double root =
      newton_bisect(F_of, dF_of, lo, hi - 1e-14 * std::max(1.0, std::abs(hi)),
                    0.5 * (lo + hi), f_tol);
  return GSolution{root, false};
}

/// Partials of the implicit map g(w2^-, w1^+, w2^+) by implicit differentiation.
struct GPartials {
  double d_w2m, d_w1p, d_w2p;
};

inline GPartials g_partials(const GasModel& model, const RiemannState& w_minus,
                            const RiemannState& w_plus) {
  const auto p = dF_partials(model, w_minus, w_plus);
  return GPartials{-p.d_w2m / p.d_w1m, -p.d_w1p / p.d_w1m, -p.d_w2p / p.d_w1m};
}

/// Along-shock gradient relation: dr w1^- on K from the interior/outer
/// gradients via the chain rule through g. Requires a genuine Lax margin.
inline double shock_boundary_gradient(const GasModel& model, const SymmetryConfig& cfg,
                                      const ShockJump& jump, double r, double dr_w1_plus,
                                      double dr_w2_plus, double dr_w2_minus) {
  const auto [l1m, l2m] = lambda(model, jump.w_minus);
  const auto [l1p, l2p] = lambda(model, jump.w_plus);
  if (jump.U - l1m < 1e-10)
    throw DegenerateShockError("shock_boundary_gradient: U - lambda1^- margin too small");
  const auto gp = g_partials(model, jump.w_minus, jump.w_plus);
  const double f_m = source_f(model, cfg, r, jump.w_minus);
  const double f_p = source_f(model, cfg, r, jump.w_plus);
  const double num = (jump.U - l2m) * gp.d_w2m * dr_w2_minus - (gp.d_w2m + 1.0) * f_m +
                     (jump.U - l1p) * gp.d_w1p * dr_w1_plus +
                     (jump.U - l2p) * gp.d_w2p * dr_w2_plus +
                     (gp.d_w1p - gp.d_w2p) * f_p;
  return num / (jump.U - l1m);
}

} // namespace shockfront
