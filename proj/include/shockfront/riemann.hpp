#pragma once

#include <cmath>
#include <utility>

#include "shockfront/eos.hpp"
#include "shockfront/field.hpp"

namespace shockfront {

/// Primitive (rho, u) view of a gas state.
struct FluidState {
  double rho; // > 0
  double u;   // signed velocity
};

/// Riemann-invariant view: w1 = u - H(rho), w2 = u + H(rho). Always w2 > w1 for rho > 0.
struct RiemannState {
  double w1;
  double w2;

  double u() const { return 0.5 * (w1 + w2); }
  double enthalpy() const { return 0.5 * (w2 - w1); } // H(rho)
};

/// Geometric symmetry: d=1 planar (source-free), d=2 cylindrical, d=3 spherical.
struct SymmetryConfig {
  int d = 3;

  explicit SymmetryConfig(int dim) : d(dim) {
    if (d < 1 || d > 3) throw DomainError("symmetry: d must be 1, 2 or 3");
  }
};

constexpr double kVacuumThreshold = 1e-12; // smallest accepted w2 - w1

inline RiemannState to_riemann(const GasModel& model, const FluidState& s) {
  const double H = model.enthalpy(s.rho);
  return RiemannState{s.u - H, s.u + H};
}

inline FluidState from_riemann(const GasModel& model, const RiemannState& w) {
  if (!(w.w2 - w.w1 > kVacuumThreshold))
    throw DomainError("from_riemann: w2 - w1 below vacuum threshold");
  return FluidState{model.enthalpy_inverse(w.enthalpy()), w.u()};
}

/// Characteristic speeds (lambda1, lambda2) = (u - c, u + c).
inline std::pair<double, double> lambda(const GasModel& model, const RiemannState& w) {
  const FluidState s = from_riemann(model, w);
  const double c = model.sound_speed(s.rho);
  return {s.u - c, s.u + c};
}

/// Geometric source f(r, w) = (d-1) u c / r of the reduced system.
inline double source_f(const GasModel& model, const SymmetryConfig& cfg, double r,
                       const RiemannState& w) {
  if (!(r > 0.0)) throw DomainError("source_f: r must be > 0");
  if (cfg.d == 1) return 0.0;
  const FluidState s = from_riemann(model, w);
  return (cfg.d - 1) * s.u * model.sound_speed(s.rho) / r;
}

// ---------------------------------------------------------------------------
// Residual of the reduced system on a rectangular field, by centered
// differences:   res1 = dt w1 + lambda1 dr w1 - f,  res2 = dt w2 + lambda2 dr w2 + f.
// Interior nodes only; used by the verification harness and the convergence tests.
// ---------------------------------------------------------------------------
struct ResidualField {
  std::vector<double> t, r;      // interior node coordinates (flattened, row-major)
  std::vector<double> res1, res2;
  double max_abs = 0.0;
};

inline ResidualField reduced_residual(const GasModel& model, const SymmetryConfig& cfg,
                                      const SmoothField& field) {
  if (!field.is_rectangular()) throw GridError("reduced_residual: rectangular field required");
  const std::size_t nt = field.rows(), nr = field.cols();
  if (nt < 3 || nr < 3) throw GridError("reduced_residual: need >= 3 points per direction");

  const auto& ts = field.times();
  const auto& rs = field.r_axis();
  ResidualField out;
  out.t.reserve((nt - 2) * (nr - 2));
  for (std::size_t i = 1; i + 1 < nt; ++i) {
    const double dtm = ts[i] - ts[i - 1], dtp = ts[i + 1] - ts[i];
    for (std::size_t j = 1; j + 1 < nr; ++j) {
      const double drm = rs[j] - rs[j - 1], drp = rs[j + 1] - rs[j];
      // centered differences valid on non-uniform spacing
      auto d_t = [&](auto&& w) {
        return (w(i + 1, j) * dtm * dtm - w(i - 1, j) * dtp * dtp +
                w(i, j) * (dtp * dtp - dtm * dtm)) /
               (dtm * dtp * (dtm + dtp));
      };
      auto d_r = [&](auto&& w) {
        return (w(i, j + 1) * drm * drm - w(i, j - 1) * drp * drp +
                w(i, j) * (drp * drp - drm * drm)) /
               (drm * drp * (drm + drp));
      };
      auto w1f = [&](std::size_t a, std::size_t b) { return field.w1(a, b); };
      auto w2f = [&](std::size_t a, std::size_t b) { return field.w2(a, b); };
      const RiemannState w{field.w1(i, j), field.w2(i, j)};
      const auto [l1, l2] = lambda(model, w);
      const double f = source_f(model, cfg, rs[j], w);
      const double r1 = d_t(w1f) + l1 * d_r(w1f) - f;
      const double r2 = d_t(w2f) + l2 * d_r(w2f) + f;
      out.t.push_back(ts[i]);
      out.r.push_back(rs[j]);
      out.res1.push_back(r1);
      out.res2.push_back(r2);
      out.max_abs = std::max({out.max_abs, std::abs(r1), std::abs(r2)});
    }
  }
  return out;
}

} // namespace shockfront
