#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "shockfront/field.hpp"
#include "shockfront/ode.hpp"
#include "shockfront/riemann.hpp"

namespace shockfront {

enum class CharFamily { fluid = 0, one = 1, two = 2 };

inline const char* to_string(CharFamily f) {
  switch (f) {
    case CharFamily::one: return "1";
    case CharFamily::two: return "2";
    default: return "fluid";
  }
}

/// Read access to a w-field for tracing: sampled fields, analytic closures and
/// the angular solver's level meshes all fit behind this pair of callables.
struct FieldView {
  std::function<std::pair<double, double>(double, double)> w; // (t, r) -> (w1, w2)
  std::function<bool(double, double)> contains;               // may be empty: everywhere

  bool inside(double t, double r) const { return !contains || contains(t, r); }
};

inline FieldView make_view(const SmoothField& f, double slack = 0.0) {
  return FieldView{[&f](double t, double r) { return f.interpolate(t, r); },
                   [&f, slack](double t, double r) { return f.contains(t, r, slack); }};
}

struct PathNode {
  double t;
  double r;
  double w1;
  double w2;
};

/// Time-parameterised characteristic curve. Nodes are stored with t increasing
/// regardless of trace direction; `curve` keeps the integrator's dense output.
struct CharacteristicPath {
  CharFamily family = CharFamily::two;
  std::vector<PathNode> nodes;
  bool exited_domain = false; // stopped at the field boundary before t_end
  OdeSolution curve;          // r(t), cubic Hermite between accepted steps

  double t_begin() const { return nodes.front().t; }
  double t_end() const { return nodes.back().t; }
  double r_at(double t) const { return curve(t); }
};

/// Traces dX/dt = lambda_family(w(t, X)) from (t0, r0) towards t_end (either
/// direction). Stops early with exited_domain=true when the view ends.
inline CharacteristicPath trace_characteristic(const GasModel& model, const FieldView& field,
                                               CharFamily family, double t0, double r0,
                                               double t_end, double tol = 1e-9) {
  if (!field.inside(t0, r0))
    throw DomainError("trace_characteristic: start point outside the field");

  auto speed = [&](double t, double r) -> double {
    const auto [w1, w2] = field.w(t, r);
    const RiemannState w{w1, w2};
    if (family == CharFamily::fluid) return w.u();
    const auto [l1, l2] = lambda(model, w);
    return family == CharFamily::one ? l1 : l2;
  };

  OdeOptions opt;
  opt.abs_tol = opt.rel_tol = tol;
  CharacteristicPath path;
  path.family = family;
  path.curve = integrate_ode(
      speed, t0, r0, t_end, opt,
      [&](double t, double r) { return !field.inside(t, r) || !(r > 0.0); });
  path.exited_domain = !path.curve.reached_end;

  path.nodes.reserve(path.curve.nodes.size());
  for (const auto& n : path.curve.nodes) {
    const auto [w1, w2] = field.w(n.t, n.y);
    path.nodes.push_back({n.t, n.y, w1, w2});
  }
  if (path.nodes.size() > 1 && path.nodes.front().t > path.nodes.back().t)
    std::reverse(path.nodes.begin(), path.nodes.end());
  return path;
}

inline CharacteristicPath trace_characteristic(const GasModel& model, const SmoothField& f,
                                               CharFamily family, double t0, double r0,
                                               double t_end, double tol = 1e-9) {
  const auto view = make_view(f, 1e-12);
  return trace_characteristic(model, view, family, t0, r0, t_end, tol);
}

} // namespace shockfront
