#pragma once

// Method-of-characteristics evolution of smooth solutions of the reduced
// system, plus the C0 a-priori envelopes along characteristics and their
// verification harness.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "shockfront/characteristics.hpp"
#include "shockfront/field.hpp"
#include "shockfront/quadrature.hpp"
#include "shockfront/riemann.hpp"

namespace shockfront {

using Profile = std::function<RiemannState(double)>; // r -> (w1, w2) at t = 0

struct EvolveParams {
  int nr = 200;                  // output columns over [r_lo, r_hi]
  int nt_out = 0;                // 0: keep every computed level; else ~nt_out levels
  double cfl = 0.4;              // dt = cfl * dr / max speed
  double pad_factor = 1.15;      // safety on the domain-of-dependence padding
  double origin_margin = 0.3;    // left pad never crosses origin_margin * r_lo
  double blowup_gradient_factor = 1e3;
  double vacuum_threshold = 1e-9;
};

namespace detail {
struct SpeedScan {
  double lambda1_min, lambda2_max, speed_max;
};
inline SpeedScan scan_speeds(const GasModel& model, const Profile& w0, double lo, double hi,
                             int n = 400) {
  SpeedScan s{1e300, -1e300, 0.0};
  for (int i = 0; i <= n; ++i) {
    const double r = lo + (hi - lo) * i / n;
    const auto w = w0(r);
    const auto [l1, l2] = lambda(model, w);
    s.lambda1_min = std::min(s.lambda1_min, l1);
    s.lambda2_max = std::max(s.lambda2_max, l2);
    s.speed_max = std::max({s.speed_max, std::abs(l1), std::abs(l2)});
  }
  return s;
}
} // namespace detail

/// Second-order characteristic scheme (iterated midpoint along both families
/// with trapezoidal source quadrature) on an internally padded uniform grid.
/// The padded domain's edges are followed as genuine characteristics — the
/// left edge as a 2-characteristic and the right edge as a 1-characteristic —
/// so the valid region shrinks exactly with the domain of dependence. The
/// returned field covers [r_lo, r_hi] x [0, t_end].
inline SmoothField evolve_smooth(const GasModel& model, const SymmetryConfig& cfg,
                                 const Profile& w0, double r_lo, double r_hi, double t_end,
                                 const EvolveParams& params = {}) {
  if (!(r_lo > 0.0) || !(r_hi > r_lo)) throw DomainError("evolve_smooth: bad r range");
  if (!(t_end > 0.0)) throw DomainError("evolve_smooth: t_end must be > 0");
  if (params.nr < 3) throw DomainError("evolve_smooth: nr must be >= 3");

  const double dr = (r_hi - r_lo) / (params.nr - 1);
  const auto scan =
      detail::scan_speeds(model, w0, std::max(0.25 * r_lo, r_lo - 1.0), r_hi + 1.0);
  const double pad_left = params.pad_factor * t_end * std::max(0.0, scan.lambda2_max) + 2 * dr;
  const double pad_right =
      params.pad_factor * t_end * std::max(0.0, -scan.lambda1_min) + 2 * dr;
  // the left pad is capped away from the origin (the geometric source blows up
  // there); if the run genuinely needs more, the edge tracking aborts honestly
  const int jl = std::min(static_cast<int>(std::ceil(pad_left / dr)),
                          static_cast<int>(std::floor(r_lo * (1.0 - params.origin_margin) / dr)));
  const int jr = static_cast<int>(std::ceil(pad_right / dr));
  if (jl < 0)
    throw DomainError("evolve_smooth: no room for the left pad; move r_lo outward");

  const int ncol = params.nr + jl + jr;
  auto r_of = [&](int j) { return r_lo + (j - jl) * dr; };

  double dt = params.cfl * dr / std::max(scan.speed_max, 1e-12);
  int n_steps = std::max(1, static_cast<int>(std::ceil(t_end / dt)));
  if (params.nt_out > 1) {
    const int blocks = params.nt_out - 1;
    n_steps = ((n_steps + blocks - 1) / blocks) * blocks; // multiple of blocks
  }
  dt = t_end / n_steps;

  std::vector<double> w1(ncol), w2(ncol), n1(ncol), n2(ncol);
  for (int j = 0; j < ncol; ++j) {
    const auto w = w0(r_of(j));
    w1[j] = w.w1;
    w2[j] = w.w2;
  }
  // moving validity edges: (position, state); integer bracket [lo, hi] of
  // lattice columns strictly inside [eL.r, eR.r]
  struct Edge {
    double r, w1, w2;
  };
  Edge eL{r_of(0), w1[0], w2[0]};
  Edge eR{r_of(ncol - 1), w1[ncol - 1], w2[ncol - 1]};
  int lo = 0, hi = ncol - 1;

  double grad0 = 0.0, wscale = 0.0;
  for (int j = 0; j < ncol; ++j) {
    if (j > 0)
      grad0 = std::max({grad0, std::abs(w1[j] - w1[j - 1]) / dr,
                        std::abs(w2[j] - w2[j - 1]) / dr});
    wscale = std::max({wscale, std::abs(w1[j]), std::abs(w2[j])});
  }
  const double grad_ceiling =
      params.blowup_gradient_factor * std::max(grad0, wscale / (r_hi - r_lo));

  std::vector<std::vector<double>> out1, out2;
  std::vector<double> out_t;
  const int keep_every = (params.nt_out > 1) ? n_steps / (params.nt_out - 1) : 1;
  auto keep = [&](int step) {
    if (step % keep_every != 0 && step != n_steps) return;
    out1.emplace_back(w1.begin() + jl, w1.begin() + jl + params.nr);
    out2.emplace_back(w2.begin() + jl, w2.begin() + jl + params.nr);
    out_t.push_back(step * dt);
  };
  keep(0);

  auto check_state = [&](double a, double b, double t) {
    if (!(b - a > params.vacuum_threshold))
      throw VacuumError("evolve_smooth: vacuum approached at t=" + std::to_string(t));
  };

  // interpolation on the previous level including the edge points; cubic in
  // the lattice interior (linear feet interpolation caps the scheme at first
  // order: its cell-scale error oscillation survives the residual differences)
  auto interp_prev = [&](double r, double* a, double* b) {
    if (r <= eL.r) {
      *a = eL.w1;
      *b = eL.w2;
      return;
    }
    if (r >= eR.r) {
      *a = eR.w1;
      *b = eR.w2;
      return;
    }
    const double x = (r - r_of(0)) / dr;
    const int j = static_cast<int>(std::floor(x));
    if (j < lo) { // between left edge and first valid column
      const double s = (r - eL.r) / (r_of(lo) - eL.r);
      *a = (1.0 - s) * eL.w1 + s * w1[lo];
      *b = (1.0 - s) * eL.w2 + s * w2[lo];
      return;
    }
    if (j >= hi) { // between last valid column and right edge
      const double s = (r - r_of(hi)) / (eR.r - r_of(hi));
      *a = (1.0 - s) * w1[hi] + s * eR.w1;
      *b = (1.0 - s) * w2[hi] + s * eR.w2;
      return;
    }
    const double s = x - j;
    if (j - 1 >= lo && j + 2 <= hi) {
      const double cm = -s * (s - 1.0) * (s - 2.0) / 6.0;
      const double c0 = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
      const double c1 = -(s + 1.0) * s * (s - 2.0) / 2.0;
      const double c2 = (s + 1.0) * s * (s - 1.0) / 6.0;
      *a = cm * w1[j - 1] + c0 * w1[j] + c1 * w1[j + 1] + c2 * w1[j + 2];
      *b = cm * w2[j - 1] + c0 * w2[j] + c1 * w2[j + 1] + c2 * w2[j + 2];
      return;
    }
    *a = (1.0 - s) * w1[j] + s * w1[j + 1];
    *b = (1.0 - s) * w2[j] + s * w2[j + 1];
  };

  // iterated-midpoint update of one node at radius r_new on the new level;
  // family-1 value comes through foot1, family-2 through foot2
  auto advance_node = [&](double r_new, double w1_seed, double w2_seed, double t_new,
                          double* g1_out, double* g2_out) {
    double g1 = w1_seed, g2 = w2_seed;
    double fa = 0, fb = 0;
    for (int it = 0; it < 3; ++it) {
      check_state(g1, g2, t_new);
      const auto [l1n, l2n] = lambda(model, RiemannState{g1, g2});
      double a1, b1v, a2, b2v;
      interp_prev(r_new - dt * l1n, &a1, &b1v); // provisional feet for speeds
      interp_prev(r_new - dt * l2n, &a2, &b2v);
      check_state(a1, b1v, t_new);
      check_state(a2, b2v, t_new);
      const auto [l1A, unused1] = lambda(model, RiemannState{a1, b1v});
      const auto [unused2, l2B] = lambda(model, RiemannState{a2, b2v});
      (void)unused1;
      (void)unused2;
      double foot1 = r_new - 0.5 * dt * (l1n + l1A);
      double foot2 = r_new - 0.5 * dt * (l2n + l2B);
      // same-family characteristics cannot cross the edge characteristics; a
      // foot outside by a fraction of a cell is discretisation noise
      const double foot_tol = 0.25 * dr;
      if (foot1 < eL.r - foot_tol || foot2 < eL.r - foot_tol || foot1 > eR.r + foot_tol ||
          foot2 > eR.r + foot_tol)
        throw DomainShrunkError(
            "evolve_smooth: characteristic foot outside the previous level at t=" +
            std::to_string(t_new));
      foot1 = std::clamp(foot1, eL.r, eR.r);
      foot2 = std::clamp(foot2, eL.r, eR.r);
      double w1A, w2A, w1B, w2B;
      interp_prev(foot1, &w1A, &w2A);
      interp_prev(foot2, &w1B, &w2B);
      check_state(w1A, w2A, t_new);
      check_state(w1B, w2B, t_new);
      fa = source_f(model, cfg, foot1, RiemannState{w1A, w2A});
      fb = source_f(model, cfg, foot2, RiemannState{w1B, w2B});
      const double fN = source_f(model, cfg, r_new, RiemannState{g1, g2});
      g1 = w1A + 0.5 * dt * (fa + fN);
      g2 = w2B - 0.5 * dt * (fb + fN);
    }
    *g1_out = g1;
    *g2_out = g2;
  };

  for (int step = 1; step <= n_steps; ++step) {
    const double t_new = step * dt;

    // advance the validity edges along their characteristics (Heun)
    auto advance_edge = [&](const Edge& e, bool left) {
      const auto [l1o, l2o] = lambda(model, RiemannState{e.w1, e.w2});
      const double sp0 = left ? l2o : l1o;
      double r_new = e.r + dt * sp0;
      double g1 = e.w1, g2 = e.w2;
      for (int it = 0; it < 3; ++it) {
        advance_node(r_new, g1, g2, t_new, &g1, &g2);
        const auto [l1n, l2n] = lambda(model, RiemannState{g1, g2});
        r_new = e.r + 0.5 * dt * (sp0 + (left ? l2n : l1n));
      }
      return Edge{r_new, g1, g2};
    };
    // the left edge rides a 2-characteristic: both feet from the new position
    // land inside the previous level (lambda1 < lambda2); mirrored on the right
    const Edge eL_new = advance_edge(eL, true);
    const Edge eR_new = advance_edge(eR, false);
    if (!(eL_new.r < eR_new.r))
      throw DomainShrunkError("evolve_smooth: numerical domain of dependence is empty at t=" +
                              std::to_string(t_new));

    int new_lo = lo, new_hi = hi;
    while (new_lo < ncol && r_of(new_lo) <= eL_new.r) ++new_lo;
    while (new_hi >= 0 && r_of(new_hi) >= eR_new.r) --new_hi;
    if (new_lo > jl || new_hi < jl + params.nr - 1)
      throw DomainShrunkError(
          "evolve_smooth: domain of dependence left the output window at t=" +
          std::to_string(t_new));

    for (int j = new_lo; j <= new_hi; ++j)
      advance_node(r_of(j), w1[j], w2[j], t_new, &n1[j], &n2[j]);

    lo = new_lo;
    hi = new_hi;
    std::swap(w1, n1);
    std::swap(w2, n2);
    eL = eL_new;
    eR = eR_new;

    double grad = 0.0;
    for (int j = lo + 1; j <= hi; ++j)
      grad = std::max({grad, std::abs(w1[j] - w1[j - 1]) / dr,
                       std::abs(w2[j] - w2[j - 1]) / dr});
    if (grad > grad_ceiling)
      throw BlowupError("evolve_smooth: gradient ceiling exceeded", t_new - dt, t_new);
    for (int j = lo; j <= hi; ++j) check_state(w1[j], w2[j], t_new);

    keep(step);
  }

  std::vector<double> rs(params.nr);
  for (int j = 0; j < params.nr; ++j) rs[j] = r_lo + j * dr;
  auto field = SmoothField::rectangular(out_t, rs);
  for (std::size_t i = 0; i < out_t.size(); ++i)
    for (int j = 0; j < params.nr; ++j) {
      field.w1(i, j) = out1[i][j];
      field.w2(i, j) = out2[i][j];
    }
  return field;
}

// ---------------------------------------------------------------------------
// C0 a-priori envelopes along characteristics
// ---------------------------------------------------------------------------

/// Summary of the initial data over the declared range; the Lemma hypotheses
/// are checked against it.
struct C0Data {
  double w1_min;      // min of w1(0, .)
  double w2_sup;      // sup of w2(0, .)
  double gap_min;     // min of (w2 - w1)(0, .)
};

inline C0Data scan_initial(const Profile& w0, double lo, double hi, int n = 1000) {
  C0Data d{1e300, -1e300, 1e300};
  for (int i = 0; i <= n; ++i) {
    const auto w = w0(lo + (hi - lo) * i / n);
    d.w1_min = std::min(d.w1_min, w.w1);
    d.w2_sup = std::max(d.w2_sup, w.w2);
    d.gap_min = std::min(d.gap_min, w.w2 - w.w1);
  }
  return d;
}

/// Pointwise-evaluable C0 bounds along one characteristic path. The envelope
/// starts at the path's first node (start time beta is free); the bound pair of
/// the path's own family is the lemma estimate, the other pair is the global
/// ordering chain.
class C0Envelope {
public:
  C0Envelope(const SymmetryConfig& cfg, const C0Data& data, const CharacteristicPath& path)
      : family_(path.family), data_(data) {
    if (!(data.gap_min >= 0.0))
      throw HypothesisError("c0_envelope: hypothesis w2 - w1 >= 0 at t=0 fails");
    if (!(data.w1_min > 0.0))
      throw HypothesisError("c0_envelope: hypothesis w1(0,.) > 0 fails");
    if (path.nodes.size() < 2) throw PathError("c0_envelope: path too short");
    w1_start_ = path.nodes.front().w1;
    w2_start_ = path.nodes.front().w2;
    t_.reserve(path.nodes.size());
    std::vector<double> integrand;
    integrand.reserve(path.nodes.size());
    for (const auto& n : path.nodes) {
      t_.push_back(n.t);
      integrand.push_back((cfg.d - 1) / (4.0 * n.r));
    }
    integral_ = cumulative_trapezoid(t_, integrand);
    // Richardson-style error estimate of the trapezoid sums
    std::vector<double> t2, f2;
    for (std::size_t i = 0; i < t_.size(); i += 2) {
      t2.push_back(t_[i]);
      f2.push_back(integrand[i]);
    }
    if (t2.size() >= 2 && t2.back() != t_.back()) {
      t2.push_back(t_.back());
      f2.push_back(integrand.back());
    }
    quad_error_ = t2.size() >= 2
                      ? std::abs(cumulative_trapezoid(t2, f2).back() - integral_.back()) / 3.0
                      : 0.0;
  }

  double integral_at(double t) const { return interp_linear(t_, integral_, t); }
  double quad_error() const { return quad_error_; }

  double lower_w1(double /*t*/) const {
    if (family_ == CharFamily::one) return w1_start_;
    return data_.w1_min; // ordering chain
  }
  double upper_w1(double t) const {
    if (family_ == CharFamily::one)
      return w1_start_ + data_.w2_sup * data_.w2_sup * integral_at(t);
    return upper_w2(t); // w1 <= w2
  }
  double lower_w2(double t) const {
    if (family_ == CharFamily::two)
      return w2_start_ / (1.0 + w2_start_ * integral_at(t));
    return lower_w1(t); // w2 >= w1
  }
  double upper_w2(double /*t*/) const {
    if (family_ == CharFamily::two) return w2_start_;
    return data_.w2_sup; // ordering chain
  }

private:
  CharFamily family_;
  C0Data data_;
  double w1_start_ = 0.0, w2_start_ = 0.0;
  std::vector<double> t_, integral_;
  double quad_error_ = 0.0;
};

inline C0Envelope c0_envelope(const SymmetryConfig& cfg, const C0Data& data,
                              const CharacteristicPath& path) {
  return C0Envelope(cfg, data, path);
}

/// Finite-horizon time bound of the relaxed C0 proposition: with
/// min(w1_0 + w2_0) > 0, returns script_T when min w1_0 >= 0, otherwise
/// min(script_T, -4 r2 (w1_min + w2_min) / ((d-1) w1_min w2_min)).
inline double t0_lower_bound(const SymmetryConfig& cfg, double w1_min, double w2_min,
                             double r2, double script_T) {
  if (!(w1_min + w2_min > 0.0))
    throw HypothesisError("t0_lower_bound: requires min(w1_0 + w2_0) > 0");
  if (!(r2 > 0.0)) throw DomainError("t0_lower_bound: r2 must be > 0");
  if (w1_min >= 0.0 || cfg.d == 1) return script_T;
  const double T = -4.0 * r2 * (w1_min + w2_min) / ((cfg.d - 1) * w1_min * w2_min);
  return std::min(script_T, T);
}

// ---------------------------------------------------------------------------
// C0 verification report
// ---------------------------------------------------------------------------

struct C0Report {
  bool gap_ok = true;             // (i) w2 >= w1 everywhere
  double worst_gap = 1e300;

  bool monotone_ok = true;        // (ii) w1 up along family 1, w2 down along family 2
  double worst_monotone = 0.0;    // most negative increment (after slack sign convention)

  double envelope_violation = 0.0; // (iii) max breach of the lemma envelopes
  double envelope_quad_error = 0.0;

  bool chain_ok = true;           // (iv) w1(0,X1(0)) <= w1 <= w2 <= w2(0,X2(0))
  double worst_chain = 0.0;

  double slack_scale = 0.0;       // |w| scale used for the monotonicity slack
};

struct VerifyC0Options {
  int n_paths = 16;
  int n_chain_samples = 8; // per direction, (iv) grid
  double slack_rel = 1e-8;
  double trace_tol = 1e-9;
};

inline C0Report verify_c0(const GasModel& model, const SymmetryConfig& cfg,
                          const SmoothField& field, const VerifyC0Options& opt = {}) {
  if (!field.is_rectangular()) throw GridError("verify_c0: rectangular field required");
  C0Report rep;
  const auto ex = field.extrema();
  rep.slack_scale = std::max({std::abs(ex.w1_min), std::abs(ex.w1_max),
                              std::abs(ex.w2_min), std::abs(ex.w2_max)});
  const double slack = opt.slack_rel * rep.slack_scale;

  // (i)
  for (std::size_t i = 0; i < field.rows(); ++i)
    for (std::size_t j = 0; j < field.cols(); ++j) {
      const double gap = field.w2(i, j) - field.w1(i, j);
      rep.worst_gap = std::min(rep.worst_gap, gap);
      if (gap < 0.0) rep.gap_ok = false;
    }
  if (!rep.gap_ok) {
    // tracing through a vacuum-violating field is meaningless; the gap failure
    // is the report
    rep.monotone_ok = rep.chain_ok = false;
    return rep;
  }

  // initial-data summary from the first level
  C0Data data{1e300, -1e300, 1e300};
  for (std::size_t j = 0; j < field.cols(); ++j) {
    data.w1_min = std::min(data.w1_min, field.w1(0, j));
    data.w2_sup = std::max(data.w2_sup, field.w2(0, j));
    data.gap_min = std::min(data.gap_min, field.w2(0, j) - field.w1(0, j));
  }

  const double r0 = field.r_axis().front(), r1 = field.r_axis().back();
  const double t_end = field.t_max();
  for (int k = 0; k < opt.n_paths; ++k) {
    const double rs = r0 + (r1 - r0) * (k + 0.5) / opt.n_paths;
    for (const auto fam : {CharFamily::one, CharFamily::two}) {
      const auto path = trace_characteristic(model, field, fam, field.t_min(), rs, t_end,
                                             opt.trace_tol);
      if (path.nodes.size() < 2) continue;
      // (ii) monotonicity along the path
      for (std::size_t i = 1; i < path.nodes.size(); ++i) {
        const double dw = (fam == CharFamily::one)
                              ? path.nodes[i].w1 - path.nodes[i - 1].w1
                              : path.nodes[i - 1].w2 - path.nodes[i].w2;
        rep.worst_monotone = std::min(rep.worst_monotone, dw);
        if (dw < -slack) rep.monotone_ok = false;
      }
      // (iii) envelope containment
      if (data.gap_min >= 0.0 && data.w1_min > 0.0) {
        const C0Envelope env(cfg, data, path);
        rep.envelope_quad_error = std::max(rep.envelope_quad_error, env.quad_error());
        for (const auto& n : path.nodes) {
          const double b1 = std::max(env.lower_w1(n.t) - n.w1, n.w1 - env.upper_w1(n.t));
          const double b2 = std::max(env.lower_w2(n.t) - n.w2, n.w2 - env.upper_w2(n.t));
          rep.envelope_violation = std::max({rep.envelope_violation, b1, b2});
        }
      }
    }
  }

  // (iv) ordering chain via backward traces
  for (int a = 1; a <= opt.n_chain_samples; ++a)
    for (int b = 1; b <= opt.n_chain_samples; ++b) {
      const double t = field.t_min() + (t_end - field.t_min()) * a / (opt.n_chain_samples + 1);
      const double r = r0 + (r1 - r0) * b / (opt.n_chain_samples + 1);
      const auto back1 =
          trace_characteristic(model, field, CharFamily::one, t, r, field.t_min(), opt.trace_tol);
      const auto back2 =
          trace_characteristic(model, field, CharFamily::two, t, r, field.t_min(), opt.trace_tol);
      if (back1.exited_domain || back2.exited_domain) continue;
      const auto [w1tr, w2tr] = field.interpolate(t, r);
      const double lhs = back1.nodes.front().w1; // w1 at time 0 on the 1-characteristic
      const double rhs = back2.nodes.front().w2; // w2 at time 0 on the 2-characteristic
      const double worst =
          std::min({w1tr - lhs, w2tr - w1tr, rhs - w2tr});
      rep.worst_chain = std::min(rep.worst_chain, worst);
      if (worst < -slack) rep.chain_ok = false;
    }
  return rep;
}

} // namespace shockfront
