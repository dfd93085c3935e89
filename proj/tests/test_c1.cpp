#include <catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "shockfront/c1_bounds.hpp"
#include "shockfront/riccati.hpp"
#include "shockfront/smooth.hpp"

using namespace shockfront;
using Catch::Approx;

namespace {
const GasModel kPg2 = GasModel::perfect(2.0);
const SymmetryConfig kD3{3};

std::vector<GasModel> coefficient_models() {
  return {GasModel::perfect(1.4), GasModel::perfect(2.0), GasModel::perfect(2.5),
          GasModel::van_der_waals(2.0, 0.05), GasModel::van_der_waals(2.0, 0.1),
          GasModel::p_system(2.0)};
}

// Appendix-style assembly of a0 straight from H = (w2-w1)/2, bypassing rho
// (independent route for the consistency check).
double a0_via_H(const GasModel& model, const RiemannState& w) {
  const double g0 = model.is_p_system() ? std::get<PSystem>(model.law()).gamma
                                        : (model.is_perfect()
                                               ? std::get<PerfectGas>(model.law()).gamma0
                                               : std::get<VanDerWaals>(model.law()).gamma0);
  const double nu = (g0 + 1.0) / (g0 - 1.0);
  const double H = w.enthalpy();
  double kappa, corr = 1.0, Gfac = 1.0;
  if (model.is_p_system()) {
    kappa = 2.0 * std::sqrt(g0) / (g0 - 1.0);
  } else {
    kappa = 2.0 * std::sqrt(g0 / (g0 - 1.0));
  }
  if (model.is_vdw()) {
    const double b = std::get<VanDerWaals>(model.law()).b;
    const double btilde = b * std::pow(kappa, -(nu - 1.0));
    const double z = btilde * std::pow(H, nu - 1.0); // = b rho / (1 - b rho)
    corr = (1.0 + z) * (1.0 + z);
    Gfac = 1.0 + z;
  }
  // H = kappa m^{(g0-1)/2}  =>  m = (H/kappa)^{2/(g0-1)},
  // H'(rho) = (dH/dm)(dm/drho) with dm/drho = (1+bm)^2
  const double m = std::pow(H / kappa, 2.0 / (g0 - 1.0));
  const double dH_dm = kappa * 0.5 * (g0 - 1.0) * std::pow(m, 0.5 * (g0 - 1.0) - 1.0);
  const double Hprime = dH_dm * corr;
  const double d1_lambda1 = 0.5 * ((g0 + 1.0) / 2.0) * Gfac; // = G/2 in the nu route
  return -d1_lambda1 / std::sqrt(Hprime);
}
} // namespace

TEST_CASE("aux g, A, B closed forms (perfect gas, gamma0 = 2)") {
  const auto aux = aux_gAB(kPg2, 1.0);
  CHECK(aux.g == Approx(-2.0).epsilon(1e-14));
  CHECK(aux.A == Approx(-1.0).epsilon(1e-14));
  CHECK(aux.B == Approx(-3.0 * 2.0 * std::sqrt(2.0)).epsilon(1e-13)); // -3 H(1)

  CHECK_THROWS_AS(aux_gAB(GasModel::perfect(5.0 / 3.0), 1.0), SingularParameterError);
  CHECK_THROWS_AS(aux_gAB(GasModel::perfect(3.0), 1.0), SingularParameterError);
}

TEST_CASE("g and B satisfy their defining ODEs") {
  // d/drho(2 sqrt(H') g) = sqrt(H')/rho  and  d/drho(2 sqrt(H') B) = H'^{3/2}(1+2g)
  for (const auto& m : coefficient_models()) {
    for (double rho : {0.3, 0.8, 1.7}) {
      const double h = 1e-5 * rho;
      auto lhs_g = [&](double x) {
        return 2.0 * std::sqrt(m.enthalpy_slope(x)) * aux_gAB(m, x).g;
      };
      auto lhs_B = [&](double x) {
        return 2.0 * std::sqrt(m.enthalpy_slope(x)) * aux_gAB(m, x).B;
      };
      const double dg = oracles::central_diff(lhs_g, rho, h);
      const double rhs_g = std::sqrt(m.enthalpy_slope(rho)) / rho;
      CHECK(dg == Approx(rhs_g).epsilon(1e-8));

      const double dB = oracles::central_diff(lhs_B, rho, h);
      const double Hp = m.enthalpy_slope(rho);
      const double rhs_B = Hp * std::sqrt(Hp) * (1.0 + 2.0 * aux_gAB(m, rho).g);
      CHECK(dB == Approx(rhs_B).epsilon(1e-8));
    }
  }
}

TEST_CASE("shift terms Phi, Psi") {
  const auto w = to_riemann(kPg2, {1.0, 1.0});
  const auto [Phi, Psi] = phi_psi(kPg2, kD3, 1.0, w);
  const double B = -3.0 * 2.0 * std::sqrt(2.0);
  CHECK(Phi == Approx(2.0 * (1.0 * -1.0 - B)).epsilon(1e-12));  // ~ 14.970563
  CHECK(Psi == Approx(2.0 * (1.0 * -1.0 + B)).epsilon(1e-12));  // ~ -18.970563
  CHECK(Phi == Approx(14.970562748477141).epsilon(1e-9));
  CHECK(Psi == Approx(-18.970562748477141).epsilon(1e-9));

  const auto [p1, q1] = phi_psi(kPg2, SymmetryConfig{1}, 1.0, w);
  CHECK(p1 == 0.0);
  CHECK(q1 == 0.0);

  const auto [p2, q2] = phi_psi(kPg2, kD3, 2.0, w);
  CHECK(p2 == Approx(Phi / 2.0).epsilon(1e-14));
  CHECK(q2 == Approx(Psi / 2.0).epsilon(1e-14));
}

TEST_CASE("phi and h satisfy the defining PDEs (finite differences in w)") {
  // d2 h = d2 lambda1 / (lambda1 - lambda2),  d2(e^h Phi) = -e^h d2 f / (lambda1 - lambda2)
  const double r = 1.3;
  for (const auto& m : {GasModel::perfect(2.0), GasModel::van_der_waals(2.0, 0.1)}) {
    for (const auto& base : {FluidState{0.8, 0.6}, FluidState{1.4, -0.3}}) {
      const auto w0 = to_riemann(m, base);
      const double scale = std::max(1.0, std::abs(w0.w2));
      const double h = 1e-5 * scale;

      auto state = [&](double w2) { return RiemannState{w0.w1, w2}; };
      auto h_of = [&](double w2) {
        return 0.5 * std::log(m.enthalpy_slope(from_riemann(m, state(w2)).rho));
      };
      auto lambda1_of = [&](double w2) { return lambda(m, state(w2)).first; };
      auto ehphi_of = [&](double w2) {
        const auto [Phi, Psi] = phi_psi(m, kD3, r, state(w2));
        (void)Psi;
        return std::exp(h_of(w2)) * Phi;
      };
      auto f_of = [&](double w2) { return source_f(m, kD3, r, state(w2)); };

      const auto [l1, l2] = lambda(m, w0);
      const double d2h = oracles::central_diff(h_of, w0.w2, h);
      const double d2l1 = oracles::central_diff(lambda1_of, w0.w2, h);
      CHECK(d2h == Approx(d2l1 / (l1 - l2)).epsilon(1e-6));

      const double d2ehphi = oracles::central_diff(ehphi_of, w0.w2, h);
      const double d2f = oracles::central_diff(f_of, w0.w2, h);
      const double eh = std::exp(h_of(w0.w2));
      CHECK(d2ehphi == Approx(-eh * d2f / (l1 - l2)).epsilon(1e-6));
    }
  }
}

TEST_CASE("riccati coefficient assembly") {
  const auto w = to_riemann(kPg2, {1.0, 1.0});
  const auto c = coefficients(kPg2, kD3, 1.0, w);
  CHECK(c.a0 == Approx(-1.5 / (2.0 * std::pow(2.0, 0.25))).epsilon(1e-12)); // -0.630716
  CHECK(c.b0 == Approx(c.a0));

  // r-scaling: a2 ~ 1/r^2, a1 ~ 1/r, a0 r-free
  const auto c2 = coefficients(kPg2, kD3, 2.0, w);
  CHECK(c2.a0 == Approx(c.a0).epsilon(1e-14));
  CHECK(c2.a1 == Approx(c.a1 / 2.0).epsilon(1e-12));
  CHECK(c2.a2 == Approx(c.a2 / 4.0).epsilon(1e-12));

  // cross-check a1/b1 against the proof's simplified forms
  const FluidState s = from_riemann(kPg2, w);
  const double G = kPg2.fundamental_derivative(s.rho);
  const double cs = kPg2.sound_speed(s.rho);
  const auto aux = aux_gAB(kPg2, s.rho);
  const double a1_simpl =
      (3 - 1) / (2.0 * 1.0) * (cs - 2.0 * G * aux.B + s.u * (3.0 + 2.0 * G * aux.g));
  const double b1_simpl =
      (3 - 1) / (2.0 * 1.0) * (s.u * (2.0 * G * aux.g + 3.0) + 2.0 * G * aux.B - cs);
  CHECK(c.a1 == Approx(a1_simpl).epsilon(1e-12));
  CHECK(c.b1 == Approx(b1_simpl).epsilon(1e-12));

  CHECK_THROWS_AS(coefficients(kPg2, SymmetryConfig{1}, 1.0, w), DomainError);
}

TEST_CASE("a0 via two independent assemblies and invariants on random states") {
  auto rng = oracles::seeded_rng(21);
  std::uniform_real_distribution<double> ur(0.1, 3.0), uu(-3.0, 3.0), urad(0.2, 10.0);
  for (const auto& m : {GasModel::perfect(2.0), GasModel::perfect(1.4),
                        GasModel::van_der_waals(2.0, 0.1), GasModel::p_system(2.0)}) {
    for (int i = 0; i < 10000; ++i) {
      const auto w = to_riemann(m, {ur(rng), uu(rng)});
      const double r = urad(rng);
      const auto c = coefficients(m, kD3, r, w);
      REQUIRE(c.a0 <= 0.0);
      REQUIRE(c.b0 == Approx(c.a0));
      REQUIRE(c.a0 == Approx(a0_via_H(m, w)).epsilon(1e-10));
      // r-invariance of the reduced forms
      const auto cc = coefficients(m, kD3, 3.7 * r, w);
      REQUIRE(cc.abar1 == Approx(c.abar1).margin(1e-10 * (1.0 + std::abs(c.abar1))));
      REQUIRE(cc.abar2 == Approx(c.abar2).margin(1e-10 * (1.0 + std::abs(c.abar2))));
      REQUIRE(cc.bbar1 == Approx(c.bbar1).margin(1e-10 * (1.0 + std::abs(c.bbar1))));
      REQUIRE(cc.bbar2 == Approx(c.bbar2).margin(1e-10 * (1.0 + std::abs(c.bbar2))));
    }
  }
}

TEST_CASE("appendix per-gas a0/a1 forms: deltas reported, not asserted") {
  // The appendix's H-power form for a0 disagrees with the general assembly
  // (known typo); keep the delta visible so regressions in either side surface.
  const auto w = to_riemann(kPg2, {1.0, 1.0});
  const auto c = coefficients(kPg2, kD3, 1.0, w);
  const double H = w.enthalpy();
  const double nu = 3.0;
  const double a0_appendix =
      -nu / (2.0 * std::sqrt(nu - 1.0) * std::pow(2.0 * nu + 2.0, 0.5 * (nu - 1.0))) *
      std::pow(H, nu - 1.0);
  WARN("appendix a0 delta (known discrepancy): general="
       << c.a0 << " appendix=" << a0_appendix << " delta=" << c.a0 - a0_appendix);
  CHECK(std::isfinite(a0_appendix));
}

TEST_CASE("gradient variable transform") {
  const auto w = to_riemann(kPg2, {1.0, 1.0});
  const auto [Phi, Psi] = phi_psi(kPg2, kD3, 1.0, w);
  const auto gv0 = v_transform(kPg2, kD3, 1.0, w, -Phi, -Psi);
  CHECK(gv0.v1 == Approx(0.0).margin(1e-12));
  CHECK(gv0.v2 == Approx(0.0).margin(1e-12));
  CHECK(std::exp(gv0.h) == Approx(std::pow(2.0, 0.25)).epsilon(1e-12)); // sqrt(H'(1))

  auto rng = oracles::seeded_rng(22);
  std::uniform_real_distribution<double> ur(0.2, 2.0), uu(-2.0, 2.0), ug(-5.0, 5.0);
  for (int i = 0; i < 2000; ++i) {
    const auto ws = to_riemann(kPg2, {ur(rng), uu(rng)});
    const double d1 = ug(rng), d2 = ug(rng), r = 0.5 + ur(rng);
    const auto gv = v_transform(kPg2, kD3, r, ws, d1, d2);
    const auto [b1, b2] = v_transform_inverse(kPg2, kD3, r, ws, gv.v1, gv.v2);
    REQUIRE(b1 == Approx(d1).margin(1e-12 * (1.0 + std::abs(d1))));
    REQUIRE(b2 == Approx(d2).margin(1e-12 * (1.0 + std::abs(d2))));
  }
}

TEST_CASE("Q evaluation and inversion") {
  CHECK(q_eval(1.0) == Approx(std::exp(1.0)).epsilon(1e-15));
  CHECK(q_inverse(1.0) == Approx(0.56714329040978387).epsilon(1e-13)); // Omega
  CHECK(q_inverse(std::exp(1.0)) == Approx(1.0).epsilon(1e-13));
  CHECK(x_of(1.0, std::exp(1.0), 1.0) == Approx(1.0).epsilon(1e-12));
  CHECK(x_of(1.0, std::exp(1.0), 1.0) ==
        Approx(oracles::q_inverse_bisect(std::exp(1.0))).epsilon(1e-12));

  // exact functional inverse on (0, 1e3]
  for (double y : {1e-6, 1e-3, 0.1, 0.5671, 1.0, 2.0, 10.0, 100.0, 1000.0}) {
    CHECK(q_eval(q_inverse(y)) == Approx(y).epsilon(1e-12));
    CHECK(q_inverse(y) == Approx(oracles::q_inverse_bisect(y)).epsilon(1e-11));
  }
  CHECK_THROWS_AS(q_inverse(0.0), DomainError);
  CHECK_THROWS_AS(x_of(0.0, 1.0, 1.0), DomainError);
}

TEST_CASE("horizon formulas") {
  BoundConstants c;
  c.A0 = c.A1 = c.A2 = 1.0;
  c.B0 = c.B1 = c.B2 = 1.0;
  c.theta_plus = 1.0;
  c.xi_plus = 1.0;
  CHECK(c1_horizon_pos(c, 1.0, 0.0, 1) == Approx(0.56714329040978387).epsilon(1e-12));
  CHECK(c1_horizon_pos(c, 2.0, 0.0, 1) ==
        Approx(2.0 * 0.56714329040978387).epsilon(1e-12));
  CHECK(c1_horizon_pos(c, 1.0, 0.5, 2) == Approx(0.5 + 0.56714329040978387).epsilon(1e-12));

  BoundConstants c2 = c;
  c2.A2 = 0.0;
  CHECK(std::isinf(c1_horizon_pos(c2, 1.0, 0.0, 1)));

  // negative case: |v|=0 reduces to the positive horizon; |v|=1 gives Q^{-1}(1/2)
  CHECK(c1_horizon_neg(c, 0.0, 1.0, 0.0, 1) == Approx(c1_horizon_pos(c, 1.0, 0.0, 1)));
  CHECK(c1_horizon_neg(c, 1.0, 1.0, 0.0, 1) ==
        Approx(0.35173371124919584).epsilon(1e-10)); // Q^{-1}(0.5), bisection oracle
  CHECK(c1_horizon_neg(c, 1.0, 1.0, 0.0, 1) ==
        Approx(oracles::q_inverse_bisect(0.5)).epsilon(1e-10));
  CHECK(c1_horizon_neg(c, 2.0, 1.0, 0.0, 1) < c1_horizon_neg(c, 1.0, 1.0, 0.0, 1));
}

TEST_CASE("v-envelope algebra on prescribed coefficients") {
  const int n = 400;
  std::vector<double> t(n + 1), zero(n + 1, 0.0), mone(n + 1, -1.0), ones(n + 1, 1.0),
      xs(n + 1, 1.0);
  for (int i = 0; i <= n; ++i) t[i] = 2.0 * i / n;

  // a2 = 0, v0 >= 0: lower = 0, upper = v0 (weights trivial at a1 = 0)
  VEnvelope e1(t, mone, zero, zero, xs, 1, 0.7);
  CHECK(e1.lower(1.0) == Approx(0.0).margin(1e-14));
  CHECK(e1.upper(1.0) == Approx(0.7).epsilon(1e-12));

  // constant a0 = -1: exact solution 1/(1+t) inside [0, v0]
  riccati::RiccatiProblem p;
  p.a0 = [](double) { return -1.0; };
  p.a1 = [](double) { return 0.0; };
  p.a2 = [](double) { return 0.0; };
  p.y0 = 1.0;
  p.T = 2.0;
  const auto traj = riccati::integrate(p);
  VEnvelope e2(t, mone, zero, zero, xs, 1, 1.0);
  for (double tt : {0.5, 1.0, 1.9}) {
    const double y = traj.path(tt);
    CHECK(y == Approx(1.0 / (1.0 + tt)).epsilon(1e-8));
    CHECK(y <= e2.upper(tt) + 1e-12);
    CHECK(y >= e2.lower(tt) - 1e-12);
  }

  // negative case: denominator must stay positive up to the lemma horizon
  std::vector<double> a2s(n + 1, 0.3);
  VEnvelope e3(t, mone, zero, a2s, xs, 1, -0.5);
  BoundConstants bc;
  bc.A0 = 1.0;
  bc.A1 = 1e-6; // a1 == 0: use a tiny positive stand-in for the formula
  bc.A2 = 0.3;
  bc.theta_plus = bc.A1 / std::sqrt(bc.A0 * bc.A2);
  const double hz = c1_horizon_neg(bc, 0.5, 1.0, 0.0, 1);
  for (double tt = 0.05; tt < std::min(hz, 2.0); tt += 0.05)
    CHECK(std::isfinite(e3.lower(tt)));
  CHECK_THROWS_AS(e3.lower(2.5), HorizonExceededError); // past the path interval
}

TEST_CASE("frozen-coefficient riccati trajectories respect the envelope") {
  // physical path in a spherical expanding field
  const auto prof = [](double r) {
    const double rho = 0.25 + 0.04 * std::exp(-(r - 3.0) * (r - 3.0));
    return to_riemann(kPg2, {rho, kPg2.enthalpy(rho) + 0.5});
  };
  EvolveParams params;
  params.nr = 150;
  const auto field = evolve_smooth(kPg2, kD3, prof, 2.2, 4.2, 0.5, params);
  const auto path = trace_characteristic(kPg2, field, CharFamily::one, 0.0, 3.0, field.t_max());
  REQUIRE(path.nodes.size() >= 4);

  // initial gradient variable from the data
  const double h = 1e-6;
  const auto wl = prof(3.0 - h), wr = prof(3.0 + h);
  const double d1 = (wr.w1 - wl.w1) / (2.0 * h);
  const auto gv = v_transform(kPg2, kD3, 3.0, prof(3.0), d1, (wr.w2 - wl.w2) / (2.0 * h));

  const auto env = v_envelope(kPg2, kD3, path, 1, gv.v1);

  // freeze coefficients along the path and integrate the riccati oracle
  riccati::RiccatiProblem p;
  auto coeff = [&](int idx) {
    return [&, idx](double tt) {
      const auto nmin = path.nodes.front().t;
      const double tq = std::clamp(tt + nmin, path.t_begin(), path.t_end());
      // piecewise-linear state along the path
      const auto* nodes = &path.nodes;
      auto it = std::upper_bound(nodes->begin(), nodes->end(), tq,
                                 [](double a, const PathNode& b) { return a < b.t; });
      if (it == nodes->begin()) ++it;
      if (it == nodes->end()) --it;
      const auto& nb = *it;
      const auto& na = *(it - 1);
      const double s = (tq - na.t) / std::max(1e-300, nb.t - na.t);
      const double r = na.r + s * (nb.r - na.r);
      const RiemannState w{na.w1 + s * (nb.w1 - na.w1), na.w2 + s * (nb.w2 - na.w2)};
      const auto cc = coefficients(kPg2, kD3, r, w);
      return idx == 0 ? cc.a0 : (idx == 1 ? cc.a1 : cc.a2);
    };
  };
  p.a0 = coeff(0);
  p.a1 = coeff(1);
  p.a2 = coeff(2);
  p.y0 = gv.v1;
  p.T = path.t_end() - path.t_begin();
  const auto traj = riccati::integrate(p, 1e-10);
  REQUIRE(traj.completed);

  const auto path2 = trace_characteristic(kPg2, field, CharFamily::two, 0.0, 3.0,
                                          field.t_max());
  const double t_common = std::min(path.t_end(), path2.t_end());
  const auto bc = bound_constants(kPg2, kD3, path, path2, path.t_begin(), t_common);
  const double horizon = gv.v1 >= 0.0
                             ? c1_horizon_pos(bc, env.min_x(), path.t_begin(), 1)
                             : c1_horizon_neg(bc, std::abs(gv.v1), env.min_x(),
                                              path.t_begin(), 1);
  const double t_check = std::min(horizon, t_common);
  for (double tt = path.t_begin() + 0.01; tt < t_check; tt += 0.02) {
    const double y = traj.path(tt - path.t_begin());
    REQUIRE(y <= env.upper(tt) + 1e-6);
    REQUIRE(y >= env.lower(tt) - 1e-6);
  }
}

TEST_CASE("bound constants on a frozen path") {
  // constant-state path at fixed radius: maxima equal the pointwise values
  CharacteristicPath p1, p2;
  p1.family = CharFamily::one;
  p2.family = CharFamily::two;
  const auto w = to_riemann(kPg2, {1.0, 1.0});
  for (int i = 0; i <= 20; ++i) {
    p1.nodes.push_back({i / 20.0, 2.0, w.w1, w.w2});
    p2.nodes.push_back({i / 20.0, 2.0, w.w1, w.w2});
  }
  const auto c = coefficients(kPg2, kD3, 2.0, w);
  const auto bc = bound_constants(kPg2, kD3, p1, p2, 0.0, 1.0);
  CHECK(bc.A0 == Approx(std::abs(c.a0)).epsilon(1e-12));
  CHECK(bc.A1 == Approx(std::abs(c.abar1)).epsilon(1e-12));
  CHECK(bc.A2 == Approx(std::abs(c.abar2)).epsilon(1e-12));
  CHECK(bc.B0 == Approx(std::abs(c.b0)).epsilon(1e-12));
  CHECK(bc.B1 == Approx(std::abs(c.bbar1)).epsilon(1e-12));
  CHECK(bc.B2 == Approx(std::abs(c.bbar2)).epsilon(1e-12));
  // constant coefficients: K_a = |a2| T e^{|a1| T}
  CHECK(bc.Ka == Approx(std::abs(c.a2) * std::exp(std::abs(c.a1))).epsilon(1e-6));

  CHECK_THROWS_AS(bound_constants(kPg2, kD3, p1, p2, 0.0, 2.0), PathError);
}
