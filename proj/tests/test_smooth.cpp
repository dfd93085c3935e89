#include <catch_amalgamated.hpp>

#include "oracles.hpp"
#include "shockfront/smooth.hpp"

using namespace shockfront;
using Catch::Approx;

namespace {
const GasModel kPg2 = GasModel::perfect(2.0);

FieldView constant_view(const RiemannState& w) {
  return FieldView{[w](double, double) { return std::pair{w.w1, w.w2}; }, {}};
}

// smooth expanding d=3 scenario satisfying the C0 lemma hypotheses
Profile expanding_profile() {
  return [](double r) {
    const double rho = 0.2 + 0.05 * std::exp(-(r - 3.0) * (r - 3.0));
    const double u = kPg2.enthalpy(rho) + 0.4 + 0.05 * std::tanh(r - 3.0);
    return to_riemann(kPg2, {rho, u});
  };
}
} // namespace

TEST_CASE("tracing a constant field gives exact straight characteristics") {
  const auto w = to_riemann(kPg2, {1.0, 1.0});
  const auto [l1, l2] = lambda(kPg2, w);
  const auto view = constant_view(w);
  const auto path = trace_characteristic(kPg2, view, CharFamily::two, 0.0, 2.0, 1.5);
  REQUIRE(path.nodes.size() >= 2);
  REQUIRE_FALSE(path.exited_domain);
  for (const auto& n : path.nodes)
    CHECK(n.r == Approx(2.0 + l2 * n.t).epsilon(1e-12));
  CHECK(path.r_at(0.75) == Approx(2.0 + l2 * 0.75).epsilon(1e-12));

  const auto fluid = trace_characteristic(kPg2, view, CharFamily::fluid, 0.0, 2.0, 1.5);
  CHECK(fluid.nodes.back().r == Approx(2.0 + 1.0 * 1.5).epsilon(1e-12));
  (void)l1;
}

TEST_CASE("evolve_smooth keeps riemann-constant planar data constant") {
  const auto w = to_riemann(kPg2, {0.5, 0.8});
  EvolveParams params;
  params.nr = 60;
  const auto field = evolve_smooth(
      kPg2, SymmetryConfig{1}, [&](double) { return w; }, 2.0, 4.0, 0.5, params);
  for (std::size_t i = 0; i < field.rows(); ++i)
    for (std::size_t j = 0; j < field.cols(); ++j) {
      REQUIRE(field.w1(i, j) == Approx(w.w1).epsilon(1e-12));
      REQUIRE(field.w2(i, j) == Approx(w.w2).epsilon(1e-12));
    }
  CHECK(reduced_residual(kPg2, SymmetryConfig{1}, field).max_abs < 1e-10);
}

TEST_CASE("spherical evolution of constant w0 = (1, 4)") {
  EvolveParams params;
  params.nr = 120;
  const auto field = evolve_smooth(
      kPg2, SymmetryConfig{3}, [](double) { return RiemannState{1.0, 4.0}; }, 2.0, 5.0, 0.3,
      params);
  const auto rep = verify_c0(kPg2, SymmetryConfig{3}, field);
  CHECK(rep.gap_ok);
  CHECK(rep.monotone_ok);          // w1 up along family 1, w2 down along family 2
  CHECK(rep.chain_ok);
  const auto res = reduced_residual(kPg2, SymmetryConfig{3}, field);
  CHECK(rep.envelope_violation <= 10.0 * res.max_abs + rep.envelope_quad_error);
}

TEST_CASE("self-convergence under grid halving") {
  const auto prof = expanding_profile();
  double res_coarse = 0.0, res_fine = 0.0;
  for (int pass = 0; pass < 2; ++pass) {
    EvolveParams params;
    params.nr = pass == 0 ? 60 : 120;
    const auto field =
        evolve_smooth(kPg2, SymmetryConfig{3}, prof, 2.0, 4.0, 0.3, params);
    const double res = reduced_residual(kPg2, SymmetryConfig{3}, field).max_abs;
    (pass == 0 ? res_coarse : res_fine) = res;
  }
  CHECK(res_coarse / res_fine >= 3.0); // order >= 1.6 on this smoke size
}

TEST_CASE("c0 envelope on a frozen path and the planar degeneracy") {
  // hypothetical frozen 2-path at radius R = 2 with w2(0) = 4
  CharacteristicPath path;
  path.family = CharFamily::two;
  for (int i = 0; i <= 10; ++i)
    path.nodes.push_back({i / 10.0, 2.0, 1.0, 4.0});
  const C0Data data{0.5, 4.0, 1.0};
  const auto env = c0_envelope(SymmetryConfig{3}, data, path);
  CHECK(env.upper_w2(1.0) == Approx(4.0));
  CHECK(env.lower_w2(1.0) == Approx(2.0).epsilon(1e-12)); // 4 / (1 + 4 * 0.25)

  const auto env1 = c0_envelope(SymmetryConfig{1}, data, path);
  CHECK(env1.lower_w2(1.0) == Approx(4.0)); // integrand vanishes for d = 1
  CHECK(env1.upper_w2(1.0) == Approx(4.0));

  CHECK_THROWS_AS(c0_envelope(SymmetryConfig{3}, C0Data{-0.1, 4.0, 1.0}, path),
                  HypothesisError);
  CHECK_THROWS_AS(c0_envelope(SymmetryConfig{3}, C0Data{0.5, 4.0, -0.2}, path),
                  HypothesisError);
}

TEST_CASE("finite-horizon t0 bound") {
  CHECK(t0_lower_bound(SymmetryConfig{3}, 0.5, 1.0, 1.0, 10.0) == Approx(10.0));
  CHECK(t0_lower_bound(SymmetryConfig{3}, -1.0, 2.0, 1.0, 10.0) == Approx(1.0).epsilon(1e-12));
  CHECK(t0_lower_bound(SymmetryConfig{2}, -1.0, 2.0, 1.0, 0.5) == Approx(0.5)); // capped
  CHECK_THROWS_AS(t0_lower_bound(SymmetryConfig{3}, -2.0, 1.0, 1.0, 10.0), HypothesisError);
}

TEST_CASE("verify_c0 flags an injected gap violation") {
  auto field = SmoothField::rectangular({0.0, 0.1, 0.2, 0.3}, {1.0, 1.5, 2.0, 2.5});
  for (std::size_t i = 0; i < field.rows(); ++i)
    for (std::size_t j = 0; j < field.cols(); ++j) {
      field.w1(i, j) = 1.0;
      field.w2(i, j) = 3.0;
    }
  field.w2(2, 1) = 0.5; // below w1
  const auto rep = verify_c0(kPg2, SymmetryConfig{3}, field);
  CHECK_FALSE(rep.gap_ok);
  CHECK(rep.worst_gap == Approx(-0.5));
}

TEST_CASE("gradient blow-up aborts loudly") {
  // planar compressive data: characteristics cross, w steepens
  const auto prof = [](double r) {
    const double u = -2.0 * std::tanh(8.0 * (r - 3.0));
    return to_riemann(kPg2, {1.0, u});
  };
  EvolveParams params;
  params.nr = 200;
  params.blowup_gradient_factor = 20.0;
  CHECK_THROWS_AS(
      evolve_smooth(kPg2, SymmetryConfig{1}, prof, 2.0, 4.0, 1.0, params),
      BlowupError);
}

TEST_CASE("expanding flow passes all c0 checks") {
  EvolveParams params;
  params.nr = 150;
  const auto field =
      evolve_smooth(kPg2, SymmetryConfig{3}, expanding_profile(), 2.0, 4.0, 0.5, params);
  const auto rep = verify_c0(kPg2, SymmetryConfig{3}, field);
  CHECK(rep.gap_ok);
  CHECK(rep.monotone_ok);
  CHECK(rep.chain_ok);
  const double maxres = reduced_residual(kPg2, SymmetryConfig{3}, field).max_abs;
  CHECK(rep.envelope_violation <= 10.0 * maxres + rep.envelope_quad_error);
}
