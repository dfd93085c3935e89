#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "shockfront/errors.hpp"

#include <json.hpp>

namespace shockfront {

// ---------------------------------------------------------------------------
// Gas laws on a frozen isentrope (isentropic flow, entropy normalised so that
// the sound speed takes the closed forms below).
//
//   perfect gas     p = (g0-1) rho^g0                 c = sqrt(g0(g0-1)) rho^((g0-1)/2)
//   Van der Waals   p = (g0-1) m^g0,  m = rho/(1-b rho)
//                                                     c = (1+bm) sqrt(g0(g0-1)) m^((g0-1)/2)
//   p-system        p = rho^g                         c = sqrt(g) rho^((g-1)/2)
//
// H(rho) is the primitive of c(rho)/rho vanishing at rho=0; for every law above
// it is a pure power of m (or rho), so H and its inverse are exact.
// ---------------------------------------------------------------------------

struct PerfectGas {
  double gamma0; // adiabatic exponent, > 1
};

struct VanDerWaals {
  double gamma0; // adiabatic exponent, > 1
  double b;      // covolume, >= 0; maximal density 1/b
};

struct PSystem {
  double gamma; // > 1
};

/// Adimensional thermodynamic coefficients of a complete state law.
struct ThermoCoefficients {
  double gamma;                  // adiabatic exponent
  double grueneisen;             // Grueneisen coefficient Gamma
  double delta;                  // pv/T^2 dT/ds|_v
  double fundamental_derivative; // curly-G
};

class GasModel {
public:
  using Law = std::variant<PerfectGas, VanDerWaals, PSystem>;

  explicit GasModel(PerfectGas pg) : law_(pg) { validate_params(); }
  explicit GasModel(VanDerWaals vdw) : law_(vdw) { validate_params(); }
  explicit GasModel(PSystem ps) : law_(ps) { validate_params(); }

  static GasModel perfect(double gamma0) { return GasModel(PerfectGas{gamma0}); }
  static GasModel van_der_waals(double gamma0, double b) {
    return GasModel(VanDerWaals{gamma0, b});
  }
  static GasModel p_system(double gamma) { return GasModel(PSystem{gamma}); }

  const Law& law() const { return law_; }
  bool is_perfect() const { return std::holds_alternative<PerfectGas>(law_); }
  bool is_vdw() const { return std::holds_alternative<VanDerWaals>(law_); }
  bool is_p_system() const { return std::holds_alternative<PSystem>(law_); }

  /// Maximal density: 1/b for Van der Waals, +inf otherwise.
  double rho_max() const {
    if (const auto* v = std::get_if<VanDerWaals>(&law_); v && v->b > 0.0)
      return 1.0 / v->b;
    return std::numeric_limits<double>::infinity();
  }

  /// Largest density accepted by state queries (guards the VdW compressibility limit).
  double rho_admissible_max() const {
    if (const auto* v = std::get_if<VanDerWaals>(&law_); v && v->b > 0.0)
      return (1.0 - kCovolumeGuard) / v->b;
    return std::numeric_limits<double>::infinity();
  }

  double pressure(double rho) const {
    check_rho(rho);
    return std::visit(
        [&](const auto& law) -> double {
          using T = std::decay_t<decltype(law)>;
          if constexpr (std::is_same_v<T, PerfectGas>)
            return (law.gamma0 - 1.0) * std::pow(rho, law.gamma0);
          else if constexpr (std::is_same_v<T, VanDerWaals>)
            return (law.gamma0 - 1.0) * std::pow(reduced(rho, law), law.gamma0);
          else
            return std::pow(rho, law.gamma);
        },
        law_);
  }

  /// Adiabatic sound speed c = sqrt(dp/drho).
  double sound_speed(double rho) const {
    check_rho(rho);
    return std::visit(
        [&](const auto& law) -> double {
          using T = std::decay_t<decltype(law)>;
          if constexpr (std::is_same_v<T, PerfectGas>)
            return std::sqrt(law.gamma0 * (law.gamma0 - 1.0)) *
                   std::pow(rho, 0.5 * (law.gamma0 - 1.0));
          else if constexpr (std::is_same_v<T, VanDerWaals>) {
            const double m = reduced(rho, law);
            return (1.0 + law.b * m) * std::sqrt(law.gamma0 * (law.gamma0 - 1.0)) *
                   std::pow(m, 0.5 * (law.gamma0 - 1.0));
          } else
            return std::sqrt(law.gamma) * std::pow(rho, 0.5 * (law.gamma - 1.0));
        },
        law_);
  }

  /// H(rho): primitive of c/rho vanishing at 0. Strictly increasing, H(0+)=0.
  double enthalpy(double rho) const {
    if (!(rho > 0.0)) throw DomainError("enthalpy: rho must be > 0");
    if (rho >= rho_admissible_max()) throw DomainError("enthalpy: rho at/above covolume limit");
    return std::visit(
        [&](const auto& law) -> double {
          using T = std::decay_t<decltype(law)>;
          if constexpr (std::is_same_v<T, PerfectGas>)
            return 2.0 * std::sqrt(law.gamma0 / (law.gamma0 - 1.0)) *
                   std::pow(rho, 0.5 * (law.gamma0 - 1.0));
          else if constexpr (std::is_same_v<T, VanDerWaals>)
            return 2.0 * std::sqrt(law.gamma0 / (law.gamma0 - 1.0)) *
                   std::pow(reduced(rho, law), 0.5 * (law.gamma0 - 1.0));
          else
            return 2.0 * std::sqrt(law.gamma) / (law.gamma - 1.0) *
                   std::pow(rho, 0.5 * (law.gamma - 1.0));
        },
        law_);
  }

  /// Exact inverse of H. Throws DomainError for h <= 0.
  double enthalpy_inverse(double h) const {
    if (!(h > 0.0)) throw DomainError("enthalpy_inverse: h must be > 0");
    return std::visit(
        [&](const auto& law) -> double {
          using T = std::decay_t<decltype(law)>;
          if constexpr (std::is_same_v<T, PerfectGas>) {
            const double kappa = 2.0 * std::sqrt(law.gamma0 / (law.gamma0 - 1.0));
            return std::pow(h / kappa, 2.0 / (law.gamma0 - 1.0));
          } else if constexpr (std::is_same_v<T, VanDerWaals>) {
            const double kappa = 2.0 * std::sqrt(law.gamma0 / (law.gamma0 - 1.0));
            const double m = std::pow(h / kappa, 2.0 / (law.gamma0 - 1.0));
            const double rho = m / (1.0 + law.b * m);
            if (rho >= rho_admissible_max())
              throw DomainError("enthalpy_inverse: h maps at/above covolume limit");
            return rho;
          } else {
            const double kappa = 2.0 * std::sqrt(law.gamma) / (law.gamma - 1.0);
            return std::pow(h / kappa, 2.0 / (law.gamma - 1.0));
          }
        },
        law_);
  }

  /// H'(rho) = c(rho)/rho.
  double enthalpy_slope(double rho) const { return sound_speed(rho) / rho; }

  /// Fundamental derivative curly-G = (1/c) d(rho c)/drho at fixed entropy.
  double fundamental_derivative(double rho) const {
    check_rho(rho);
    return std::visit(
        [&](const auto& law) -> double {
          using T = std::decay_t<decltype(law)>;
          if constexpr (std::is_same_v<T, PerfectGas>)
            return 0.5 * (law.gamma0 + 1.0);
          else if constexpr (std::is_same_v<T, VanDerWaals>)
            return 0.5 * (law.gamma0 + 1.0) / (1.0 - law.b * rho);
          else
            return 0.5 * (law.gamma + 1.0);
        },
        law_);
  }

  /// Full coefficient set (gamma, Gamma, delta, curly-G). The p-system has no
  /// complete state law behind it, so only gamma and curly-G exist for it.
  ThermoCoefficients thermo_coefficients(double rho) const {
    check_rho(rho);
    return std::visit(
        [&](const auto& law) -> ThermoCoefficients {
          using T = std::decay_t<decltype(law)>;
          if constexpr (std::is_same_v<T, PerfectGas>) {
            return ThermoCoefficients{law.gamma0, law.gamma0 - 1.0, law.gamma0 - 1.0,
                                      0.5 * (law.gamma0 + 1.0)};
          } else if constexpr (std::is_same_v<T, VanDerWaals>) {
            const double s = 1.0 / (1.0 - law.b * rho); // v/(v-b)
            return ThermoCoefficients{law.gamma0 * s, (law.gamma0 - 1.0) * s,
                                      (law.gamma0 - 1.0) * s, 0.5 * (law.gamma0 + 1.0) * s};
          } else {
            throw NotApplicableError(
                "thermo_coefficients: p-system has no complete state law");
          }
        },
        law_);
  }

  std::string describe() const {
    return std::visit(
        [&](const auto& law) -> std::string {
          using T = std::decay_t<decltype(law)>;
          if constexpr (std::is_same_v<T, PerfectGas>)
            return "perfect{gamma0=" + std::to_string(law.gamma0) + "}";
          else if constexpr (std::is_same_v<T, VanDerWaals>)
            return "vdw{gamma0=" + std::to_string(law.gamma0) +
                   ",b=" + std::to_string(law.b) + "}";
          else
            return "psystem{gamma=" + std::to_string(law.gamma) + "}";
        },
        law_);
  }

  nlohmann::json to_json() const {
    return std::visit(
        [&](const auto& law) -> nlohmann::json {
          using T = std::decay_t<decltype(law)>;
          if constexpr (std::is_same_v<T, PerfectGas>)
            return {{"type", "perfect"}, {"gamma0", law.gamma0}};
          else if constexpr (std::is_same_v<T, VanDerWaals>)
            return {{"type", "vdw"}, {"gamma0", law.gamma0}, {"b", law.b}};
          else
            return {{"type", "psystem"}, {"gamma", law.gamma}};
        },
        law_);
  }

  /// Parses {"type":"perfect"|"vdw"|"psystem", ...}. Unknown fields are rejected.
  static GasModel from_json(const nlohmann::json& j);

private:
  static constexpr double kCovolumeGuard = 1e-9;

  Law law_;

  static double reduced(double rho, const VanDerWaals& law) {
    return rho / (1.0 - law.b * rho);
  }

  void validate_params() const {
    std::visit(
        [&](const auto& law) {
          using T = std::decay_t<decltype(law)>;
          if constexpr (std::is_same_v<T, PerfectGas>) {
            if (!(law.gamma0 > 1.0)) throw DomainError("perfect gas requires gamma0 > 1");
          } else if constexpr (std::is_same_v<T, VanDerWaals>) {
            if (!(law.gamma0 > 1.0)) throw DomainError("VdW gas requires gamma0 > 1");
            if (!(law.b >= 0.0)) throw DomainError("VdW gas requires b >= 0");
          } else {
            if (!(law.gamma > 1.0)) throw DomainError("p-system requires gamma > 1");
          }
        },
        law_);
  }

  void check_rho(double rho) const {
    if (!(rho > 0.0)) throw DomainError("state query: rho must be > 0");
    if (rho >= rho_admissible_max())
      throw DomainError("state query: rho at/above covolume limit");
  }
};

inline GasModel GasModel::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("model: expected a JSON object");
  const std::string type = j.value("type", std::string{});
  auto require_keys = [&](std::initializer_list<const char*> allowed) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      bool ok = false;
      for (const char* k : allowed)
        if (it.key() == k) ok = true;
      if (!ok) throw ConfigError("model: unknown field '" + it.key() + "'");
    }
  };
  auto get_num = [&](const char* key) -> double {
    if (!j.contains(key)) throw ConfigError(std::string("model: missing field '") + key + "'");
    if (!j.at(key).is_number()) throw ConfigError(std::string("model: field '") + key + "' must be a number");
    return j.at(key).get<double>();
  };
  if (type == "perfect") {
    require_keys({"type", "gamma0"});
    return GasModel::perfect(get_num("gamma0"));
  }
  if (type == "vdw") {
    require_keys({"type", "gamma0", "b"});
    return GasModel::van_der_waals(get_num("gamma0"), get_num("b"));
  }
  if (type == "psystem") {
    require_keys({"type", "gamma"});
    return GasModel::p_system(get_num("gamma"));
  }
  throw ConfigError("model: type must be one of perfect|vdw|psystem");
}

// ---------------------------------------------------------------------------
// Bethe-Weyl admissibility validation
// ---------------------------------------------------------------------------

struct ConditionCheck {
  std::string name;
  bool passed = false;
  double worst_margin = 0.0; // signed; > 0 means satisfied with room
  double worst_rho = 0.0;
};

struct ValidationReport {
  std::vector<ConditionCheck> conditions;
  bool integrable_at_zero = false;  // c/rho integrable at 0 (analytic per law)
  bool pressure_diverges = false;   // p -> inf as rho -> rho_max
  bool all_passed() const {
    if (!integrable_at_zero || !pressure_diverges) return false;
    for (const auto& c : conditions)
      if (!c.passed) return false;
    return true;
  }
};

/// Samples the Bethe-Weyl conditions plus the standing assumption 1 < G < 2 on a
/// log-uniform grid over [rho_lo, rho_hi]. Integrability of c/rho at 0 and the
/// pressure divergence at rho_max are decided analytically per law.
inline ValidationReport validate_bethe_weyl(const GasModel& model, double rho_lo,
                                            double rho_hi, int samples = 512) {
  if (!(rho_lo > 0.0) || !(rho_hi > rho_lo))
    throw DomainError("validate_bethe_weyl: need 0 < rho_lo < rho_hi");
  if (rho_hi >= model.rho_admissible_max())
    throw DomainError("validate_bethe_weyl: range exceeds maximal density");
  if (samples < 2) throw DomainError("validate_bethe_weyl: need >= 2 samples");

  ValidationReport rep;
  const bool full_law = !model.is_p_system();
  ConditionCheck gamma_pos{"gamma > 0", true, std::numeric_limits<double>::infinity(), 0.0};
  ConditionCheck grueneisen_pos{"Gamma > 0", true, std::numeric_limits<double>::infinity(), 0.0};
  ConditionCheck convexity{"gamma*delta >= Gamma^2", true,
                           std::numeric_limits<double>::infinity(), 0.0};
  ConditionCheck g_pos{"G > 0", true, std::numeric_limits<double>::infinity(), 0.0};
  ConditionCheck g_low{"G > 1", true, std::numeric_limits<double>::infinity(), 0.0};
  ConditionCheck g_high{"G < 2", true, std::numeric_limits<double>::infinity(), 0.0};

  const double llo = std::log(rho_lo), lhi = std::log(rho_hi);
  for (int i = 0; i < samples; ++i) {
    const double rho = std::exp(llo + (lhi - llo) * i / (samples - 1));
    const double G = model.fundamental_derivative(rho);
    auto update = [&](ConditionCheck& c, double margin) {
      if (margin < c.worst_margin) {
        c.worst_margin = margin;
        c.worst_rho = rho;
      }
      if (!(margin > 0.0)) c.passed = false;
    };
    update(g_pos, G);
    update(g_low, G - 1.0);
    update(g_high, 2.0 - G);
    if (full_law) {
      const ThermoCoefficients tc = model.thermo_coefficients(rho);
      update(gamma_pos, tc.gamma);
      update(grueneisen_pos, tc.grueneisen);
      update(convexity, tc.gamma * tc.delta - tc.grueneisen * tc.grueneisen +
                            0.0); // >= 0 allowed; margin 0 counts as pass below
    }
  }
  // gamma*delta >= Gamma^2 is a non-strict inequality; equality (ideal gas has
  // gamma*delta - Gamma^2 = gamma-1 > 0 anyway) should not fail the check.
  if (full_law && !convexity.passed && convexity.worst_margin >= -1e-14) {
    convexity.passed = true;
  }

  rep.conditions.push_back(gamma_pos);
  rep.conditions.push_back(grueneisen_pos);
  rep.conditions.push_back(convexity);
  rep.conditions.push_back(g_pos);
  rep.conditions.push_back(g_low);
  rep.conditions.push_back(g_high);
  if (!full_law) {
    // Only gamma and G are defined for the p-system; mark the structural ones pass.
    rep.conditions[0].passed = rep.conditions[1].passed = rep.conditions[2].passed = true;
  }

  // c/rho ~ rho^{(g-3)/2} near 0; integrable iff (g-3)/2 > -1, i.e. g > 1.
  rep.integrable_at_zero = true;
  // Perfect gas / p-system: p ~ rho^g -> inf as rho -> inf; VdW: p -> inf at 1/b.
  rep.pressure_diverges = true;
  return rep;
}

} // namespace shockfront
