#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "shockfront/errors.hpp"

#include <json.hpp>

namespace shockfront {

enum class DomainTag { free, d_minus, d_zero, d_plus };

inline const char* to_string(DomainTag tag) {
  switch (tag) {
    case DomainTag::d_minus: return "D_minus";
    case DomainTag::d_zero: return "D_0";
    case DomainTag::d_plus: return "D_plus";
    default: return "free";
  }
}

// ---------------------------------------------------------------------------
// Discrete w(t,r) sample field.
//
// Two layouts share one container:
//   * rectangular: common r-axis for every time level (rows() x cols());
//   * level mesh:  per-level r coordinates (used for the angular domain D_0,
//     whose width grows from zero).
// Values are stored row-major by t then r.
// ---------------------------------------------------------------------------
class SmoothField {
public:
  SmoothField() = default;

  static SmoothField rectangular(std::vector<double> t, std::vector<double> r) {
    SmoothField f;
    f.t_ = std::move(t);
    f.r_axis_ = std::move(r);
    f.rectangular_ = true;
    f.w1_.assign(f.t_.size() * f.r_axis_.size(), 0.0);
    f.w2_.assign(f.t_.size() * f.r_axis_.size(), 0.0);
    f.check_axes();
    return f;
  }

  static SmoothField level_mesh(std::vector<double> t) {
    SmoothField f;
    f.t_ = std::move(t);
    f.rectangular_ = false;
    f.level_r_.resize(f.t_.size());
    f.level_w1_.resize(f.t_.size());
    f.level_w2_.resize(f.t_.size());
    return f;
  }

  bool is_rectangular() const { return rectangular_; }
  std::size_t rows() const { return t_.size(); }
  std::size_t cols() const { return rectangular_ ? r_axis_.size() : 0; }
  const std::vector<double>& times() const { return t_; }
  const std::vector<double>& r_axis() const { return r_axis_; }

  DomainTag tag = DomainTag::free;

  double& w1(std::size_t i, std::size_t j) { return w1_[i * r_axis_.size() + j]; }
  double& w2(std::size_t i, std::size_t j) { return w2_[i * r_axis_.size() + j]; }
  double w1(std::size_t i, std::size_t j) const { return w1_[i * r_axis_.size() + j]; }
  double w2(std::size_t i, std::size_t j) const { return w2_[i * r_axis_.size() + j]; }

  void set_level(std::size_t i, std::vector<double> r, std::vector<double> w1,
                 std::vector<double> w2) {
    level_r_[i] = std::move(r);
    level_w1_[i] = std::move(w1);
    level_w2_[i] = std::move(w2);
  }
  const std::vector<double>& level_r(std::size_t i) const {
    return rectangular_ ? r_axis_ : level_r_[i];
  }
  const std::vector<double>& level_w1(std::size_t i) const { return level_w1_[i]; }
  const std::vector<double>& level_w2(std::size_t i) const { return level_w2_[i]; }

  double t_min() const { return t_.front(); }
  double t_max() const { return t_.back(); }

  /// r-range of the level bracketing time t (conservative intersection).
  std::pair<double, double> r_range_at(double t) const {
    if (rectangular_) return {r_axis_.front(), r_axis_.back()};
    const auto [i0, i1, a] = locate_time(t);
    (void)a;
    const auto& ra = level_r_[i0];
    const auto& rb = level_r_[i1];
    return {std::max(ra.front(), rb.front()), std::min(ra.back(), rb.back())};
  }

  bool contains(double t, double r, double slack = 0.0) const {
    if (t < t_min() - slack || t > t_max() + slack) return false;
    const auto [lo, hi] = r_range_at(std::clamp(t, t_min(), t_max()));
    return r >= lo - slack && r <= hi + slack;
  }

  /// Bilinear interpolation of (w1, w2) at (t, r); clamps to the boundary.
  std::pair<double, double> interpolate(double t, double r) const {
    const auto [i0, i1, a] = locate_time(t);
    const auto [v10, v20] = interp_level(i0, r);
    if (i1 == i0) return {v10, v20};
    const auto [v11, v21] = interp_level(i1, r);
    return {(1.0 - a) * v10 + a * v11, (1.0 - a) * v20 + a * v21};
  }

  struct Extrema {
    double w1_min, w1_max, w2_min, w2_max;
  };
  Extrema extrema() const {
    Extrema e{1e300, -1e300, 1e300, -1e300};
    auto scan = [&](const std::vector<double>& a, const std::vector<double>& b) {
      for (double v : a) { e.w1_min = std::min(e.w1_min, v); e.w1_max = std::max(e.w1_max, v); }
      for (double v : b) { e.w2_min = std::min(e.w2_min, v); e.w2_max = std::max(e.w2_max, v); }
    };
    if (rectangular_) scan(w1_, w2_);
    else
      for (std::size_t i = 0; i < rows(); ++i) scan(level_w1_[i], level_w2_[i]);
    return e;
  }

  /// CSV rows `t,r,w1,w2`, row-major by t then r. `header_comment` lines, when
  /// given, are emitted verbatim before the column header.
  void write_csv(std::ostream& os, const std::string& header_comment = {}) const {
    if (!header_comment.empty()) os << header_comment << "\n";
    os << "t,r,w1,w2\n";
    char buf[140];
    for (std::size_t i = 0; i < rows(); ++i) {
      const auto& r = level_r(i);
      for (std::size_t j = 0; j < r.size(); ++j) {
        const double a = rectangular_ ? w1(i, j) : level_w1_[i][j];
        const double b = rectangular_ ? w2(i, j) : level_w2_[i][j];
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", t_[i], r[j], a, b);
        os << buf;
      }
    }
  }

  nlohmann::json sidecar(int d, const nlohmann::json& model_json) const {
    nlohmann::json grid;
    grid["kind"] = rectangular_ ? "rect" : "levels";
    grid["nt"] = rows();
    grid["t0"] = t_min();
    grid["t1"] = t_max();
    if (rectangular_) {
      grid["nr"] = cols();
      grid["r0"] = r_axis_.front();
      grid["r1"] = r_axis_.back();
    }
    return {{"d", d}, {"model", model_json}, {"grid", grid}, {"domain", to_string(tag)}};
  }

private:
  bool rectangular_ = true;
  std::vector<double> t_;
  std::vector<double> r_axis_;
  std::vector<double> w1_, w2_; // rectangular storage
  std::vector<std::vector<double>> level_r_, level_w1_, level_w2_;

  void check_axes() const {
    for (std::size_t i = 1; i < t_.size(); ++i)
      if (!(t_[i] > t_[i - 1])) throw GridError("field: t axis must strictly increase");
    for (std::size_t j = 1; j < r_axis_.size(); ++j)
      if (!(r_axis_[j] > r_axis_[j - 1])) throw GridError("field: r axis must strictly increase");
  }

  std::tuple<std::size_t, std::size_t, double> locate_time(double t) const {
    if (t_.empty()) throw GridError("field: empty");
    if (t <= t_.front()) return {0, 0, 0.0};
    if (t >= t_.back()) return {t_.size() - 1, t_.size() - 1, 0.0};
    const auto it = std::upper_bound(t_.begin(), t_.end(), t);
    const std::size_t i1 = static_cast<std::size_t>(it - t_.begin());
    const std::size_t i0 = i1 - 1;
    const double a = (t - t_[i0]) / (t_[i1] - t_[i0]);
    return {i0, i1, a};
  }

  std::pair<double, double> interp_level(std::size_t i, double r) const {
    const std::vector<double>& ra = level_r(i);
    const std::vector<double>& a = rectangular_ ? w1_ : level_w1_[i];
    const std::vector<double>& b = rectangular_ ? w2_ : level_w2_[i];
    const std::size_t base = rectangular_ ? i * r_axis_.size() : 0;
    if (ra.size() == 1) return {a[base], b[base]};
    if (r <= ra.front()) return {a[base], b[base]};
    if (r >= ra.back()) return {a[base + ra.size() - 1], b[base + ra.size() - 1]};
    const auto it = std::upper_bound(ra.begin(), ra.end(), r);
    const std::size_t j1 = static_cast<std::size_t>(it - ra.begin());
    const std::size_t j0 = j1 - 1;
    const double s = (r - ra[j0]) / (ra[j1] - ra[j0]);
    return {(1.0 - s) * a[base + j0] + s * a[base + j1],
            (1.0 - s) * b[base + j0] + s * b[base + j1]};
  }
};

} // namespace shockfront
