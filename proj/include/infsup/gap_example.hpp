#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "infsup/bound_engine.hpp"
#include "infsup/channel_geometry.hpp"
#include "infsup/quadrature.hpp"

namespace infsup {

/// The gap geometry together with the piecewise-linear pressure that
/// witnesses the h0^{-3/2} blow-up: p = -1 for x in [0, 3/8], +1 for
/// x in [1/2, 7/8], slopes +-16 across the two h0-plateaus, p_y = 0.
/// Period fixed to 1.
struct GapPressure {
  double h0;
  double transition_width;
  ChannelGeometry geom;

  explicit GapPressure(double h0_, double width = 0.125)
      : h0(h0_), transition_width(width), geom(ChannelGeometry::gap(h0_, width)) {}

  double value(double x) const {
    double r = std::fmod(x, 1.0);
    if (r < 0.0) r += 1.0;
    if (r <= 3.0 / 8) return -1.0;
    if (r <= 0.5) return -1.0 + 16.0 * (r - 3.0 / 8);
    if (r <= 7.0 / 8) return 1.0;
    return 1.0 - 16.0 * (r - 7.0 / 8);
  }

  double slope(double x) const {
    double r = std::fmod(x, 1.0);
    if (r < 0.0) r += 1.0;
    if (r > 3.0 / 8 && r < 0.5) return 16.0;
    if (r > 7.0 / 8) return -16.0;
    return 0.0;
  }
};

namespace detail {

/// 1-D quadrature of f(x) h(x) over one period, split at every breakpoint of
/// p and of the geometry; the integrands are polynomial x smooth per panel.
template <typename F>
double gap_weighted_integral(const GapPressure& gp, F&& f, int nodes_per_panel = 48) {
  std::vector<double> cuts = {0.0, 3.0 / 8, 0.5, 7.0 / 8, 1.0};
  for (int pc = 0; pc < gp.geom.piece_count(); ++pc) cuts.push_back(gp.geom.piece(pc).x0);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-14; }),
             cuts.end());
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] - cuts[i] < 1e-14) continue;
    const auto rule = gauss_on(cuts[i], cuts[i + 1], nodes_per_panel);
    for (std::size_t k = 0; k < rule.nodes.size(); ++k)
      acc += rule.weights[k] * f(rule.nodes[k]) * gp.geom.h(rule.nodes[k]);
  }
  return acc;
}

}  // namespace detail

/// || p ||_0 over the channel (exact y-integration, 1-D quadrature in x).
inline double pressure_l2(const GapPressure& gp) {
  return std::sqrt(detail::gap_weighted_integral(
      gp, [&](double x) { return gp.value(x) * gp.value(x); }));
}

/// Mean of p over the channel; zero by the half-period antisymmetry.
inline double pressure_mean(const GapPressure& gp) {
  return detail::gap_weighted_integral(gp, [&](double x) { return gp.value(x); });
}

/// || p_x ||_0^2: the slope is +-16 exactly on the two h0-plateaus,
/// so the closed form is 256 * (h0 / 4) = 64 h0.
inline double pressure_px_l2_sq(const GapPressure& gp) {
  return detail::gap_weighted_integral(
      gp, [&](double x) { return gp.slope(x) * gp.slope(x); });
}

/// Analytic dual-gradient bound || grad p ||_{-1} <= sqrt(8) h0^{3/2}:
/// Cauchy-Schwarz over the slope region of area h0/4, then the Poincare
/// bound with the region height h0.
inline double grad_dual_upper(double h0) {
  if (!(h0 > 0.0 && h0 < 1.0)) throw std::domain_error("grad_dual_upper: need 0 < h0 < 1");
  return std::sqrt(8.0) * std::pow(h0, 1.5);
}

/// Certified lower bound on beta^{-1}: || p ||_0 / || grad p ||_{-1} upper.
inline double beta_inv_lower(const GapPressure& gp) {
  return pressure_l2(gp) / grad_dual_upper(gp.h0);
}

/// Mean-zero Poincare optimality check: L^{-2} ||p||^2 >= (h1 / 256 h0) ||p_x||^2,
/// which forces the PF constant to be at least sqrt(h1/h0) / 16.
inline double pf_optimality_residual(const GapPressure& gp) {
  const double p2 = pressure_l2(gp);
  const double px2 = pressure_px_l2_sq(gp);
  const double h1 = gp.geom.summary().h1;
  return p2 * p2 - h1 / (256.0 * gp.h0) * px2;
}

struct ScalingRow {
  double h0 = 0.0;
  double lower = 0.0;  // beta_inv_lower
  double upper = 0.0;  // closed-form beta_inv from the C11 bound
  double ratio = 0.0;  // lower / upper
};

struct ScalingStudy {
  std::vector<ScalingRow> rows;
  double exponent = 0.0;  // least-squares slope of log(lower) vs log(h0)
};

/// h0 sweep: tabulates the exhibited lower bound against the certified upper
/// bound and fits the log-log slope of the lower bound (expected near -3/2).
/// Needs at least 4 heights spanning close to a decade.
inline ScalingStudy scaling_study(std::vector<double> h0_list) {
  if (h0_list.size() < 4)
    throw std::domain_error("scaling_study: need at least 4 gap heights");
  const auto [mn, mx] = std::minmax_element(h0_list.begin(), h0_list.end());
  if (!(*mn > 0.0 && *mx < 1.0))
    throw std::domain_error("scaling_study: gap heights must lie in (0, 1)");
  if (std::log10(*mx / *mn) < 0.9)
    throw std::domain_error("scaling_study: heights must span close to a decade");
  std::sort(h0_list.begin(), h0_list.end(), std::greater<>());

  ScalingStudy out;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (double h0 : h0_list) {
    GapPressure gp(h0);
    ScalingRow row;
    row.h0 = h0;
    row.lower = beta_inv_lower(gp);
    row.upper = beta_inv_c11(gp.geom.summary()).beta_inv;
    row.ratio = row.lower / row.upper;
    out.rows.push_back(row);
    const double lx = std::log(h0), ly = std::log(row.lower);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = static_cast<double>(out.rows.size());
  out.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return out;
}

}  // namespace infsup
