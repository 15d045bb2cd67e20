#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "infsup/channel_geometry.hpp"

namespace infsup {

/// Closed-form bound for one theorem, with every intermediate constant the
/// assembly runs through, so the final majorization is checkable.
struct BoundReport {
  GeometrySummary geometry;
  std::string theorem;  // "c11" | "lipschitz" | "pf"
  double H = 0.0;       // reference-rectangle height used by the proof

  double C1 = std::numeric_limits<double>::quiet_NaN();
  double C2 = std::numeric_limits<double>::quiet_NaN();
  double C3sq = std::numeric_limits<double>::quiet_NaN();
  double C4sq = std::numeric_limits<double>::quiet_NaN();
  double C5sq = std::numeric_limits<double>::quiet_NaN();
  double theta = std::numeric_limits<double>::quiet_NaN();
  std::map<std::string, std::vector<double>> gammas;

  double beta_inv = std::numeric_limits<double>::quiet_NaN();            // closed form
  double beta_inv_assembled = std::numeric_limits<double>::quiet_NaN();  // from intermediates

  double pf_C = std::numeric_limits<double>::quiet_NaN();
  double pf_C_assembled = std::numeric_limits<double>::quiet_NaN();
  double pf_K = std::numeric_limits<double>::quiet_NaN();

  bool recommended = false;
};

/// Allocation inequality sum_j gamma_j |w_j|^2 - |sum_j w_j|^2 >= 0,
/// valid whenever sum_j 1/gamma_j <= 1.
inline double gamma_check(std::span<const double> gammas,
                          std::span<const std::complex<double>> w) {
  if (gammas.size() != w.size() || gammas.empty())
    throw std::domain_error("gamma_check: need matching nonempty gamma and w");
  double inv = 0.0;
  for (double g : gammas) {
    if (g <= 0.0) throw std::domain_error("gamma_check: gammas must be positive");
    inv += 1.0 / g;
  }
  if (inv > 1.0 + 1e-12)
    throw std::domain_error("gamma_check: sum of 1/gamma exceeds 1");
  std::complex<double> total = 0.0;
  double weighted = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    total += w[i];
    weighted += gammas[i] * std::norm(w[i]);
  }
  return weighted - std::norm(total);
}

/// The allocation vectors the transfer constants are built from.
inline const std::vector<std::vector<double>>& stock_gamma_vectors() {
  static const double p2 = std::numbers::pi * std::numbers::pi;
  static const std::vector<std::vector<double>> v = {
      {9.0, 3.0, 2.0},
      {36.0, 9.0 / 8.0, 12.0},
      {3.0 / 8.0 * p2, 3.0 / 8.0 * p2, 8.0, 3.0},
      {9.0 / 2.0, 3.0 / 2.0},
      {2.0, 2.0},
      {9.0 / 8.0, 9.0},
      {4.0, 4.0 / 3.0}};
  return v;
}

/// Inverse inf-sup bound for C^{1,1} profiles:
///   beta^{-1} = (9/4)(1 + M^2) sqrt(h1/h0) max(4, L/h0, h1/h0),
/// with M^2 = max(sup|h_x|^2, sup|h h_xx|/2). The report assembles
/// beta^{-2} = (h1/H) max(3 C1 C3^2, (3/2) C1 C4^2 + C2 C5^2) at H = h0,
/// which the closed form majorizes.
inline BoundReport beta_inv_c11(const GeometrySummary& g) {
  if (g.cls != Smoothness::C11)
    throw std::invalid_argument("beta_inv_c11: geometry is not C^{1,1}");
  BoundReport r;
  r.geometry = g;
  r.theorem = "c11";
  r.H = g.h0;
  const double m2 = g.M2sq;
  const double ratio = g.h1 / g.h0;

  r.C1 = std::max(9.0, 9.0 / 16.0 * (g.L / r.H) * (g.L / r.H));
  r.C2 = 9.0;
  r.C3sq = std::max(3.0, 1.0 + 3.0 * m2);                       // H = h0
  r.C4sq = std::max(8.0 * m2, 2.0 * m2 + 6.0 * m2 * m2);        // H = h0
  r.C5sq = std::max(2.0 * ratio, 1.0 + 2.0 * m2);               // H = h0
  r.gammas = {{"scaled", {9.0, 3.0, 2.0}},
              {"slope_x", {3.0 / 8.0 * std::numbers::pi * std::numbers::pi,
                           3.0 / 8.0 * std::numbers::pi * std::numbers::pi, 8.0, 3.0}},
              {"slope_y", {9.0 / 2.0, 3.0 / 2.0}},
              {"plain", {2.0, 2.0}}};

  const double assembled_sq =
      ratio * std::max(3.0 * r.C1 * r.C3sq, 1.5 * r.C1 * r.C4sq + r.C2 * r.C5sq);
  r.beta_inv_assembled = std::sqrt(assembled_sq);
  r.beta_inv = 2.25 * (1.0 + m2) * std::sqrt(ratio) * std::max({4.0, g.L / g.h0, ratio});
  return r;
}

/// Inverse inf-sup bound for Lipschitz profiles:
///   beta^{-1} = 2 max(4, L/sqrt(h0 h1), 8 L M / h0) max(1, 8M) h1/h0,
/// via H = min(h0, h0/(8M)) and theta = 4 (H/h0) M <= 1/2. The report
/// assembles beta^{-2} = (h1/H) max(4 C1 C3^2, (4 theta^2 C1 + C2) C5^2).
inline BoundReport beta_inv_lipschitz(const GeometrySummary& g) {
  BoundReport r;
  r.geometry = g;
  r.theorem = "lipschitz";
  const double m = g.M;
  r.H = (m > 0.0) ? std::min(g.h0, g.h0 / (8.0 * m)) : g.h0;
  r.theta = 4.0 * (r.H / g.h0) * m;

  r.C1 = std::max(9.0, 9.0 / 16.0 * (g.L / r.H) * (g.L / r.H));
  r.C2 = 9.0;
  const double hr = r.H / g.h0;
  r.C3sq = std::max(9.0 / 8.0 * hr, (1.0 + 16.0 * m * m) * hr * hr * hr);
  r.C5sq = std::max(9.0 / 8.0 * g.h1 / r.H, (1.0 + 9.0 * m * m) * hr);
  r.gammas = {{"scaled", {36.0, 9.0 / 8.0, 12.0}}, {"plain", {9.0 / 8.0, 9.0}}};

  const double assembled_sq =
      (g.h1 / r.H) *
      std::max(4.0 * r.C1 * r.C3sq, (4.0 * r.theta * r.theta * r.C1 + r.C2) * r.C5sq);
  r.beta_inv_assembled = std::sqrt(assembled_sq);
  r.beta_inv = 2.0 *
               std::max({4.0, g.L / std::sqrt(g.h0 * g.h1), 8.0 * g.L * m / g.h0}) *
               std::max(1.0, 8.0 * m) * (g.h1 / g.h0);
  return r;
}

/// Mean-zero Poincare-Friedrichs constant:
///   C = ((1 + M) / 2 pi) max(1, 2 sqrt(h0 h1) / L) sqrt(h1/h0),
/// with H = sqrt(h0 h1) and the gamma pair optimized exactly:
/// gamma1 = 1 + gamma2 M^2 = (sqrt(M^2 + 4) + M)^2 / 4. K = sqrt(1 + C^2).
inline BoundReport pf_constant(const GeometrySummary& g) {
  BoundReport r;
  r.geometry = g;
  r.theorem = "pf";
  r.H = std::sqrt(g.h0 * g.h1);
  const double m = g.M;
  const double g1 = 0.25 * std::pow(std::sqrt(m * m + 4.0) + m, 2.0);
  r.gammas["pf"] = {g1};
  if (m > 0.0) r.gammas["pf"].push_back(g1 / (g1 - 1.0));

  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double ctilde_sq = std::max(1.0, 4.0 * g.h0 * g.h1 / (g.L * g.L)) / (4.0 * pi2);
  const double ratio = std::sqrt(g.h1 / g.h0);
  const double term = (m > 0.0)
                          ? std::max(g1 * ratio, ratio * (1.0 + (g1 / (g1 - 1.0)) * m * m))
                          : ratio;
  r.pf_C_assembled = std::sqrt(ctilde_sq * (g.h1 / r.H) * term);
  r.pf_C = (1.0 + m) / (2.0 * std::numbers::pi) *
           std::max(1.0, 2.0 * std::sqrt(g.h0 * g.h1) / g.L) * ratio;
  r.pf_K = std::sqrt(1.0 + r.pf_C * r.pf_C);
  return r;
}

/// Every bound the smoothness class admits; when both inf-sup theorems apply
/// the smaller closed-form beta^{-1} is marked recommended.
inline std::vector<BoundReport> all_bounds(const GeometrySummary& g) {
  std::vector<BoundReport> out;
  if (g.cls == Smoothness::C11) out.push_back(beta_inv_c11(g));
  out.push_back(beta_inv_lipschitz(g));
  out.push_back(pf_constant(g));
  std::size_t best = out.size();
  double best_val = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < out.size(); ++i)
    if (out[i].theorem != "pf" && out[i].beta_inv < best_val) {
      best = i;
      best_val = out[i].beta_inv;
    }
  if (best < out.size()) out[best].recommended = true;
  return out;
}

}  // namespace infsup
