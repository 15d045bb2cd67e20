#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "infsup/quadrature.hpp"
#include "infsup/rectangle_norms.hpp"

namespace infsup {

enum class Smoothness { C11, C01 };
enum class GammaVariant { Smooth, Lipschitz };

struct GeometrySummary {
  double L = 1.0;
  double h0 = 1.0;   // min h
  double h1 = 1.0;   // max h
  double M = 0.0;    // sup |h_x|
  double M2sq = 0.0; // max(M^2, sup |h h_xx| / 2); only meaningful for C11
  Smoothness cls = Smoothness::C11;
};

/// Periodic channel profile h(x) on [0, L], stored as analytic pieces so
/// evaluation at panel boundaries is one-sided and unambiguous.
class ChannelGeometry {
 public:
  enum class Family { Constant, Cosine, Gap, Sawtooth, Sampled };

  struct Piece {
    enum class Kind { Constant, Linear, Quintic, Cosine };
    Kind kind;
    double x0, x1;
    double v0, v1;  // endpoint values (Constant: v0; Cosine: v0 = c0, v1 = c1)
  };

  static ChannelGeometry constant(double c, double L = 1.0) {
    require(c > 0.0 && L > 0.0, "constant: need c > 0 and L > 0");
    ChannelGeometry g;
    g.family_ = Family::Constant;
    g.pieces_ = {{Piece::Kind::Constant, 0.0, L, c, c}};
    g.smooth_periodic_ = true;
    g.sum_ = {L, c, c, 0.0, 0.0, Smoothness::C11};
    return g;
  }

  static ChannelGeometry cosine(double c0, double c1, double L = 1.0) {
    require(L > 0.0 && c0 > std::abs(c1), "cosine: need |c1| < c0");
    ChannelGeometry g;
    g.family_ = Family::Cosine;
    g.pieces_ = {{Piece::Kind::Cosine, 0.0, L, c0, c1}};
    g.smooth_periodic_ = true;
    const double w = 2.0 * std::numbers::pi / L;
    const double h1 = c0 + std::abs(c1);
    const double m = std::abs(c1) * w;
    // |h h_xx| / 2 maximizes at the endpoint u = cos = +-1, giving |c1| h1 w^2 / 2
    const double hhxx = 0.5 * std::abs(c1) * h1 * w * w;
    g.sum_ = {L, c0 - std::abs(c1), h1, m, std::max(m * m, hhxx), Smoothness::C11};
    return g;
  }

  /// Gap profile: h0 on [3/8, 1/2] and [7/8, 1] (times L), 1 on [1/8, 1/4]
  /// and [5/8, 3/4], with C^2 quintic-smoothstep transitions of the given
  /// width centered in the four remaining eighths.
  static ChannelGeometry gap(double h0, double width = 0.125, double L = 1.0) {
    require(h0 > 0.0 && h0 < 1.0, "gap: need 0 < h0 < 1");
    require(width > 0.0 && width <= 0.125 + 1e-15, "gap: transition width must be in (0, 1/8]");
    ChannelGeometry g;
    g.family_ = Family::Gap;
    const double w = std::min(width, 0.125) * L;
    // plateau value before each transition eighth, in units of L
    const std::array<double, 4> centers = {1.0 / 16, 5.0 / 16, 9.0 / 16, 13.0 / 16};
    const std::array<double, 4> from = {h0, 1.0, h0, 1.0};
    const std::array<double, 4> to = {1.0, h0, 1.0, h0};
    double x = 0.0;
    for (int i = 0; i < 4; ++i) {
      const double a = centers[i] * L - 0.5 * w;
      const double b = centers[i] * L + 0.5 * w;
      if (a > x + 1e-15 * L)
        g.pieces_.push_back({Piece::Kind::Constant, x, a, from[i], from[i]});
      g.pieces_.push_back({Piece::Kind::Quintic, a, b, from[i], to[i]});
      x = b;
      const double next = (i < 3) ? (centers[i + 1] * L - 0.5 * w) : L;
      g.pieces_.push_back({Piece::Kind::Constant, x, next, to[i], to[i]});
      x = next;
    }
    g.smooth_periodic_ = false;
    const double m = 1.875 * (1.0 - h0) / w;  // max quintic slope is 15/8 over the width
    g.sum_ = {L, h0, 1.0, m, std::max(m * m, g.max_half_h_hxx()), Smoothness::C11};
    return g;
  }

  /// Symmetric triangle profile: h1 at x = 0, h0 at x = L/2.
  static ChannelGeometry sawtooth(double h0, double h1, double L = 1.0) {
    require(h0 > 0.0 && h1 > h0 && L > 0.0, "sawtooth: need 0 < h0 < h1");
    ChannelGeometry g;
    g.family_ = Family::Sawtooth;
    g.pieces_ = {{Piece::Kind::Linear, 0.0, 0.5 * L, h1, h0},
                 {Piece::Kind::Linear, 0.5 * L, L, h0, h1}};
    g.smooth_periodic_ = false;
    g.sum_ = {L, h0, h1, (h1 - h0) / (0.5 * L), 0.0, Smoothness::C01};
    return g;
  }

  /// Piecewise-linear profile through nodes [[x, h], ...]; x strictly
  /// increasing from 0 to L, first and last h equal.
  static ChannelGeometry sampled(const std::vector<std::array<double, 2>>& nodes) {
    require(nodes.size() >= 2, "sampled: need at least two nodes");
    require(nodes.front()[0] == 0.0, "sampled: first node must sit at x = 0");
    require(std::abs(nodes.front()[1] - nodes.back()[1]) <= 1e-12 * std::abs(nodes.front()[1]),
            "sampled: first and last heights must agree (periodicity)");
    ChannelGeometry g;
    g.family_ = Family::Sampled;
    double h0 = nodes[0][1], h1 = nodes[0][1], m = 0.0;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
      require(nodes[i + 1][0] > nodes[i][0], "sampled: x must increase strictly");
      g.pieces_.push_back({Piece::Kind::Linear, nodes[i][0], nodes[i + 1][0], nodes[i][1],
                           nodes[i + 1][1]});
      h0 = std::min({h0, nodes[i][1], nodes[i + 1][1]});
      h1 = std::max({h1, nodes[i][1], nodes[i + 1][1]});
      m = std::max(m, std::abs(nodes[i + 1][1] - nodes[i][1]) /
                          (nodes[i + 1][0] - nodes[i][0]));
    }
    require(h0 > 0.0, "sampled: heights must stay positive");
    g.smooth_periodic_ = false;
    g.sum_ = {nodes.back()[0], h0, h1, m, 0.0, Smoothness::C01};
    return g;
  }

  Family family() const { return family_; }
  double L() const { return sum_.L; }
  const GeometrySummary& summary() const { return sum_; }
  bool smooth_periodic() const { return smooth_periodic_; }
  int piece_count() const { return static_cast<int>(pieces_.size()); }
  const Piece& piece(int i) const { return pieces_.at(i); }

  double h(int pc, double x) const { return eval(pieces_.at(pc), x, 0); }
  double hx(int pc, double x) const { return eval(pieces_.at(pc), x, 1); }
  double hxx(int pc, double x) const { return eval(pieces_.at(pc), x, 2); }

  double h(double x) const { return eval(pieces_.at(locate(x)), wrap(x), 0); }
  double hx(double x) const { return eval(pieces_.at(locate(x)), wrap(x), 1); }

  /// Exact area under one period of h.
  double area() const {
    double a = 0.0;
    for (const auto& p : pieces_) {
      const double len = p.x1 - p.x0;
      switch (p.kind) {
        case Piece::Kind::Constant: a += len * p.v0; break;
        case Piece::Kind::Linear: a += len * 0.5 * (p.v0 + p.v1); break;
        case Piece::Kind::Quintic: a += len * 0.5 * (p.v0 + p.v1); break;  // smoothstep mean 1/2
        case Piece::Kind::Cosine: a += len * p.v0; break;  // cosine integrates to zero
      }
    }
    return a;
  }

 private:
  static void require(bool ok, const char* msg) {
    if (!ok) throw std::domain_error(std::string("ChannelGeometry: ") + msg);
  }

  double wrap(double x) const {
    double r = std::fmod(x, sum_.L);
    if (r < 0.0) r += sum_.L;
    return r;
  }

  int locate(double x) const {
    const double r = wrap(x);
    int lo = 0, hi = piece_count() - 1;
    while (lo < hi) {
      const int mid = (lo + hi) / 2;
      if (r < pieces_[mid].x1)
        hi = mid;
      else
        lo = mid + 1;
    }
    return lo;
  }

  double eval(const Piece& p, double x, int deriv) const {
    switch (p.kind) {
      case Piece::Kind::Constant:
        return deriv == 0 ? p.v0 : 0.0;
      case Piece::Kind::Linear: {
        const double slope = (p.v1 - p.v0) / (p.x1 - p.x0);
        if (deriv == 0) return p.v0 + slope * (x - p.x0);
        return deriv == 1 ? slope : 0.0;
      }
      case Piece::Kind::Quintic: {
        const double w = p.x1 - p.x0;
        const double r = std::clamp((x - p.x0) / w, 0.0, 1.0);
        const double d = p.v1 - p.v0;
        if (deriv == 0) return p.v0 + d * r * r * r * (10.0 + r * (-15.0 + 6.0 * r));
        if (deriv == 1) return d * 30.0 * r * r * (1.0 - r) * (1.0 - r) / w;
        return d * 60.0 * r * (2.0 * r - 1.0) * (r - 1.0) / (w * w);
      }
      case Piece::Kind::Cosine: {
        const double w = 2.0 * std::numbers::pi / (p.x1 - p.x0);
        if (deriv == 0) return p.v0 + p.v1 * std::cos(w * x);
        if (deriv == 1) return -p.v1 * w * std::sin(w * x);
        return -p.v1 * w * w * std::cos(w * x);
      }
    }
    return 0.0;
  }

  /// sup of |h h_xx| / 2 over the transitions, by dense sampling with local
  /// parabolic refinement (the quintic makes a closed form unwieldy).
  double max_half_h_hxx() const {
    double best = 0.0;
    for (const auto& p : pieces_) {
      if (p.kind != Piece::Kind::Quintic) continue;
      const int n = 20001;
      double prev2 = 0.0, prev1 = 0.0;
      double xbest = p.x0;
      for (int i = 0; i < n; ++i) {
        const double x = p.x0 + (p.x1 - p.x0) * i / (n - 1);
        const double v = 0.5 * std::abs(eval(p, x, 0) * eval(p, x, 2));
        if (v > best) {
          best = v;
          xbest = x;
        }
        prev2 = prev1;
        prev1 = v;
      }
      (void)prev2;
      // golden-section polish around the grid maximum
      double a = std::max(p.x0, xbest - (p.x1 - p.x0) / (n - 1));
      double b = std::min(p.x1, xbest + (p.x1 - p.x0) / (n - 1));
      const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
      double c = b - gr * (b - a), d = a + gr * (b - a);
      for (int it = 0; it < 80; ++it) {
        const double fc = 0.5 * std::abs(eval(p, c, 0) * eval(p, c, 2));
        const double fd = 0.5 * std::abs(eval(p, d, 0) * eval(p, d, 2));
        if (fc > fd)
          b = d;
        else
          a = c;
        c = b - gr * (b - a);
        d = a + gr * (b - a);
        best = std::max({best, fc, fd});
      }
    }
    return best;
  }

  Family family_ = Family::Constant;
  std::vector<Piece> pieces_;
  bool smooth_periodic_ = false;
  GeometrySummary sum_;
};

/// Scalar field on the channel, represented by its pullback on the reference
/// rectangle (sine representation, so it vanishes on both walls).
struct MappedField {
  RectangleField tilde;
  ChannelGeometry geom;

  MappedField(RectangleField t, ChannelGeometry g) : tilde(std::move(t)), geom(std::move(g)) {
    if (std::abs(tilde.L() - geom.L()) > 1e-12 * geom.L())
      throw std::domain_error("MappedField: field and geometry periods differ");
  }
};

struct QuadOptions {
  int nxi = 512;
  int neta = 256;
  double tol = 1e-6;
  int max_doublings = 3;
};

namespace detail {

struct MappedSample {
  std::complex<double> u, uxi, ueta;
  double eta = 0.0, h = 0.0, hx = 0.0, hxx = 0.0;
  double jac = 0.0;  // h / H
};

struct XiGrid {
  std::vector<double> nodes, weights;
  std::vector<int> piece;
};

inline XiGrid make_xi_grid(const ChannelGeometry& g, int nxi) {
  XiGrid grid;
  if (g.smooth_periodic()) {
    auto r = periodic_trapezoid(g.L(), nxi);
    grid.nodes = std::move(r.nodes);
    grid.weights = std::move(r.weights);
    grid.piece.assign(grid.nodes.size(), 0);
    return grid;
  }
  for (int pc = 0; pc < g.piece_count(); ++pc) {
    const auto& p = g.piece(pc);
    const int n = std::max(8, static_cast<int>(std::lround(nxi * (p.x1 - p.x0) / g.L())));
    auto r = panel_trapezoid(p.x0, p.x1, n);
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
      grid.nodes.push_back(r.nodes[i]);
      grid.weights.push_back(r.weights[i]);
      grid.piece.push_back(pc);
    }
  }
  return grid;
}

/// Tensor quadrature over the reference rectangle with mapped-geometry data
/// at every node. The integrand accumulates NV quantities per node; the grid
/// doubles until the relative drift of each falls below tol.
template <int NV, typename PerNode>
std::pair<std::array<double, NV>, double> integrate_mapped(const RectangleField& f,
                                                           const ChannelGeometry& g,
                                                           PerNode&& per_node,
                                                           const QuadOptions& opt,
                                                           bool need_hxx = false) {
  auto pass = [&](int nxi, int neta) {
    const XiGrid xg = make_xi_grid(g, nxi);
    const auto yg = gauss_on(0.0, f.H(), neta);
    const GridEval ev = evaluate_on_grid(f, xg.nodes, yg.nodes);
    std::array<double, NV> acc{};
    const int gx = static_cast<int>(xg.nodes.size());
    for (int c = 0; c < gx; ++c) {
      MappedSample s;
      s.h = g.h(xg.piece[c], xg.nodes[c]);
      s.hx = g.hx(xg.piece[c], xg.nodes[c]);
      s.hxx = need_hxx ? g.hxx(xg.piece[c], xg.nodes[c]) : 0.0;
      s.jac = s.h / f.H();
      for (int r = 0; r < neta; ++r) {
        s.eta = yg.nodes[r];
        s.u = ev.u(r, c);
        s.uxi = ev.uxi(r, c);
        s.ueta = ev.ueta(r, c);
        std::array<double, NV> v{};
        per_node(s, v);
        const double w = xg.weights[c] * yg.weights[r];
        for (int i = 0; i < NV; ++i) acc[i] += w * v[i];
      }
    }
    return acc;
  };
  int nxi = opt.nxi, neta = opt.neta;
  std::array<double, NV> coarse = pass(nxi, neta);
  double drift = 0.0;
  for (int d = 0; d < opt.max_doublings; ++d) {
    nxi *= 2;
    neta *= 2;
    std::array<double, NV> fine = pass(nxi, neta);
    drift = 0.0;
    for (int i = 0; i < NV; ++i)
      drift = std::max(drift, std::abs(fine[i] - coarse[i]) /
                                  std::max(1e-300, std::abs(fine[i])));
    coarse = fine;
    if (drift < opt.tol) break;
  }
  return {coarse, drift};
}

}  // namespace detail

struct MappedNorms {
  double l2 = 0.0;
  double energy = 0.0;
  double drift = 0.0;
};

/// || u ||_0 and || u ||_a over the channel, by tensor quadrature of the
/// mapped integrands u_x = u_xi - (eta/h) h_x u_eta, u_y = (H/h) u_eta.
inline MappedNorms quad_norms(const MappedField& u, const QuadOptions& opt = {}) {
  const double H = u.tilde.H();
  auto [vals, drift] = detail::integrate_mapped<2>(
      u.tilde, u.geom,
      [&](const detail::MappedSample& s, std::array<double, 2>& v) {
        const std::complex<double> ux = s.uxi - (s.eta / s.h) * s.hx * s.ueta;
        const std::complex<double> uy = (H / s.h) * s.ueta;
        v[0] = std::norm(s.u) * s.jac;
        v[1] = (std::norm(ux) + std::norm(uy)) * s.jac;
      },
      opt);
  return {std::sqrt(vals[0]), std::sqrt(vals[1]), drift};
}

struct TransferResiduals {
  double r_scaled = 0.0;  // bound on the H/h-weighted transported field
  double r_slope = 0.0;   // bound on the slope-term field (C11 geometries)
  double r_plain = 0.0;   // bound on the plainly transported field
  double drift = 0.0;
};

/// Residuals of the three coordinate-transfer energy bounds at the field's
/// reference height H: each compares C^2 * || u~ ||_a(R)^2 against the
/// channel energy of a transported field, with the constants chosen by the
/// gamma allocation variant. The slope-term residual needs h in C^{1,1} and
/// is NaN otherwise.
inline TransferResiduals transfer_residuals(const MappedField& u, GammaVariant variant,
                                            const QuadOptions& opt = {}) {
  const auto& g = u.geom.summary();
  const bool c11 = g.cls == Smoothness::C11;
  if (variant == GammaVariant::Smooth && !c11)
    throw std::invalid_argument("transfer_residuals: smooth-variant constants need a C11 profile");
  const double H = u.tilde.H();
  const double m = g.M;
  const double h0 = g.h0, h1 = g.h1;

  double c3sq, c5sq;
  if (variant == GammaVariant::Smooth) {
    c3sq = std::max(3.0 * H / h0, (1.0 + 3.0 * m * m) * std::pow(H / h0, 3.0));
    c5sq = std::max(2.0 * h1 / H, (1.0 + 2.0 * m * m) * H / h0);
  } else {
    c3sq = std::max(9.0 / 8.0 * H / h0, (1.0 + 16.0 * m * m) * std::pow(H / h0, 3.0));
    c5sq = std::max(9.0 / 8.0 * h1 / H, (1.0 + 9.0 * m * m) * H / h0);
  }
  const double m2 = g.M2sq;
  const double c4sq =
      c11 ? std::max(8.0 * m2 * H / h0, (2.0 * m2 + 6.0 * m2 * m2) * std::pow(H / h0, 3.0))
          : std::numeric_limits<double>::quiet_NaN();

  auto [vals, drift] = detail::integrate_mapped<3>(
      u.tilde, u.geom,
      [&](const detail::MappedSample& s, std::array<double, 3>& v) {
        const std::complex<double> ux = s.uxi - (s.eta / s.h) * s.hx * s.ueta;
        const std::complex<double> uy = (H / s.h) * s.ueta;
        // H h^-1 u
        const std::complex<double> wx3 =
            H * (-s.hx / (s.h * s.h) * s.u + ux / s.h);
        const std::complex<double> wy3 = H / s.h * uy;
        v[0] = (std::norm(wx3) + std::norm(wy3)) * s.jac;
        // H h^-2 y h_x u  (y = h eta / H)
        if (c11) {
          const std::complex<double> wx4 =
              s.eta * ((s.hxx / s.h - 2.0 * s.hx * s.hx / (s.h * s.h)) * s.u +
                       s.hx / s.h * (s.uxi - (s.eta / s.h) * s.hx * s.ueta));
          const std::complex<double> wy4 =
              H * s.hx / (s.h * s.h) * (s.u + s.eta * s.ueta);
          v[1] = (std::norm(wx4) + std::norm(wy4)) * s.jac;
        }
        // plain u
        v[2] = (std::norm(ux) + std::norm(uy)) * s.jac;
      },
      opt, c11);

  const double te = u.tilde.energy_sq();
  TransferResiduals out;
  out.r_scaled = c3sq * te - vals[0];
  out.r_slope = c11 ? c4sq * te - vals[1] : std::numeric_limits<double>::quiet_NaN();
  out.r_plain = c5sq * te - vals[2];
  out.drift = drift;
  return out;
}

/// Channel Poincare bound (h1^2/8) ||u_y||^2 - ||u||^2 >= 0 for fields
/// vanishing on both walls.
inline double poincare_channel_residual(const MappedField& u, const QuadOptions& opt = {}) {
  const double H = u.tilde.H();
  auto [vals, drift] = detail::integrate_mapped<2>(
      u.tilde, u.geom,
      [&](const detail::MappedSample& s, std::array<double, 2>& v) {
        const std::complex<double> uy = (H / s.h) * s.ueta;
        v[0] = std::norm(s.u) * s.jac;
        v[1] = std::norm(uy) * s.jac;
      },
      opt);
  (void)drift;
  const double h1 = u.geom.summary().h1;
  return h1 * h1 / 8.0 * vals[1] - vals[0];
}

/// Quadrature of the area element, for checking against the closed form.
inline double quad_area(const ChannelGeometry& g, int nxi = 2048) {
  const auto grid = detail::make_xi_grid(g, nxi);
  double a = 0.0;
  for (std::size_t i = 0; i < grid.nodes.size(); ++i)
    a += grid.weights[i] * g.h(grid.piece[i], grid.nodes[i]);
  return a;
}

}  // namespace infsup
