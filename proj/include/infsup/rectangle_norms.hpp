#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "infsup/fourier_ops.hpp"
#include "infsup/quadrature.hpp"

namespace infsup {

/// Shared dense blocks of the sine-to-cosine operator, keyed by shape.
inline std::shared_ptr<const Eigen::MatrixXd> cached_block(int rows, int cols) {
  static std::map<std::pair<int, int>, std::shared_ptr<const Eigen::MatrixXd>> cache;
  static std::mutex mtx;
  std::lock_guard lock(mtx);
  auto key = std::make_pair(rows, cols);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto mat = std::make_shared<Eigen::MatrixXd>(block(rows, cols).entries);
  cache.emplace(key, mat);
  return mat;
}

enum class FieldKind {
  MeanZero,  // pressure-type: the mean is projected out, a(0,0) = 0
  Sine       // velocity-type: coefficients taken as given
};

/// Truncated Fourier field on the x-periodic rectangle of period L and
/// height H. Sine coefficients b(n, j) with n in [-N, N] (row n + N) and
/// j in [1, J]; cosine coefficients a(n, k), k in [0, K], derived per strip.
class RectangleField {
 public:
  static RectangleField from_coefficients(double L, double H, Eigen::MatrixXcd b,
                                          FieldKind kind = FieldKind::MeanZero, int K = -1) {
    if (L <= 0.0 || H <= 0.0) throw std::domain_error("RectangleField: need L, H > 0");
    const int J = static_cast<int>(b.cols());
    if (J < 1 || b.rows() < 1 || b.rows() % 2 == 0)
      throw std::domain_error("RectangleField: coefficient matrix must be (2N+1) x J");
    RectangleField f;
    f.L_ = L;
    f.H_ = H;
    f.N_ = static_cast<int>(b.rows() - 1) / 2;
    f.J_ = J;
    f.K_ = (K > 0) ? K : 2 * J;
    f.b_ = std::move(b);
    if (kind == FieldKind::MeanZero) f.project_mean_zero();
    f.derive_cosine();
    return f;
  }

  /// Damped random field: coefficients i.i.d. complex standard normal scaled
  /// by 1/(1 + n^2 + j^2).
  static RectangleField random(double L, double H, int N, int J, std::uint64_t seed,
                               FieldKind kind = FieldKind::MeanZero) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXcd b(2 * N + 1, J);
    for (int n = -N; n <= N; ++n)
      for (int j = 1; j <= J; ++j) {
        const double damp = 1.0 / (1.0 + double(n) * n + double(j) * j);
        b(n + N, j - 1) = std::complex<double>(gauss(rng), gauss(rng)) *
                          (damp / std::numbers::sqrt2);
      }
    return from_coefficients(L, H, std::move(b), kind);
  }

  double L() const { return L_; }
  double H() const { return H_; }
  int N() const { return N_; }
  int J() const { return J_; }
  int K() const { return K_; }
  const Eigen::MatrixXcd& b() const { return b_; }
  const Eigen::MatrixXcd& a() const { return a_; }

  std::complex<double> b_at(int n, int j) const { return b_(n + N_, j - 1); }
  std::complex<double> a_at(int n, int k) const { return a_(n + N_, k); }

  double xfreq(int n) const { return 2.0 * std::numbers::pi * n / L_; }
  double yfreq(int j) const { return std::numbers::pi * j / H_; }

  /// || q ||_0^2 = sum L H |b_nj|^2 (exact over the stored support).
  double norm0_sq() const { return L_ * H_ * b_.squaredNorm(); }

  /// Energy (H^1 semi-norm) squared of the sine representation.
  double energy_sq() const {
    double s = 0.0;
    for (int n = -N_; n <= N_; ++n) {
      const double lx = xfreq(n) * xfreq(n);
      for (int j = 1; j <= J_; ++j)
        s += (lx + yfreq(j) * yfreq(j)) * std::norm(b_at(n, j));
    }
    return L_ * H_ * s;
  }

  RectangleField scaled(double factor) const {
    RectangleField f = *this;
    f.b_ *= factor;
    f.a_ *= factor;
    return f;
  }

 private:
  void project_mean_zero() {
    Eigen::VectorXd r(J_);
    for (int j = 1; j <= J_; ++j) r(j - 1) = SineCosineOperator::entry(0, j);
    Eigen::VectorXcd b0 = b_.row(N_).transpose();
    const std::complex<double> mean = r.cast<std::complex<double>>().dot(b0);
    b0 -= (mean / r.squaredNorm()) * r.cast<std::complex<double>>();
    b_.row(N_) = b0.transpose();
  }

  void derive_cosine() {
    auto e = cached_block(K_ + 1, J_);
    a_.resize(2 * N_ + 1, K_ + 1);
    for (int row = 0; row < 2 * N_ + 1; ++row) {
      Eigen::VectorXcd bn = b_.row(row).transpose();
      Eigen::VectorXcd an(K_ + 1);
      an.real() = (*e) * bn.real();
      an.imag() = (*e) * bn.imag();
      a_.row(row) = an.transpose();
    }
  }

  double L_ = 1.0, H_ = 1.0;
  int N_ = 0, J_ = 0, K_ = 0;
  Eigen::MatrixXcd b_, a_;
};

struct DualNorms {
  double dx = 0.0;   // || d_x q ||_{-1}
  double dy = 0.0;   // || d_y q ||_{-1} (cosine side, truncated from below)
  double qm1 = 0.0;  // || q ||_{-1}
  double a_tail_rel = 0.0;  // cosine mass beyond K, relative to || q ||^2
};

/// Exact lattice sums for the dual norms. The dy sum uses the truncated
/// cosine coefficients and therefore never overstates; the dropped tail is
/// reported relative to the field mass.
inline DualNorms dual_norms(const RectangleField& q) {
  DualNorms d;
  double dx2 = 0.0, dy2 = 0.0, qm2 = 0.0, tail = 0.0;
  const double LH = q.L() * q.H();
  for (int n = -q.N(); n <= q.N(); ++n) {
    const double lx = q.xfreq(n) * q.xfreq(n);
    double strip_mass = 0.0;
    for (int j = 1; j <= q.J(); ++j) {
      const double mu = q.yfreq(j) * q.yfreq(j);
      const double bb = std::norm(q.b_at(n, j));
      strip_mass += bb;
      dx2 += lx * bb / (lx + mu);
      qm2 += bb / (lx + mu);
    }
    double a_mass = 0.0;
    for (int k = 0; k <= q.K(); ++k) {
      const double aa = std::norm(q.a_at(n, k));
      a_mass += aa;
      if (k >= 1) {
        const double mu = q.yfreq(k) * q.yfreq(k);
        dy2 += mu * aa / (lx + mu);
      }
    }
    tail += std::max(0.0, strip_mass - a_mass);
  }
  d.dx = std::sqrt(LH * dx2);
  d.dy = std::sqrt(LH * dy2);
  d.qm1 = std::sqrt(LH * qm2);
  const double mass = q.b().squaredNorm();
  d.a_tail_rel = (mass > 0.0) ? tail / mass : 0.0;
  return d;
}

/// C1 ||d_x q||^2 + C2 ||d_y q||^2 - ||q||^2 with C1 = max(9, 9 L^2 / 16 H^2),
/// C2 = 9. Nonnegative for every mean-zero field.
inline double l2_dual_residual(const RectangleField& q) {
  const auto d = dual_norms(q);
  const double C1 = std::max(9.0, 9.0 / 16.0 * (q.L() / q.H()) * (q.L() / q.H()));
  return C1 * d.dx * d.dx + 9.0 * d.dy * d.dy - q.norm0_sq();
}

/// (L^2/4pi^2) ||d_x q||^2 + (H^2/pi^2) ||d_y q||^2 - ||q||_{-1}^2 >= 0.
inline double neg_norm_residual(const RectangleField& q) {
  const auto d = dual_norms(q);
  const double pi2 = std::numbers::pi * std::numbers::pi;
  return q.L() * q.L() / (4.0 * pi2) * d.dx * d.dx +
         q.H() * q.H() / pi2 * d.dy * d.dy - d.qm1 * d.qm1;
}

/// Multiplier bound: 9 M^2 (||d_x q||^2 + ||d_y q||^2) - ||d_y (zeta q)||^2,
/// where zeta(x) = sum_m zeta_hat(m) e^{2 pi i m x / L} has finite support
/// [-Mz, Mz] and M = sup |zeta|. The product's cosine coefficients come from
/// column-by-column convolution over the strip index; the truncated k-tail
/// of the convolved field is charged at full weight against the residual.
inline double multiplier_dy_residual(const RectangleField& q,
                                     const Eigen::VectorXcd& zeta_hat) {
  const int mz2 = static_cast<int>(zeta_hat.size());
  if (mz2 < 1 || mz2 % 2 == 0)
    throw std::domain_error("multiplier_dy_residual: zeta_hat must have odd length (m in [-Mz, Mz])");
  const int Mz = (mz2 - 1) / 2;
  const int Nq = q.N();
  const int Nout = Nq + Mz;
  if (Nout > 100000) throw std::length_error("multiplier_dy_residual: convolution index range overflow");

  // sup norm of zeta on a dense grid
  double sup = 0.0;
  const int grid = 4096;
  for (int g = 0; g < grid; ++g) {
    std::complex<double> v = 0.0;
    const double x = double(g) / grid;
    for (int m = -Mz; m <= Mz; ++m)
      v += zeta_hat(m + Mz) *
           std::exp(std::complex<double>(0.0, 2.0 * std::numbers::pi * m * x));
    sup = std::max(sup, std::abs(v));
  }

  // convolved cosine coefficients, k = 1..K
  const double LH = q.L() * q.H();
  double a2 = 0.0;
  for (int n = -Nout; n <= Nout; ++n) {
    const double lx = q.xfreq(n) * q.xfreq(n);
    for (int k = 1; k <= q.K(); ++k) {
      std::complex<double> v = 0.0;
      for (int m = std::max(-Nq, n - Mz); m <= std::min(Nq, n + Mz); ++m)
        v += zeta_hat(n - m + Mz) * q.a_at(m, k);
      const double mu = q.yfreq(k) * q.yfreq(k);
      a2 += mu * std::norm(v) / (lx + mu);
    }
  }
  // pessimistic charge for the k > K tail of the convolved field
  double l1 = 0.0;
  for (int m = 0; m < mz2; ++m) l1 += std::abs(zeta_hat(m));
  double tail = 0.0;
  for (int n = -Nq; n <= Nq; ++n) {
    double strip = 0.0, amass = 0.0;
    for (int j = 1; j <= q.J(); ++j) strip += std::norm(q.b_at(n, j));
    for (int k = 0; k <= q.K(); ++k) amass += std::norm(q.a_at(n, k));
    tail += std::max(0.0, strip - amass);
  }
  a2 += l1 * l1 * tail;

  const auto d = dual_norms(q);
  return 9.0 * sup * sup * (d.dx * d.dx + d.dy * d.dy) - LH * a2;
}

/// Sharp sine-series Poincare bound on the rectangle:
/// (H^2/pi^2) ||u_y||^2 - ||u||^2 >= 0, both sides exact sums.
inline double poincare_sine_residual(const RectangleField& u) {
  double uy2 = 0.0;
  for (int n = -u.N(); n <= u.N(); ++n)
    for (int j = 1; j <= u.J(); ++j)
      uy2 += u.yfreq(j) * u.yfreq(j) * std::norm(u.b_at(n, j));
  uy2 *= u.L() * u.H();
  const double h = u.H() / std::numbers::pi;
  return h * h * uy2 - u.norm0_sq();
}

namespace detail {

/// Field values and first derivatives of the sine representation on a tensor
/// grid, built by separating the two directions.
struct GridEval {
  Eigen::MatrixXcd u, uxi, ueta;  // (n_eta x n_xi)
};

inline GridEval evaluate_on_grid(const RectangleField& f, const std::vector<double>& xi,
                                 const std::vector<double>& eta) {
  const int gx = static_cast<int>(xi.size());
  const int ge = static_cast<int>(eta.size());
  const int nmodes = 2 * f.N() + 1;
  Eigen::MatrixXd msin(ge, f.J()), mcos(ge, f.J());
  for (int g = 0; g < ge; ++g)
    for (int j = 1; j <= f.J(); ++j) {
      const double w = f.yfreq(j);
      msin(g, j - 1) = std::numbers::sqrt2 * std::sin(w * eta[g]);
      mcos(g, j - 1) = std::numbers::sqrt2 * w * std::cos(w * eta[g]);
    }
  Eigen::MatrixXcd seta = msin * f.b().transpose();  // ge x nmodes
  Eigen::MatrixXcd ceta = mcos * f.b().transpose();
  Eigen::MatrixXcd phase(nmodes, gx), dphase(nmodes, gx);
  for (int n = -f.N(); n <= f.N(); ++n) {
    const std::complex<double> iw(0.0, f.xfreq(n));
    for (int g = 0; g < gx; ++g) {
      const auto p = std::exp(std::complex<double>(0.0, f.xfreq(n) * xi[g]));
      phase(n + f.N(), g) = p;
      dphase(n + f.N(), g) = iw * p;
    }
  }
  GridEval e;
  e.u = seta * phase;
  e.uxi = seta * dphase;
  e.ueta = ceta * phase;
  return e;
}

}  // namespace detail

struct QuadCheck {
  double residual = 0.0;
  double drift = 0.0;  // relative change under one grid doubling
};

/// Weighted-coordinate energy bound on the rectangle:
/// (16/9) H^2 ||u||_a^2 - ||eta u||_a^2 >= 0, the right side by tensor
/// quadrature of |eta u_xi|^2 + |u + eta u_eta|^2 with analytic derivatives.
inline QuadCheck eta_weight_residual(const RectangleField& u, int nxi = 0, int neta = 0) {
  if (nxi <= 0) nxi = std::max(64, 4 * u.N() + 2);
  if (neta <= 0) neta = 4 * u.J();
  auto weighted_energy = [&](int gx, int ge) {
    const auto tx = periodic_trapezoid(u.L(), gx);
    const auto gy = gauss_on(0.0, u.H(), ge);
    const auto ev = detail::evaluate_on_grid(u, tx.nodes, gy.nodes);
    double acc = 0.0;
    for (int c = 0; c < gx; ++c)
      for (int r = 0; r < ge; ++r) {
        const double eta = gy.nodes[r];
        const double dxi = std::norm(eta * ev.uxi(r, c));
        const double deta = std::norm(ev.u(r, c) + eta * ev.ueta(r, c));
        acc += tx.weights[c] * gy.weights[r] * (dxi + deta);
      }
    return acc;
  };
  const double base = weighted_energy(nxi, neta);
  const double fine = weighted_energy(2 * nxi, 2 * neta);
  const double bound = 16.0 / 9.0 * u.H() * u.H() * u.energy_sq();
  QuadCheck out;
  out.residual = bound - fine;
  out.drift = std::abs(fine - base) / std::max(1e-300, std::abs(fine));
  return out;
}

struct RectangleInfSup {
  double beta = 0.0;
  std::vector<double> strip_lambda;  // smallest eigenvalue per strip n = 0..N
};

/// Truncated-space inf-sup constant of the gradient on the rectangle: per
/// strip n, the smallest eigenvalue of the J x J form
///   Q_n = diag(Dx) + E^T diag(Dy) E,
/// with the n = 0 strip restricted to mean-zero fields by deflating the
/// constraint vector. beta = sqrt(min over strips). A Rayleigh quotient over
/// a truncated trial space, hence an upper bound for the true constant.
inline RectangleInfSup rectangle_infsup_detail(double L, double H, int N, int J) {
  if (N < 1 || J < 8) throw std::domain_error("rectangle_infsup: need N >= 1 and J >= 8");
  const int K = 4 * J;  // cosine truncation; column tails beyond 4J are negligible
  auto eptr = cached_block(K + 1, J);
  const Eigen::MatrixXd& e = *eptr;
  RectangleInfSup out;
  out.strip_lambda.resize(N + 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  for (int n = 0; n <= N; ++n) {
    const double lx = (2.0 * std::numbers::pi * n / L) * (2.0 * std::numbers::pi * n / L);
    Eigen::VectorXd dy(K + 1);
    dy(0) = 0.0;
    for (int k = 1; k <= K; ++k) {
      const double mu = (std::numbers::pi * k / H) * (std::numbers::pi * k / H);
      dy(k) = mu / (lx + mu);
    }
    Eigen::MatrixXd q = e.transpose() * dy.asDiagonal() * e;
    for (int j = 1; j <= J; ++j) {
      const double mu = (std::numbers::pi * j / H) * (std::numbers::pi * j / H);
      q(j - 1, j - 1) += (n == 0) ? 0.0 : lx / (lx + mu);
    }
    if (n == 0) {
      // restrict to the orthogonal complement of the mean constraint vector
      Eigen::MatrixXd r = e.row(0).transpose();
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(r);
      Eigen::MatrixXd basis = qr.householderQ() * Eigen::MatrixXd::Identity(J, J);
      Eigen::MatrixXd sub = basis.rightCols(J - 1);
      es.compute(sub.transpose() * q * sub, Eigen::EigenvaluesOnly);
    } else {
      es.compute(q, Eigen::EigenvaluesOnly);
    }
    if (es.info() != Eigen::Success)
      throw std::runtime_error("rectangle_infsup: eigensolver failed");
    out.strip_lambda[n] = es.eigenvalues()(0);
  }
  out.beta = std::sqrt(*std::min_element(out.strip_lambda.begin(), out.strip_lambda.end()));
  return out;
}

inline double rectangle_infsup(double L, double H, int N, int J) {
  return rectangle_infsup_detail(L, H, N, J).beta;
}

struct CheckedInfSup {
  double beta = 0.0;          // value at the doubled truncation
  double lambda_drift = 0.0;  // relative change of the smallest eigenvalue, J to 2J
  bool converged = false;     // lambda drift within one percent
};

/// Inf-sup oracle with the truncation diagnostic: evaluates at J and 2J and
/// reports how much the limiting eigenvalue still moves. The inf converges
/// from above (larger trial spaces only lower it), so a large drift means J
/// is too small for the quoted digits.
inline CheckedInfSup rectangle_infsup_checked(double L, double H, int N, int J) {
  const double coarse = rectangle_infsup(L, H, N, J);
  const double fine = rectangle_infsup(L, H, N, 2 * J);
  CheckedInfSup out;
  out.beta = fine;
  out.lambda_drift = std::abs(coarse * coarse - fine * fine) / (fine * fine);
  out.converged = out.lambda_drift <= 0.01;
  return out;
}

}  // namespace infsup
