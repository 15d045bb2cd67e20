#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

namespace infsup {

/// Entry generator for the unitary operator E mapping the Fourier sine
/// coefficients of a function on (0,1) to its Fourier cosine coefficients.
/// Rows are cosine indices k >= 0, columns are sine indices j >= 1.
struct SineCosineOperator {
  static double entry(int k, int j) {
    if (k < 0) throw std::domain_error("SineCosineOperator: row index k must be >= 0");
    if (j < 1) throw std::domain_error("SineCosineOperator: column index j must be >= 1");
    if (k == 0) {
      if (j % 2 == 0) return 0.0;
      return 2.0 * std::numbers::sqrt2 / (j * std::numbers::pi);
    }
    if (j % 2 == k % 2) return 0.0;  // nonzero only when j - k is odd
    const double jd = j, kd = k;
    return 4.0 * jd / ((jd * jd - kd * kd) * std::numbers::pi);
  }
};

/// Dense leading block of E: rows 0..k1-1, columns 1..j0.
struct OperatorBlock {
  int k1 = 0;
  int j0 = 0;
  Eigen::MatrixXd entries;
};

inline OperatorBlock block(int k1, int j0) {
  if (k1 < 1 || j0 < 1) throw std::domain_error("block: need k1 >= 1 and j0 >= 1");
  OperatorBlock b{k1, j0, Eigen::MatrixXd(k1, j0)};
  for (int k = 0; k < k1; ++k)
    for (int j = 1; j <= j0; ++j)
      b.entries(k, j - 1) = SineCosineOperator::entry(k, j);
  return b;
}

/// Smallest singular value of a leading block, via the k1 x k1 Gram matrix.
/// Blocks here always have at least as many columns as rows, and the smallest
/// singular value stays well away from 0, so squaring costs no accuracy.
inline double block_sigma_min(const Eigen::MatrixXd& s) {
  Eigen::MatrixXd gram = s * s.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.compute(gram, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("block_sigma_min: eigensolver failed");
  const double lam = std::clamp(es.eigenvalues()(0), 0.0, 1.0);
  return std::sqrt(lam);
}

/// Norm t = ||T|| of the infinite tail block to the right of the leading
/// k1 x j0 block. Rows of E are orthonormal, so t^2 = 1 - sigma_min(S)^2.
/// Requires j0 >= k1: a block with more rows than columns admits a unit
/// cosine vector orthogonal to its range, which forces t = 1.
inline double tail_norm(int k1, int j0) {
  if (k1 < 1 || j0 < 1) throw std::domain_error("tail_norm: need k1 >= 1 and j0 >= 1");
  if (j0 < k1)
    throw std::invalid_argument("tail_norm: block must have at least as many columns as rows (j0 >= k1)");
  const double sigma = block_sigma_min(block(k1, j0).entries);
  return std::sqrt(std::max(0.0, 1.0 - sigma * sigma));
}

/// Analytic upper bound for t via the Frobenius norm of the tail block:
///   t^2 <= 4/(pi^2 (j0-1)) + (4/pi^2) [kappa/(kappa^2-1) + log((kappa+1)/(kappa-1))/2]
/// where the bracket is evaluated at kappa = j0/k1. The true integral ratio
/// (j0-1)/(k1-1) exceeds j0/k1, and the bracket decreases in kappa, so this
/// is still an upper bound. Valid for j0 >= 3 and j0 > k1 (or k1 = 1, where
/// only the first row contributes).
inline double frobenius_tail_bound(int k1, int j0) {
  if (k1 < 1) throw std::domain_error("frobenius_tail_bound: need k1 >= 1");
  if (j0 < 3) throw std::domain_error("frobenius_tail_bound: need j0 >= 3");
  const double pi2 = std::numbers::pi * std::numbers::pi;
  double tsq = 4.0 / (pi2 * (j0 - 1));
  if (k1 > 1) {
    const double kappa = static_cast<double>(j0) / k1;
    if (kappa <= 1.0)
      throw std::domain_error("frobenius_tail_bound: integral bound needs j0 > k1");
    tsq += (4.0 / pi2) * (kappa / (kappa * kappa - 1.0) +
                          0.5 * std::log((kappa + 1.0) / (kappa - 1.0)));
  }
  return std::sqrt(tsq);
}

/// Exact truncated Frobenius sum of the tail block: sum over rows k < k1 and
/// columns j0 < j <= jmax of entry(k,j)^2. Brute-force oracle for the bound above.
inline double truncated_frobenius_sq(int k1, int j0, long jmax = 100000) {
  if (k1 < 1 || j0 < 1) throw std::domain_error("truncated_frobenius_sq: bad block shape");
  if (jmax <= j0) throw std::domain_error("truncated_frobenius_sq: jmax must exceed j0");
  double sum = 0.0;
  for (int k = 0; k < k1; ++k) {
    double row = 0.0;
    for (long j = j0 + 1; j <= jmax; ++j) {
      const double e = SineCosineOperator::entry(k, static_cast<int>(j));
      row += e * e;
    }
    sum += row;
  }
  return sum;
}

}  // namespace infsup
