#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "infsup/fourier_ops.hpp"

namespace infsup {

/// One certified window: on [nu_min, nu_max] the strip constants
///   C1(nu) = (1 + j0^2/nu^2) / (1 - t),   C2(nu) = (1 + nu^2/k1^2) / (1 - t)
/// both stay below c_thresh, with t the tail norm of the (k1, j0) block.
struct WindowCertificate {
  int k1 = 0;
  int j0 = 0;
  double t = 0.0;
  double nu_min = 0.0;
  double nu_max = 0.0;
  double c_thresh = 0.0;

  double c1(double nu) const { return (1.0 + (double(j0) * j0) / (nu * nu)) / (1.0 - t); }
  double c2(double nu) const { return (1.0 + (nu * nu) / (double(k1) * k1)) / (1.0 - t); }
};

/// Window endpoints for a given tail norm: C1(nu_min) = C2(nu_max) = c_thresh.
/// Empty (nu_max < nu_min) windows yield nullopt.
inline std::optional<WindowCertificate> window_for_tail(int k1, int j0, double t,
                                                        double c_thresh) {
  const double ssq = (1.0 - t) * c_thresh - 1.0;
  if (ssq <= 0.0)
    throw std::domain_error("window_for_tail: need (1 - t) * c_thresh > 1");
  const double s = std::sqrt(ssq);
  WindowCertificate w{k1, j0, t, j0 / s, k1 * s, c_thresh};
  if (w.nu_max < w.nu_min) return std::nullopt;
  return w;
}

inline std::optional<WindowCertificate> window_for(int k1, int j0, double c_thresh) {
  return window_for_tail(k1, j0, tail_norm(k1, j0), c_thresh);
}

/// Search constraint k1 <= j0 <= j0_factor * k1 <= four_k1_max, and the
/// nu-range the pruned table has to cover. Certification needs coverage of
/// [target_lo, target_hi]; the tabulated chain keeps extending until it
/// reaches table_hi so the last windows are not cut off mid-range.
struct SearchConstraint {
  int j0_factor = 4;
  int four_k1_max = 400;
  double target_lo = 0.5;
  double target_hi = 100.0;
  double table_hi = 140.0;
};

struct EnvelopeTable {
  double c_thresh = 0.0;
  std::vector<WindowCertificate> certificates;        // sorted by nu_min
  double covered_lo = 0.0;
  double covered_hi = 0.0;
  std::vector<std::pair<double, double>> gaps;        // holes between or beyond the windows
  double target_lo = 0.5;
  double target_hi = 100.0;

  // The table is usable when consecutive windows overlap or touch and the
  // chain reaches the upper target. Below the first window the small-nu
  // closed form takes over, so the low end is reported (covered_lo) but a
  // shortfall there is not a gap.
  bool covers_target() const {
    return gaps.empty() && !certificates.empty() && covered_hi >= target_hi;
  }
};

/// Enumerates tail norms for every admissible (k1, j0) pair once, then builds
/// envelope tables for any threshold from the cached values.
class WindowSearcher {
 public:
  explicit WindowSearcher(SearchConstraint c = {}) : c_(c) {
    if (c_.j0_factor < 1 || c_.four_k1_max < 4)
      throw std::domain_error("WindowSearcher: degenerate constraint");
  }

  int k1_max() const { return c_.four_k1_max / 4; }
  int j0_max(int k1) const { return c_.j0_factor * k1; }

  double t(int k1, int j0) const {
    ensure_table();
    if (k1 < 1 || k1 > k1_max() || j0 < k1 || j0 > j0_max(k1))
      throw std::domain_error("WindowSearcher::t: pair outside constraint set");
    return table_[k1 - 1][j0 - k1];
  }

  /// All non-empty windows at a threshold, sorted by nu_min
  /// (ties broken toward larger reach, then smaller block).
  std::vector<WindowCertificate> candidate_windows(double c_thresh) const {
    if (c_thresh <= 1.0) throw std::domain_error("candidate_windows: need c_thresh > 1");
    ensure_table();
    std::vector<WindowCertificate> out;
    for (int k1 = 1; k1 <= k1_max(); ++k1) {
      for (int j0 = k1; j0 <= j0_max(k1); ++j0) {
        const double tv = table_[k1 - 1][j0 - k1];
        if ((1.0 - tv) * c_thresh <= 1.0) continue;
        if (auto w = window_for_tail(k1, j0, tv, c_thresh)) out.push_back(*w);
      }
    }
    std::sort(out.begin(), out.end(), [](const WindowCertificate& a, const WindowCertificate& b) {
      if (a.nu_min != b.nu_min) return a.nu_min < b.nu_min;
      if (a.nu_max != b.nu_max) return a.nu_max > b.nu_max;
      if (a.k1 != b.k1) return a.k1 < b.k1;
      return a.j0 < b.j0;
    });
    return out;
  }

  /// Greedy interval cover: start at the earliest window; among windows
  /// overlapping the chain keep the one reaching farthest (ties: smaller k1,
  /// then smaller j0); windows made redundant by that choice are discarded.
  /// A gap is recorded when no window overlaps and the chain restarts at the
  /// next window start. The chain keeps extending until coverage reaches
  /// table_hi (or no window extends); gaps count against [target_lo, target_hi].
  EnvelopeTable search(double c_thresh) const {
    EnvelopeTable tbl;
    tbl.c_thresh = c_thresh;
    tbl.target_lo = c_.target_lo;
    tbl.target_hi = c_.target_hi;
    auto cand = candidate_windows(c_thresh);
    if (cand.empty()) {
      tbl.gaps.emplace_back(c_.target_lo, c_.target_hi);
      return tbl;
    }

    auto best_extending = [&](double end) -> std::optional<WindowCertificate> {
      std::optional<WindowCertificate> best;
      for (const auto& w : cand) {
        if (w.nu_min > end) break;
        if (w.nu_max <= end) continue;
        if (!best || w.nu_max > best->nu_max ||
            (w.nu_max == best->nu_max && (w.k1 < best->k1 || (w.k1 == best->k1 && w.j0 < best->j0))))
          best = w;
      }
      return best;
    };

    tbl.certificates.push_back(cand.front());
    tbl.covered_lo = cand.front().nu_min;
    double end = cand.front().nu_max;

    while (end < c_.table_hi) {
      auto next = best_extending(end);
      if (!next) {
        // gap: restart at the earliest window beyond the current chain
        auto it = std::find_if(cand.begin(), cand.end(),
                               [&](const WindowCertificate& w) { return w.nu_min > end; });
        if (it == cand.end()) break;
        if (end < c_.target_hi) tbl.gaps.emplace_back(end, it->nu_min);
        next = best_extending(it->nu_min);
        if (!next) next = *it;
      }
      tbl.certificates.push_back(*next);
      end = next->nu_max;
    }
    tbl.covered_hi = end;
    if (end < c_.target_hi) tbl.gaps.emplace_back(end, c_.target_hi);
    return tbl;
  }

  /// Smallest threshold in [lo, hi] whose table covers the target range,
  /// located by bisection. Window endpoints widen monotonically with the
  /// threshold, so coverage is monotone and bisection is sound.
  double breakdown_threshold(double lo = 5.0, double hi = 7.0, double resolution = 0.005) const {
    if (resolution > 0.01 || resolution <= 0.0)
      throw std::domain_error("breakdown_threshold: resolution must be in (0, 0.01]");
    if (search(lo).covers_target()) return lo;
    if (!search(hi).covers_target())
      throw std::runtime_error("breakdown_threshold: upper bracket does not cover");
    while (hi - lo > resolution) {
      const double mid = 0.5 * (lo + hi);
      if (search(mid).covers_target())
        hi = mid;
      else
        lo = mid;
    }
    return hi;
  }

 private:
  void ensure_table() const {
    std::call_once(built_, [this] { build_table(); });
  }

  // Tail norms for every pair, k1 rows in parallel. For fixed k1 the Gram
  // matrix of the leading block grows by a rank-one update per column.
  void build_table() const {
    const int kmax = k1_max();
    table_.assign(kmax, {});
    unsigned nthreads = std::max(1u, std::thread::hardware_concurrency());
    nthreads = std::min<unsigned>(nthreads, kmax);
    auto work = [&](unsigned tid) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
      for (int k1 = 1 + static_cast<int>(tid); k1 <= kmax; k1 += static_cast<int>(nthreads)) {
        const int jmax = j0_max(k1);
        auto& row = table_[k1 - 1];
        row.resize(jmax - k1 + 1);
        const Eigen::MatrixXd s = block(k1, jmax).entries;
        Eigen::MatrixXd gram = s.leftCols(k1) * s.leftCols(k1).transpose();
        for (int j0 = k1; j0 <= jmax; ++j0) {
          if (j0 > k1) gram.noalias() += s.col(j0 - 1) * s.col(j0 - 1).transpose();
          es.compute(gram, Eigen::EigenvaluesOnly);
          const double lam = std::clamp(es.eigenvalues()(0), 0.0, 1.0);
          row[j0 - k1] = std::sqrt(1.0 - lam);
        }
      }
    };
    std::vector<std::thread> threads;
    for (unsigned tid = 1; tid < nthreads; ++tid) threads.emplace_back(work, tid);
    work(0);
    for (auto& th : threads) th.join();
  }

  SearchConstraint c_;
  mutable std::once_flag built_;
  mutable std::vector<std::vector<double>> table_;
};

/// Certified (C1, C2) at any nu > 0, dispatching between the small-nu closed
/// form (k1 = j0 = 1), a covering window from the table, and the large-nu
/// regime (k1 = floor(nu/sqrt(3)), j0 = 3 k1, tail norm from the Frobenius
/// bound, capped by the worst case over that regime).
inline std::pair<double, double> global_c1_c2(double nu, const EnvelopeTable& table) {
  if (!(nu > 0.0)) throw std::domain_error("global_c1_c2: need nu > 0");
  if (!table.covers_target() || table.covered_lo > 0.5 || table.covered_hi < 100.0 ||
      table.c_thresh > 8.9)
    throw std::invalid_argument("global_c1_c2: table must cover [0.5, 100] at c_thresh <= 8.9");

  if (nu <= 0.5) {
    static const double t11 = tail_norm(1, 1);
    const double c2 = (1.0 + nu * nu) / (1.0 - t11);
    return {c2 / (nu * nu), c2};
  }
  if (nu <= 100.0) {
    const auto& certs = table.certificates;
    auto it = std::upper_bound(certs.begin(), certs.end(), nu,
                               [](double v, const WindowCertificate& w) { return v < w.nu_min; });
    while (it != certs.begin()) {
      --it;
      if (it->nu_max >= nu) return {it->c1(nu), it->c2(nu)};
    }
    throw std::runtime_error("global_c1_c2: no covering window despite full coverage");
  }
  const int k1 = static_cast<int>(std::floor(nu / std::numbers::sqrt3));
  const int j0 = 3 * k1;
  const double t = frobenius_tail_bound(k1, j0);
  const double r = 58.0 / 57.0;
  const double cap = (1.0 + 3.0 * r * r) / (1.0 - frobenius_tail_bound(57, 171));
  const double c1 = (1.0 + (double(j0) * j0) / (nu * nu)) / (1.0 - t);
  const double c2 = (1.0 + (nu * nu) / (double(k1) * k1)) / (1.0 - t);
  return {std::min(c1, cap), std::min(c2, cap)};
}

struct SequenceCheck {
  double residual = 0.0;     // rhs - lhs; nonnegative when (C1, C2) are certified
  double a_tail_mass = 0.0;  // cosine-coefficient mass beyond the truncation
};

/// Residual of the strip inequality in sequence space for sine coefficients b:
///   C1 sum_j nu^2/(nu^2+j^2) |b_j|^2 + (C2-1) sum_{k>=1} k^2/(nu^2+k^2) |a_k|^2
///     - sum_{k>=k_first} nu^2/(nu^2+k^2) |a_k|^2,
/// with a = E b. Cosine coefficients are truncated at k_trunc; the dropped
/// left-hand tail is charged at its largest possible weight, so the returned
/// residual never overstates the true one. b is indexed from j = 1.
inline SequenceCheck strip_inequality_check(const Eigen::VectorXcd& b, double nu, double C1,
                                            double C2, bool include_k0 = true,
                                            int k_trunc = 400) {
  if (!(nu > 0.0)) throw std::domain_error("strip_inequality_check: need nu > 0");
  const int m = static_cast<int>(b.size());
  if (m < 1) throw std::domain_error("strip_inequality_check: empty coefficient vector");

  const Eigen::MatrixXd e = block(k_trunc + 1, m).entries;
  Eigen::VectorXcd a(k_trunc + 1);
  a.real() = e * b.real();
  a.imag() = e * b.imag();

  const double nu2 = nu * nu;
  double rhs = 0.0;
  for (int j = 1; j <= m; ++j)
    rhs += C1 * nu2 / (nu2 + double(j) * j) * std::norm(b(j - 1));
  double lhs = 0.0, a_mass = 0.0;
  for (int k = 0; k <= k_trunc; ++k) {
    const double ak2 = std::norm(a(k));
    a_mass += ak2;
    if (k >= 1) rhs += (C2 - 1.0) * (double(k) * k) / (nu2 + double(k) * k) * ak2;
    if (k >= 1 || include_k0) lhs += nu2 / (nu2 + double(k) * k) * ak2;
  }
  const double tail = std::max(0.0, b.squaredNorm() - a_mass);
  lhs += nu2 / (nu2 + double(k_trunc + 1) * (k_trunc + 1)) * tail;
  return {rhs - lhs, tail};
}

}  // namespace infsup
