#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "infsup/window_certificates.hpp"

using namespace infsup;
using Catch::Approx;

namespace {

struct Row {
  int k1, j0;
  double t, nu_min, nu_max;
};
const std::vector<Row> kTableRows = {
    {1, 1, 0.43524, 0.498, 2.007},   {3, 3, 0.57904, 1.810, 4.972},
    {6, 8, 0.54892, 4.608, 10.42},   {13, 17, 0.58222, 10.31, 21.43},
    {25, 37, 0.54766, 21.27, 43.49}, {50, 76, 0.54321, 43.41, 87.54},
    {99, 155, 0.53535, 87.54, 175.3}};

const WindowSearcher& shared_searcher() {
  static WindowSearcher s;
  return s;
}

}  // namespace

TEST_CASE("single windows match the reference rows") {
  for (const auto& row : {kTableRows[0], kTableRows[1], kTableRows[6]}) {
    auto w = window_for(row.k1, row.j0, 8.9);
    REQUIRE(w.has_value());
    CHECK(w->t == Approx(row.t).margin(5e-6));
    CHECK(w->nu_min == Approx(row.nu_min).epsilon(1e-3));
    CHECK(w->nu_max == Approx(row.nu_max).epsilon(1e-3));
  }
}

TEST_CASE("window endpoints invert the certificate formulas") {
  auto table = shared_searcher().search(8.9);
  for (const auto& w : table.certificates) {
    CHECK(w.c1(w.nu_min) == Approx(8.9).epsilon(1e-9));
    CHECK(w.c2(w.nu_max) == Approx(8.9).epsilon(1e-9));
    // interior of the window stays below the threshold
    const double mid = std::sqrt(w.nu_min * w.nu_max);
    CHECK(w.c1(mid) <= 8.9 * (1 + 1e-12));
    CHECK(w.c2(mid) <= 8.9 * (1 + 1e-12));
  }
}

TEST_CASE("windows can be empty or rejected") {
  CHECK_FALSE(window_for(1, 4, 2.0).has_value());
  CHECK_THROWS_AS(window_for(1, 1, 1.5), std::domain_error);  // (1 - t) c <= 1
  CHECK_THROWS_AS(shared_searcher().candidate_windows(1.0), std::domain_error);
}

TEST_CASE("threshold 8.9 reproduces the seven reference windows") {
  auto table = shared_searcher().search(8.9);
  REQUIRE(table.certificates.size() == kTableRows.size());
  CHECK(table.covers_target());
  CHECK(table.covered_lo <= 0.5);
  for (std::size_t i = 0; i < kTableRows.size(); ++i) {
    const auto& w = table.certificates[i];
    const auto& r = kTableRows[i];
    CHECK(w.k1 == r.k1);
    CHECK(w.j0 == r.j0);
    CHECK(w.t == Approx(r.t).margin(5e-6));
    CHECK(w.nu_min == Approx(r.nu_min).epsilon(1e-3));
    CHECK(w.nu_max == Approx(r.nu_max).epsilon(1e-3));
  }
}

TEST_CASE("threshold 5.9 yields the thirty-two window chain") {
  auto table = shared_searcher().search(5.9);
  CHECK(table.certificates.size() == 32);
  CHECK(table.covers_target());
  for (std::size_t i = 1; i < table.certificates.size(); ++i)
    CHECK(table.certificates[i].nu_min <= table.certificates[i - 1].nu_max);
}

TEST_CASE("threshold 5.0 reports gaps") {
  auto table = shared_searcher().search(5.0);
  CHECK_FALSE(table.covers_target());
  CHECK_FALSE(table.gaps.empty());
  for (const auto& g : table.gaps) {
    CHECK(g.first < g.second);
    CHECK(g.first < 100.0);
  }
}

TEST_CASE("threshold 6.0 covers without gaps") {
  CHECK(shared_searcher().search(6.0).covers_target());
}

TEST_CASE("coverage breakdown threshold sits near 5.83") {
  const double c = shared_searcher().breakdown_threshold(5.0, 7.0, 0.005);
  CHECK(c >= 5.78);
  CHECK(c <= 5.88);
  CHECK_THROWS_AS(shared_searcher().breakdown_threshold(5.0, 7.0, 0.5), std::domain_error);
}

TEST_CASE("certified constants dispatch across the three regimes") {
  auto table = shared_searcher().search(8.9);

  auto [c1_half, c2_half] = global_c1_c2(0.5, table);
  CHECK(c2_half == Approx(2.2133).margin(1e-4));
  CHECK(c1_half == Approx(c2_half / 0.25).epsilon(1e-12));

  const double t11 = tail_norm(1, 1);
  auto [c1_one, c2_one] = global_c1_c2(1.0, table);
  CHECK(c1_one == Approx((1.0 + 1.0) / (1.0 - t11)).epsilon(1e-12));
  CHECK(c2_one == Approx(c1_one).epsilon(1e-12));

  auto [c1_150, c2_150] = global_c1_c2(150.0, table);
  CHECK(c1_150 <= 8.985);
  CHECK(c2_150 <= 8.985);

  CHECK_THROWS_AS(global_c1_c2(0.0, table), std::domain_error);
  CHECK_THROWS_AS(global_c1_c2(1.0, shared_searcher().search(5.0)), std::invalid_argument);
}

TEST_CASE("small-nu constants use the exact closed form") {
  auto table = shared_searcher().search(8.9);
  const double t11 = std::sqrt(1.0 - 8.0 / (std::numbers::pi * std::numbers::pi));
  for (double nu : {0.05, 0.2, 0.3, 0.5}) {
    auto [c1v, c2v] = global_c1_c2(nu, table);
    CHECK(c2v == Approx((1.0 + nu * nu) / (1.0 - t11)).epsilon(1e-14));
    CHECK(c1v == Approx(c2v / (nu * nu)).epsilon(1e-14));
  }
}

TEST_CASE("certified constants stay under the global envelope") {
  auto table = shared_searcher().search(8.9);
  for (int i = 0; i <= 600; ++i) {
    const double nu = 0.01 * std::pow(1e5, i / 600.0);
    auto [c1v, c2v] = global_c1_c2(nu, table);
    CHECK(c1v <= std::max(9.0, 2.25 / (nu * nu)) * (1 + 1e-12));
    CHECK(c2v <= 9.0 * (1 + 1e-12));
  }
}

TEST_CASE("strip inequality holds for unit basis vectors") {
  Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(8);
  e1(0) = 1.0;
  CHECK(strip_inequality_check(e1, 1.0, std::max(9.0, 2.25), 9.0).residual >= -1e-12);
  Eigen::VectorXcd e2 = Eigen::VectorXcd::Zero(8);
  e2(1) = 1.0;
  for (double nu : {0.3, 1.0, 7.0, 60.0}) {
    const double c1 = std::max(9.0, 2.25 / (nu * nu));
    CHECK(strip_inequality_check(e2, nu, c1, 9.0).residual >= -1e-12);
  }
}

TEST_CASE("strip inequality holds for random unit vectors") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> lognu(std::log(0.01), std::log(100.0));
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXcd b(200);
    for (int i = 0; i < 200; ++i) b(i) = std::complex<double>(gauss(rng), gauss(rng));
    b.normalize();
    const double nu = std::exp(lognu(rng));
    const double c1 = std::max(9.0, 2.25 / (nu * nu));
    CHECK(strip_inequality_check(b, nu, c1, 9.0).residual >= -1e-10);
    // the variant without the constant mode passes with both constants at 9
    CHECK(strip_inequality_check(b, nu, 9.0, 9.0, false).residual >= -1e-10);
  }
}

TEST_CASE("strip inequality charges the cosine tail conservatively") {
  Eigen::VectorXcd top = Eigen::VectorXcd::Zero(200);
  top(199) = 1.0;  // worst case for the truncated cosine expansion
  auto chk = strip_inequality_check(top, 50.0, 9.0, 9.0);
  CHECK(chk.a_tail_mass > 0.0);
  CHECK(chk.residual >= 0.0);
}

TEST_CASE("envelope table reports the tabulated range") {
  auto table = shared_searcher().search(8.9);
  CHECK(table.covered_lo == Approx(table.certificates.front().nu_min));
  CHECK(table.covered_hi == Approx(table.certificates.back().nu_max));
  CHECK(table.covered_hi >= 140.0);
}
