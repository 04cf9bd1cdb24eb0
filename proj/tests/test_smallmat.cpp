#include <catch2/catch_amalgamated.hpp>

#include "adrc/smallmat.hpp"
#include "oracles.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace adrc::smallmat;
using Catch::Approx;

namespace {

Mat from_dense(const oracle::Dense& d) {
  Mat m(d.size(), d[0].size());
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = 0; j < d[0].size(); ++j) m(i, j) = d[i][j];
  return m;
}

oracle::Dense to_dense(const Mat& m) {
  oracle::Dense d(m.rows(), std::vector<double>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) d[i][j] = m(i, j);
  return d;
}

SymMat random_symmetric(std::mt19937_64& rng, std::size_t n) {
  const Mat m = from_dense(oracle::random_matrix(rng, n, n));
  return symmetrized(m + m.transposed());
}

// Observation-error matrix A3 - l3 c3 at bandwidth w.
Mat observer_error_matrix(double w) {
  return Mat(3, 3, {-3 * w, 1, 0, -3 * w * w, 0, 1, -w * w * w, 0, 0});
}

}  // namespace

TEST_CASE("mat_apply", "[smallmat]") {
  SECTION("identity") {
    const std::vector<double> x{1, 2, 3};
    CHECK(mat_apply(Mat::identity(3), x) == x);
  }
  SECTION("shift structure moves entries up") {
    const Mat a3(3, 3, {0, 1, 0, 0, 0, 1, 0, 0, 0});
    const std::vector<double> x{0.3, -1.5, 7.0};
    CHECK(mat_apply(a3, x) == std::vector<double>{-1.5, 7.0, 0.0});
  }
  SECTION("random 5x5 matches triple-loop oracle") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
      const auto a = oracle::random_matrix(rng, 5, 5, 3.0);
      const auto xv = oracle::random_matrix(rng, 1, 5, 2.0)[0];
      const auto expected = oracle::matvec(a, xv);
      const auto got = mat_apply(from_dense(a), xv);
      for (std::size_t i = 0; i < 5; ++i) CHECK(got[i] == Approx(expected[i]).margin(1e-13));
    }
  }
  SECTION("dimension mismatch is rejected") {
    const std::vector<double> x{1, 2};
    CHECK_THROWS_AS(mat_apply(Mat::identity(3), x), DimensionError);
  }
}

TEST_CASE("Mat shape limits", "[smallmat]") {
  CHECK_THROWS_AS(Mat(9, 1), DimensionError);
  CHECK_THROWS_AS(Mat(0, 3), DimensionError);
  CHECK_THROWS_AS(Mat(2, 2, {1, 2, 3}), DimensionError);
  CHECK_THROWS_AS(Mat::identity(2) * Mat::identity(3), DimensionError);
}

TEST_CASE("operator_norm", "[smallmat]") {
  CHECK(operator_norm(Mat::identity(4)) == Approx(1.0).epsilon(1e-12));
  CHECK(operator_norm(Mat(2, 2, {2, 0, 0, 3})) == Approx(3.0).epsilon(1e-12));
  CHECK(operator_norm(Mat(2, 2, {0, 1, 0, 0})) == Approx(1.0).epsilon(1e-12));
  CHECK(operator_norm(Mat(1, 3, {3, 0, 4})) == Approx(5.0).epsilon(1e-12));

  SECTION("bounds the gain along 100 random unit directions") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    const Mat a = from_dense(oracle::random_matrix(rng, 5, 5, 2.0));
    const double norm = operator_norm(a);
    for (int i = 0; i < 100; ++i) {
      std::vector<double> x(5);
      for (auto& v : x) v = g(rng);
      const double len = vector_norm(x);
      for (auto& v : x) v /= len;
      CHECK(vector_norm(mat_apply(a, x)) <= norm * (1 + 1e-12));
    }
  }
}

TEST_CASE("eig_extremes", "[smallmat]") {
  SECTION("diagonal") {
    const auto e = eig_extremes(SymMat(Mat::diagonal(std::vector<double>{1, 2, 3})));
    CHECK(e.min == Approx(1.0).epsilon(1e-12));
    CHECK(e.max == Approx(3.0).epsilon(1e-12));
  }
  SECTION("analytic 2x2") {
    const auto e = eig_extremes(SymMat(Mat(2, 2, {2, 1, 1, 2})));
    CHECK(e.min == Approx(1.0).epsilon(1e-12));
    CHECK(e.max == Approx(3.0).epsilon(1e-12));
  }
  SECTION("random symmetric 5x5 matches characteristic-polynomial bisection") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 10; ++trial) {
      const SymMat s = random_symmetric(rng, 5);
      const auto [lo, hi] = oracle::symmetric_extremes_by_bisection(to_dense(s.mat()));
      const auto e = eig_extremes(s);
      CHECK(e.min == Approx(lo).epsilon(1e-9).margin(1e-12));
      CHECK(e.max == Approx(hi).epsilon(1e-9).margin(1e-12));
      CHECK(e.min <= e.max);
    }
  }
  SECTION("asymmetric input is rejected") {
    CHECK_THROWS_AS(SymMat(Mat(2, 2, {1, 2, 3, 4})), std::invalid_argument);
  }
  SECTION("Rayleigh quotient stays within the extremes") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> g;
    const SymMat s = random_symmetric(rng, 6);
    const auto e = eig_extremes(s);
    for (int i = 0; i < 100; ++i) {
      std::vector<double> x(6);
      for (auto& v : x) v = g(rng);
      const auto sx = mat_apply(s.mat(), x);
      double quad = 0.0;
      double nrm2 = 0.0;
      for (std::size_t k = 0; k < 6; ++k) {
        quad += x[k] * sx[k];
        nrm2 += x[k] * x[k];
      }
      CHECK(quad >= e.min * nrm2 - 1e-12 * nrm2);
      CHECK(quad <= e.max * nrm2 + 1e-12 * nrm2);
    }
  }
}

TEST_CASE("characteristic_polynomial", "[smallmat]") {
  SECTION("observer form gives the injection gains exactly") {
    for (double w : {1.0, 10.0, 100.0}) {
      const auto c = characteristic_polynomial(observer_error_matrix(w));
      REQUIRE(c.size() == 4);
      CHECK(c[0] == 1.0);
      CHECK(c[1] == 3 * w);
      CHECK(c[2] == 3 * w * w);
      CHECK(c[3] == w * w * w);
    }
  }
  SECTION("dense matrix matches Leverrier") {
    std::mt19937_64 rng(3);
    const auto a = oracle::random_matrix(rng, 6, 6);
    const auto expected = oracle::leverrier(a);
    const auto got = characteristic_polynomial(from_dense(a));
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == Approx(double(expected[i])).margin(1e-10));
  }
}

TEST_CASE("is_hurwitz", "[smallmat]") {
  CHECK(is_hurwitz(Mat(1, 1, {-0.1})));
  CHECK_FALSE(is_hurwitz(Mat(1, 1, {0.0})));
  CHECK(is_hurwitz(observer_error_matrix(490.03)));
  CHECK(is_hurwitz(Mat(2, 2, {0, 1, -4, -4})));
  CHECK_FALSE(is_hurwitz(Mat(2, 2, {0, 1, -1, 0})));  // undamped oscillator
  CHECK_FALSE(is_hurwitz(Mat(3, 3, {-1, 0, 0, 0, 1, 0, 0, 0, -2})));
  // s^3 + s^2 + s + 2 has all positive coefficients but a RHP pair.
  CHECK_FALSE(is_hurwitz(Mat(3, 3, {-1, 1, 0, -1, 0, 1, -2, 0, 0})));
}

TEST_CASE("solve_lyapunov", "[smallmat]") {
  SECTION("negative identity") {
    const auto p = solve_lyapunov(Mat::identity(2) * -1.0, SymMat::identity(2));
    CHECK(p(0, 0) == Approx(0.5).epsilon(1e-14));
    CHECK(p(1, 1) == Approx(0.5).epsilon(1e-14));
    CHECK(p(0, 1) == Approx(0.0).margin(1e-15));
  }
  SECTION("scalar") {
    const auto p = solve_lyapunov(Mat(1, 1, {-2.5}), SymMat(Mat(1, 1, {3.0})));
    CHECK(p(0, 0) == Approx(3.0 / 5.0).epsilon(1e-14));
  }
  SECTION("observation-error matrix at unit bandwidth matches the Kronecker oracle") {
    const Mat h = observer_error_matrix(1.0);
    const SymMat q = SymMat::identity(3);
    const auto p = solve_lyapunov(h, q);
    const auto expected = oracle::lyapunov_by_kronecker(to_dense(h), to_dense(q.mat()));
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) CHECK(p(i, j) == Approx(expected[i][j]).epsilon(1e-11));
    CHECK(lyapunov_residual(h, p, q) <= 1e-10);
    CHECK(eig_extremes(p).min > 0.0);
  }
  SECTION("non-Hurwitz input is reported") {
    CHECK_THROWS_AS(solve_lyapunov(Mat::identity(2), SymMat::identity(2)), LyapunovError);
    CHECK_THROWS_AS(solve_lyapunov(Mat(2, 2, {0, 1, -1, 0}), SymMat::identity(2)), LyapunovError);
  }
  SECTION("random Hurwitz matrices give positive definite solutions") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 25; ++trial) {
      const std::size_t n = 2 + trial % 4;
      const Mat m = from_dense(oracle::random_matrix(rng, n, n));
      const Mat h = (m.transposed() * m + Mat::identity(n)) * -1.0;
      const SymMat q = random_symmetric(rng, n);
      const SymMat q_pd = symmetrized(q.mat() * q.mat() + Mat::identity(n));
      const auto p = solve_lyapunov(h, q_pd);
      CHECK(lyapunov_residual(h, p, q_pd) <= 1e-10 * operator_norm(q_pd.mat()));
      CHECK(eig_extremes(p).min > 0.0);
    }
  }
}
