#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

// Dense linear algebra for the small (order <= 8) matrices that show up in
// observer and closed-loop error dynamics.
namespace adrc::smallmat {

inline constexpr std::size_t kMaxOrder = 8;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class LyapunovError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Row-major fixed-capacity matrix, 1 <= rows, cols <= kMaxOrder.
class Mat {
 public:
  Mat(std::size_t rows, std::size_t cols);
  Mat(std::size_t rows, std::size_t cols, std::initializer_list<double> row_major);

  static Mat identity(std::size_t n);
  static Mat diagonal(std::span<const double> d);
  static Mat column(std::span<const double> v);
  static Mat row(std::span<const double> v);

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }
  [[nodiscard]] bool square() const { return rows_ == cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  [[nodiscard]] Mat transposed() const;
  [[nodiscard]] std::span<const double> entries() const { return {data_.data(), rows_ * cols_}; }

  Mat& operator+=(const Mat& o);
  Mat& operator-=(const Mat& o);
  Mat& operator*=(double s);

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::array<double, kMaxOrder * kMaxOrder> data_{};
};

Mat operator+(Mat a, const Mat& b);
Mat operator-(Mat a, const Mat& b);
Mat operator*(Mat a, double s);
Mat operator*(double s, Mat a);
Mat operator*(const Mat& a, const Mat& b);

// Symmetric matrix. Construction rejects inputs whose asymmetry exceeds
// kSymmetryTol relative to the largest entry.
class SymMat {
 public:
  static constexpr double kSymmetryTol = 1e-12;

  explicit SymMat(const Mat& m);
  static SymMat identity(std::size_t n, double scale = 1.0);

  [[nodiscard]] std::size_t order() const { return m_.rows(); }
  double operator()(std::size_t r, std::size_t c) const { return m_(r, c); }
  [[nodiscard]] const Mat& mat() const { return m_; }

 private:
  struct Unchecked {};
  SymMat(const Mat& m, Unchecked) : m_(m) {}
  friend SymMat symmetrized(const Mat& m);

  Mat m_;
};

// (M + M^T) / 2 without the symmetry check.
SymMat symmetrized(const Mat& m);

std::vector<double> mat_apply(const Mat& a, std::span<const double> x);

double vector_norm(std::span<const double> x);

// Largest singular value.
double operator_norm(const Mat& a);

struct EigExtremes {
  double min;
  double max;
};

// All eigenvalues in ascending order (cyclic Jacobi).
std::vector<double> symmetric_eigenvalues(const SymMat& s);
EigExtremes eig_extremes(const SymMat& s);

// Monic characteristic polynomial det(sI - A) as [1, c1, ..., cn], highest
// power first. Hessenberg inputs (or inputs whose transpose is Hessenberg)
// are expanded directly; anything else is first reduced by stabilized
// elementary similarity transforms.
std::vector<double> characteristic_polynomial(const Mat& a);

// Routh-Hurwitz test: every eigenvalue strictly in the open left half plane.
bool is_hurwitz(const Mat& a);

// Solves H P + P H^T + Q = 0 for symmetric positive definite P.
// Throws LyapunovError when H is not Hurwitz, the vectorized system is
// singular, or the result is not positive definite.
SymMat solve_lyapunov(const Mat& h, const SymMat& q);

// Operator norm of H P + P H^T + Q.
double lyapunov_residual(const Mat& h, const SymMat& p, const SymMat& q);

}  // namespace adrc::smallmat
