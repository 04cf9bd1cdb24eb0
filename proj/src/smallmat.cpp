#include "adrc/smallmat.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace adrc::smallmat {

namespace {

void check_shape(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0 || rows > kMaxOrder || cols > kMaxOrder) {
    throw DimensionError("matrix shape " + std::to_string(rows) + "x" + std::to_string(cols) +
                         " outside 1.." + std::to_string(kMaxOrder));
  }
}

void require_same_shape(const Mat& a, const Mat& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(op) + ": shape mismatch");
  }
}

bool is_upper_hessenberg(const Mat& a) {
  for (std::size_t i = 2; i < a.rows(); ++i) {
    for (std::size_t j = 0; j + 1 < i; ++j) {
      if (a(i, j) != 0.0) return false;
    }
  }
  return true;
}

// Elementary similarity reduction to upper Hessenberg form with row pivoting.
Mat reduce_to_hessenberg(Mat a) {
  const std::size_t n = a.rows();
  for (std::size_t m = 1; m + 1 < n; ++m) {
    double pivot = 0.0;
    std::size_t i = m;
    for (std::size_t j = m; j < n; ++j) {
      if (std::abs(a(j, m - 1)) > std::abs(pivot)) {
        pivot = a(j, m - 1);
        i = j;
      }
    }
    if (i != m) {
      for (std::size_t j = m - 1; j < n; ++j) std::swap(a(i, j), a(m, j));
      for (std::size_t j = 0; j < n; ++j) std::swap(a(j, i), a(j, m));
    }
    if (pivot == 0.0) continue;
    for (std::size_t r = m + 1; r < n; ++r) {
      const double y = a(r, m - 1) / pivot;
      if (y == 0.0) continue;
      a(r, m - 1) = 0.0;
      for (std::size_t j = m; j < n; ++j) a(r, j) -= y * a(m, j);
      for (std::size_t j = 0; j < n; ++j) a(j, m) += y * a(j, r);
    }
  }
  return a;
}

// Wilkinson's recurrence for the characteristic polynomial of an upper
// Hessenberg matrix. Coefficients are stored lowest degree first.
std::vector<double> hessenberg_charpoly(const Mat& h) {
  const std::size_t n = h.rows();
  std::vector<std::vector<double>> p(n + 1);
  p[0] = {1.0};
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<double> pk(k + 1, 0.0);
    const auto& prev = p[k - 1];
    for (std::size_t d = 0; d < prev.size(); ++d) {
      pk[d + 1] += prev[d];
      pk[d] -= h(k - 1, k - 1) * prev[d];
    }
    double sub = 1.0;
    for (std::size_t i = k - 1; i >= 1; --i) {
      sub *= h(i, i - 1);
      const double w = h(i - 1, k - 1) * sub;
      if (w != 0.0) {
        for (std::size_t d = 0; d < p[i - 1].size(); ++d) pk[d] -= w * p[i - 1][d];
      }
    }
    p[k] = std::move(pk);
  }
  return p[n];
}

// Solves a dense system in place with partial pivoting; returns false when a
// pivot underflows relative to the matrix scale.
bool gauss_solve(std::vector<double>& a, std::vector<double>& b, std::size_t n) {
  double scale = 0.0;
  for (double v : a) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return false;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a[r * n + c]) > std::abs(a[piv * n + c])) piv = r;
    }
    if (std::abs(a[piv * n + c]) <= 1e-14 * scale) return false;
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[piv * n + j], a[c * n + j]);
      std::swap(b[piv], b[c]);
    }
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r * n + c] / a[c * n + c];
      if (f == 0.0) continue;
      for (std::size_t j = c; j < n; ++j) a[r * n + j] -= f * a[c * n + j];
      b[r] -= f * b[c];
    }
  }
  for (std::size_t r = n; r-- > 0;) {
    double s = b[r];
    for (std::size_t j = r + 1; j < n; ++j) s -= a[r * n + j] * b[j];
    b[r] = s / a[r * n + r];
  }
  return true;
}

}  // namespace

Mat::Mat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) { check_shape(rows, cols); }

Mat::Mat(std::size_t rows, std::size_t cols, std::initializer_list<double> row_major) : Mat(rows, cols) {
  if (row_major.size() != rows * cols) {
    throw DimensionError("expected " + std::to_string(rows * cols) + " entries, got " +
                         std::to_string(row_major.size()));
  }
  std::copy(row_major.begin(), row_major.end(), data_.begin());
}

Mat Mat::identity(std::size_t n) {
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Mat Mat::diagonal(std::span<const double> d) {
  Mat m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Mat Mat::column(std::span<const double> v) {
  Mat m(v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
  return m;
}

Mat Mat::row(std::span<const double> v) {
  Mat m(1, v.size());
  for (std::size_t i = 0; i < v.size(); ++i) m(0, i) = v[i];
  return m;
}

Mat Mat::transposed() const {
  Mat t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  }
  return t;
}

Mat& Mat::operator+=(const Mat& o) {
  require_same_shape(*this, o, "operator+");
  for (std::size_t i = 0; i < rows_ * cols_; ++i) data_[i] += o.data_[i];
  return *this;
}

Mat& Mat::operator-=(const Mat& o) {
  require_same_shape(*this, o, "operator-");
  for (std::size_t i = 0; i < rows_ * cols_; ++i) data_[i] -= o.data_[i];
  return *this;
}

Mat& Mat::operator*=(double s) {
  for (std::size_t i = 0; i < rows_ * cols_; ++i) data_[i] *= s;
  return *this;
}

Mat operator+(Mat a, const Mat& b) { return a += b; }
Mat operator-(Mat a, const Mat& b) { return a -= b; }
Mat operator*(Mat a, double s) { return a *= s; }
Mat operator*(double s, Mat a) { return a *= s; }

Mat operator*(const Mat& a, const Mat& b) {
  if (a.cols() != b.rows()) throw DimensionError("operator*: inner dimensions differ");
  Mat c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

SymMat::SymMat(const Mat& m) : m_(m) {
  if (!m.square()) throw DimensionError("SymMat requires a square matrix");
  double scale = 0.0;
  for (double v : m.entries()) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = i + 1; j < m.cols(); ++j) {
      if (std::abs(m(i, j) - m(j, i)) > kSymmetryTol * scale) {
        throw std::invalid_argument("matrix is not symmetric at (" + std::to_string(i) + "," +
                                    std::to_string(j) + ")");
      }
    }
  }
}

SymMat SymMat::identity(std::size_t n, double scale) { return SymMat(Mat::identity(n) * scale, Unchecked{}); }

SymMat symmetrized(const Mat& m) {
  if (!m.square()) throw DimensionError("symmetrized requires a square matrix");
  Mat s = m;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = i + 1; j < m.cols(); ++j) {
      const double v = 0.5 * (m(i, j) + m(j, i));
      s(i, j) = v;
      s(j, i) = v;
    }
  }
  return SymMat(s, SymMat::Unchecked{});
}

std::vector<double> mat_apply(const Mat& a, std::span<const double> x) {
  if (a.cols() != x.size()) {
    throw DimensionError("mat_apply: matrix has " + std::to_string(a.cols()) + " columns, vector has " +
                         std::to_string(x.size()) + " entries");
  }
  std::vector<double> y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

double vector_norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

std::vector<double> symmetric_eigenvalues(const SymMat& s) {
  const std::size_t n = s.order();
  Mat a = s.mat();
  double frob = 0.0;
  for (double v : a.entries()) frob += v * v;
  frob = std::sqrt(frob);

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    }
    if (std::sqrt(off) <= 1e-16 * frob) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
      }
    }
  }

  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

EigExtremes eig_extremes(const SymMat& s) {
  const auto eig = symmetric_eigenvalues(s);
  return {eig.front(), eig.back()};
}

double operator_norm(const Mat& a) {
  const auto ev = symmetric_eigenvalues(symmetrized(a.transposed() * a));
  return std::sqrt(std::max(0.0, ev.back()));
}

std::vector<double> characteristic_polynomial(const Mat& a) {
  if (!a.square()) throw DimensionError("characteristic_polynomial requires a square matrix");
  std::vector<double> low_first;
  if (is_upper_hessenberg(a)) {
    low_first = hessenberg_charpoly(a);
  } else if (const Mat t = a.transposed(); is_upper_hessenberg(t)) {
    low_first = hessenberg_charpoly(t);
  } else {
    low_first = hessenberg_charpoly(reduce_to_hessenberg(a));
  }
  return {low_first.rbegin(), low_first.rend()};
}

bool is_hurwitz(const Mat& a) {
  const auto coeffs = characteristic_polynomial(a);
  const std::size_t n = coeffs.size() - 1;
  for (double c : coeffs) {
    if (!(c > 0.0)) return false;
  }
  if (n <= 2) return true;

  std::vector<double> upper;
  std::vector<double> lower;
  for (std::size_t i = 0; i <= n; i += 2) upper.push_back(coeffs[i]);
  for (std::size_t i = 1; i <= n; i += 2) lower.push_back(coeffs[i]);
  for (std::size_t row = 2; row <= n; ++row) {
    if (!(lower.front() > 0.0)) return false;
    std::vector<double> next(std::max<std::size_t>(upper.size(), 1) - 1, 0.0);
    for (std::size_t j = 0; j < next.size(); ++j) {
      const double u = j + 1 < upper.size() ? upper[j + 1] : 0.0;
      const double l = j + 1 < lower.size() ? lower[j + 1] : 0.0;
      next[j] = (lower.front() * u - upper.front() * l) / lower.front();
    }
    if (next.empty()) next.push_back(0.0);
    upper = std::move(lower);
    lower = std::move(next);
  }
  return lower.front() > 0.0;
}

SymMat solve_lyapunov(const Mat& h, const SymMat& q) {
  if (!h.square() || h.rows() != q.order()) throw DimensionError("solve_lyapunov: H and Q orders differ");
  if (!is_hurwitz(h)) throw LyapunovError("solve_lyapunov: H is not Hurwitz");

  const std::size_t n = h.rows();
  const std::size_t m = n * n;
  // Row-major vec(P): (H P)_ij = sum_k H_ik P_kj, (P H^T)_ij = sum_k P_ik H_jk.
  std::vector<double> k(m * m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t row = i * n + j;
      for (std::size_t c = 0; c < n; ++c) {
        k[row * m + c * n + j] += h(i, c);
        k[row * m + i * n + c] += h(j, c);
      }
    }
  }
  std::vector<double> rhs(m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) rhs[i * n + j] = -q(i, j);
  }

  auto lu = k;
  auto x = rhs;
  if (!gauss_solve(lu, x, m)) throw LyapunovError("solve_lyapunov: vectorized system is singular");

  // One step of iterative refinement.
  std::vector<double> r(m);
  for (std::size_t i = 0; i < m; ++i) {
    long double s = rhs[i];
    for (std::size_t j = 0; j < m; ++j) s -= static_cast<long double>(k[i * m + j]) * x[j];
    r[i] = static_cast<double>(s);
  }
  lu = k;
  if (gauss_solve(lu, r, m)) {
    for (std::size_t i = 0; i < m; ++i) x[i] += r[i];
  }

  Mat p(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) p(i, j) = x[i * n + j];
  }
  SymMat result = symmetrized(p);
  if (!(eig_extremes(result).min > 0.0)) throw LyapunovError("solve_lyapunov: solution is not positive definite");
  return result;
}

double lyapunov_residual(const Mat& h, const SymMat& p, const SymMat& q) {
  return operator_norm(h * p.mat() + p.mat() * h.transposed() + q.mat());
}

}  // namespace adrc::smallmat
