#pragma once

// Independent reference computations used only by the test suites. Nothing
// here calls into the library's numerical routines.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

namespace oracle {

using Dense = std::vector<std::vector<double>>;

inline std::vector<double> matvec(const Dense& a, const std::vector<double>& x) {
  std::vector<double> y(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
  }
  return y;
}

inline Dense matmul(const Dense& a, const Dense& b) {
  Dense c(a.size(), std::vector<double>(b[0].size(), 0.0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b[0].size(); ++j)
      for (std::size_t k = 0; k < b.size(); ++k) c[i][j] += a[i][k] * b[k][j];
  return c;
}

// Faddeev-LeVerrier: returns [1, c1, ..., cn] for det(sI - A).
inline std::vector<long double> leverrier(const Dense& a) {
  const std::size_t n = a.size();
  std::vector<std::vector<long double>> m(n, std::vector<long double>(n, 0.0L));
  std::vector<long double> c(n + 1, 0.0L);
  c[0] = 1.0L;
  for (std::size_t k = 1; k <= n; ++k) {
    // M_k = A M_{k-1} + c_{k-1} I, with M_0 = 0
    std::vector<std::vector<long double>> next(n, std::vector<long double>(n, 0.0L));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        long double s = 0.0L;
        for (std::size_t l = 0; l < n; ++l) s += a[i][l] * m[l][j];
        next[i][j] = s + (i == j ? c[k - 1] : 0.0L);
      }
    }
    m = next;
    long double tr = 0.0L;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l) tr += a[i][l] * m[l][i];
    c[k] = -tr / static_cast<long double>(k);
  }
  return c;
}

inline long double poly_eval(const std::vector<long double>& c, long double x) {
  long double v = 0.0L;
  for (long double ci : c) v = v * x + ci;
  return v;
}

// Extreme roots of a real-rooted polynomial found by scanning for sign
// changes inside the Gershgorin interval and bisecting.
inline std::pair<double, double> symmetric_extremes_by_bisection(const Dense& s) {
  const auto c = leverrier(s);
  double lo = 0.0;
  double hi = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    double r = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j)
      if (j != i) r += std::abs(s[i][j]);
    lo = std::min(lo, s[i][i] - r);
    hi = std::max(hi, s[i][i] + r);
  }
  lo -= 1.0;
  hi += 1.0;
  const int grid = 20000;
  std::vector<long double> xs(grid + 1);
  for (int i = 0; i <= grid; ++i) xs[i] = lo + (hi - lo) * i / grid;
  auto bisect = [&](long double a, long double b) {
    long double fa = poly_eval(c, a);
    for (int it = 0; it < 200; ++it) {
      const long double m = 0.5L * (a + b);
      const long double fm = poly_eval(c, m);
      if ((fm < 0) == (fa < 0)) {
        a = m;
        fa = fm;
      } else {
        b = m;
      }
    }
    return static_cast<double>(0.5L * (a + b));
  };
  double first = NAN;
  double last = NAN;
  for (int i = 0; i < grid; ++i) {
    const long double f0 = poly_eval(c, xs[i]);
    const long double f1 = poly_eval(c, xs[i + 1]);
    if ((f0 < 0) != (f1 < 0) || f1 == 0.0L) {
      if (std::isnan(first)) first = bisect(xs[i], xs[i + 1]);
      last = bisect(xs[i], xs[i + 1]);
    }
  }
  return {first, last};
}

// Solves H P + P H^T + Q = 0 through the Kronecker form
// (I (x) H + H (x) I) vec(P) = -vec(Q) with column-major vec and full-pivot
// Gauss-Jordan elimination in extended precision.
inline Dense lyapunov_by_kronecker(const Dense& h, const Dense& q) {
  const std::size_t n = h.size();
  const std::size_t m = n * n;
  std::vector<std::vector<long double>> k(m, std::vector<long double>(m + 1, 0.0L));
  // column-major index of P_{ij} is j*n + i
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t d = 0; d < n; ++d) {
          long double v = 0.0L;
          // (I (x) H)_{(b,a),(d,c)} = I_bd H_ac
          if (b == d) v += h[a][c];
          // (H (x) I)_{(b,a),(d,c)} = H_bd I_ac
          if (a == c) v += h[b][d];
          k[b * n + a][d * n + c] = v;
        }
      }
    }
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) k[b * n + a][m] = -q[a][b];

  std::vector<std::size_t> col(m);
  for (std::size_t i = 0; i < m; ++i) col[i] = i;
  for (std::size_t p = 0; p < m; ++p) {
    std::size_t br = p;
    std::size_t bc = p;
    long double best = 0.0L;
    for (std::size_t r = p; r < m; ++r)
      for (std::size_t c = p; c < m; ++c)
        if (std::abs(k[r][c]) > best) {
          best = std::abs(k[r][c]);
          br = r;
          bc = c;
        }
    std::swap(k[p], k[br]);
    if (bc != p) {
      for (auto& row : k) std::swap(row[p], row[bc]);
      std::swap(col[p], col[bc]);
    }
    const long double piv = k[p][p];
    for (std::size_t c = p; c <= m; ++c) k[p][c] /= piv;
    for (std::size_t r = 0; r < m; ++r) {
      if (r == p || k[r][p] == 0.0L) continue;
      const long double f = k[r][p];
      for (std::size_t c = p; c <= m; ++c) k[r][c] -= f * k[p][c];
    }
  }
  std::vector<long double> x(m);
  for (std::size_t i = 0; i < m; ++i) x[col[i]] = k[i][m];
  Dense p(n, std::vector<double>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) p[a][b] = static_cast<double>(x[b * n + a]);
  return p;
}

// Trapezoidal integral on a uniform grid.
inline double trapezoid(const std::vector<double>& f, double dt) {
  if (f.size() < 2) return 0.0;
  double s = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
  return s * dt;
}

inline Dense random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Dense m(r, std::vector<double>(c));
  for (auto& row : m)
    for (auto& v : row) v = u(rng);
  return m;
}

}  // namespace oracle
