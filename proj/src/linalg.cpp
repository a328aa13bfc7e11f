#include "varmech/linalg.hpp"

#include <cmath>
#include <limits>

#include "varmech/error.hpp"

namespace varmech {

SquareMatrix::SquareMatrix(int n, std::vector<double> entries) : n_(n), a_(std::move(entries)) {
  if (n < 1) throw DimensionError("matrix dimension must be >= 1");
  if (a_.size() != static_cast<size_t>(n) * n)
    throw DimensionError("matrix entry count does not match dimension");
}

SquareMatrix SquareMatrix::identity(int n) {
  SquareMatrix m(n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

double SquareMatrix::inf_norm() const {
  double best = 0.0;
  for (int i = 0; i < n_; ++i) {
    double row = 0.0;
    for (int j = 0; j < n_; ++j) row += std::abs(at(i, j));
    best = std::max(best, row);
  }
  return best;
}

double SquareMatrix::asymmetry() const {
  double best = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) best = std::max(best, std::abs(at(i, j) - at(j, i)));
  return best;
}

SquareMatrix SquareMatrix::transposed() const {
  SquareMatrix m(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) m.at(j, i) = at(i, j);
  return m;
}

SquareMatrix SquareMatrix::symmetrized() const {
  SquareMatrix m(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) m.at(i, j) = 0.5 * (at(i, j) + at(j, i));
  return m;
}

SquareMatrix cholesky(const SquareMatrix& spd) {
  const int n = spd.dim();
  SquareMatrix l(n);
  for (int j = 0; j < n; ++j) {
    double d = spd.at(j, j);
    for (int k = 0; k < j; ++k) d -= l.at(j, k) * l.at(j, k);
    if (!(d > 0.0) || !std::isfinite(d))
      throw SingularMatrixError("matrix is not positive-definite");
    l.at(j, j) = std::sqrt(d);
    for (int i = j + 1; i < n; ++i) {
      double s = spd.at(i, j);
      for (int k = 0; k < j; ++k) s -= l.at(i, k) * l.at(j, k);
      l.at(i, j) = s / l.at(j, j);
    }
  }
  return l;
}

std::vector<double> cholesky_solve(const SquareMatrix& l, const std::vector<double>& b) {
  const int n = l.dim();
  if (b.size() != static_cast<size_t>(n)) throw DimensionError("cholesky_solve: size mismatch");
  std::vector<double> y(b);
  // forward: L y = b
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < i; ++k) y[i] -= l.at(i, k) * y[k];
    y[i] /= l.at(i, i);
  }
  // backward: L^T x = y
  for (int i = n - 1; i >= 0; --i) {
    for (int k = i + 1; k < n; ++k) y[i] -= l.at(k, i) * y[k];
    y[i] /= l.at(i, i);
  }
  return y;
}

LuFactors lu_factor(const SquareMatrix& a) {
  const int n = a.dim();
  LuFactors f{a, std::vector<int>(n)};
  for (int i = 0; i < n; ++i) f.perm[i] = i;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = std::abs(f.lu.at(col, col));
    for (int r = col + 1; r < n; ++r) {
      const double v = std::abs(f.lu.at(r, col));
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (!(best > 0.0) || !std::isfinite(best))
      throw SingularMatrixError("matrix is singular");
    if (piv != col) {
      for (int j = 0; j < n; ++j) std::swap(f.lu.at(piv, j), f.lu.at(col, j));
      std::swap(f.perm[piv], f.perm[col]);
    }
    for (int r = col + 1; r < n; ++r) {
      const double m = f.lu.at(r, col) / f.lu.at(col, col);
      f.lu.at(r, col) = m;
      for (int j = col + 1; j < n; ++j) f.lu.at(r, j) -= m * f.lu.at(col, j);
    }
  }
  return f;
}

std::vector<double> lu_solve(const LuFactors& f, const std::vector<double>& b) {
  const int n = f.lu.dim();
  if (b.size() != static_cast<size_t>(n)) throw DimensionError("lu_solve: size mismatch");
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = b[f.perm[i]];
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < i; ++k) x[i] -= f.lu.at(i, k) * x[k];
  for (int i = n - 1; i >= 0; --i) {
    for (int k = i + 1; k < n; ++k) x[i] -= f.lu.at(i, k) * x[k];
    x[i] /= f.lu.at(i, i);
  }
  return x;
}

SquareMatrix invert(const SquareMatrix& a) {
  const int n = a.dim();
  const LuFactors f = lu_factor(a);
  SquareMatrix inv(n);
  std::vector<double> e(n, 0.0);
  for (int j = 0; j < n; ++j) {
    e[j] = 1.0;
    const std::vector<double> col = lu_solve(f, e);
    e[j] = 0.0;
    for (int i = 0; i < n; ++i) inv.at(i, j) = col[i];
  }
  return inv;
}

double condition_inf(const SquareMatrix& a) {
  try {
    return a.inf_norm() * invert(a).inf_norm();
  } catch (const SingularMatrixError&) {
    return std::numeric_limits<double>::infinity();
  }
}

std::vector<double> mat_vec(const SquareMatrix& a, const std::vector<double>& x) {
  const int n = a.dim();
  if (x.size() != static_cast<size_t>(n)) throw DimensionError("mat_vec: size mismatch");
  std::vector<double> y(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) y[i] += a.at(i, j) * x[j];
  return y;
}

}  // namespace varmech
