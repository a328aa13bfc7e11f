#include "varmech/affine.hpp"

#include <cmath>

#include "varmech/error.hpp"

namespace varmech {

namespace {

void require_finite(std::span<const double> xs, const char* what) {
  for (double x : xs)
    if (!std::isfinite(x)) throw DomainError(std::string(what) + ": non-finite entry");
}

void require_same_dim(int a, int b, const char* what) {
  if (a != b) throw DimensionError(std::string(what) + ": dimension mismatch");
}

}  // namespace

AffineSpace::AffineSpace(int n) : dim(n) {
  if (n < 1) throw DimensionError("affine space dimension must be >= 1");
}

Point::Point(std::vector<double> coords) : c_(std::move(coords)) {
  require_finite(c_, "Point");
}

Vector::Vector(std::vector<double> comps) : c_(std::move(comps)) {
  require_finite(c_, "Vector");
}

Vector Vector::basis(int n, int i) {
  std::vector<double> c(n, 0.0);
  c.at(i) = 1.0;
  return Vector(std::move(c));
}

Vector Vector::operator+(const Vector& o) const {
  require_same_dim(dim(), o.dim(), "Vector+");
  std::vector<double> r(c_);
  for (int i = 0; i < dim(); ++i) r[i] += o.c_[i];
  return Vector(std::move(r));
}

Vector Vector::operator-(const Vector& o) const {
  require_same_dim(dim(), o.dim(), "Vector-");
  std::vector<double> r(c_);
  for (int i = 0; i < dim(); ++i) r[i] -= o.c_[i];
  return Vector(std::move(r));
}

Vector Vector::operator-() const {
  std::vector<double> r(c_);
  for (double& x : r) x = -x;
  return Vector(std::move(r));
}

Vector Vector::operator*(double s) const {
  std::vector<double> r(c_);
  for (double& x : r) x *= s;
  return Vector(std::move(r));
}

double Vector::inf_norm() const {
  double m = 0.0;
  for (double x : c_) m = std::max(m, std::abs(x));
  return m;
}

Covector::Covector(std::vector<double> comps) : c_(std::move(comps)) {
  require_finite(c_, "Covector");
}

Covector Covector::basis(int n, int i) {
  std::vector<double> c(n, 0.0);
  c.at(i) = 1.0;
  return Covector(std::move(c));
}

Covector Covector::operator+(const Covector& o) const {
  require_same_dim(dim(), o.dim(), "Covector+");
  std::vector<double> r(c_);
  for (int i = 0; i < dim(); ++i) r[i] += o.c_[i];
  return Covector(std::move(r));
}

Covector Covector::operator-(const Covector& o) const {
  require_same_dim(dim(), o.dim(), "Covector-");
  std::vector<double> r(c_);
  for (int i = 0; i < dim(); ++i) r[i] -= o.c_[i];
  return Covector(std::move(r));
}

Covector Covector::operator-() const {
  std::vector<double> r(c_);
  for (double& x : r) x = -x;
  return Covector(std::move(r));
}

Covector Covector::operator*(double s) const {
  std::vector<double> r(c_);
  for (double& x : r) x *= s;
  return Covector(std::move(r));
}

double Covector::inf_norm() const {
  double m = 0.0;
  for (double x : c_) m = std::max(m, std::abs(x));
  return m;
}

double pair(const Covector& f, const Vector& v) {
  require_same_dim(f.dim(), v.dim(), "pair");
  double s = 0.0;
  for (int i = 0; i < f.dim(); ++i) s += f[i] * v[i];
  return s;
}

Point displace(const Point& q, const Vector& v) {
  require_same_dim(q.dim(), v.dim(), "displace");
  std::vector<double> r(q.coords().begin(), q.coords().end());
  for (int i = 0; i < q.dim(); ++i) r[i] += v[i];
  return Point(std::move(r));
}

Vector difference(const Point& q1, const Point& q0) {
  require_same_dim(q1.dim(), q0.dim(), "difference");
  std::vector<double> r(q1.coords().begin(), q1.coords().end());
  for (int i = 0; i < q1.dim(); ++i) r[i] -= q0[i];
  return Vector(std::move(r));
}

Metric::Metric(int n, std::vector<double> row_major)
    : Metric(SquareMatrix(n, std::move(row_major))) {}

Metric::Metric(SquareMatrix m) : g_(m.symmetrized()), chol_(cholesky(g_)) {}

Metric Metric::identity(int n) { return Metric(SquareMatrix::identity(n)); }

Metric Metric::diagonal(std::vector<double> diag) {
  const int n = static_cast<int>(diag.size());
  SquareMatrix m(n);
  for (int i = 0; i < n; ++i) m.at(i, i) = diag[i];
  return Metric(std::move(m));
}

Covector Metric::apply(const Vector& v) const {
  require_same_dim(dim(), v.dim(), "Metric::apply");
  return Covector(mat_vec(g_, std::vector<double>(v.comps().begin(), v.comps().end())));
}

Vector Metric::inverse_apply(const Covector& p) const {
  require_same_dim(dim(), p.dim(), "Metric::inverse_apply");
  return Vector(cholesky_solve(chol_, std::vector<double>(p.comps().begin(), p.comps().end())));
}

Covector metric_apply(const Metric& g, const Vector& v) { return g.apply(v); }
Vector metric_inverse_apply(const Metric& g, const Covector& p) { return g.inverse_apply(p); }

}  // namespace varmech
