#pragma once

#include <initializer_list>
#include <span>
#include <vector>

#include "varmech/linalg.hpp"

namespace varmech {

// The configuration space Q is an affine space modelled on a vector space V.
// Points of Q, vectors of V and covectors of V* are all real tuples in a fixed
// origin chart, but they are kept as distinct types: adding two Points or
// pairing two Vectors is a category error this layer refuses to compile.

/// Finite-dimensional affine space, identified by the dimension of its model
/// vector space.
struct AffineSpace {
  int dim;
  explicit AffineSpace(int n);
};

class Point {
 public:
  Point() = default;
  explicit Point(std::vector<double> coords);
  Point(std::initializer_list<double> coords) : Point(std::vector<double>(coords)) {}
  static Point zero(int n) { return Point(std::vector<double>(n, 0.0)); }

  int dim() const { return static_cast<int>(c_.size()); }
  double operator[](int i) const { return c_[i]; }
  std::span<const double> coords() const { return c_; }

  bool operator==(const Point&) const = default;

 private:
  std::vector<double> c_;
};

class Vector {
 public:
  Vector() = default;
  explicit Vector(std::vector<double> comps);
  Vector(std::initializer_list<double> comps) : Vector(std::vector<double>(comps)) {}
  static Vector zero(int n) { return Vector(std::vector<double>(n, 0.0)); }
  static Vector basis(int n, int i);

  int dim() const { return static_cast<int>(c_.size()); }
  double operator[](int i) const { return c_[i]; }
  std::span<const double> comps() const { return c_; }

  Vector operator+(const Vector& o) const;
  Vector operator-(const Vector& o) const;
  Vector operator-() const;
  Vector operator*(double s) const;
  friend Vector operator*(double s, const Vector& v) { return v * s; }

  double inf_norm() const;
  bool operator==(const Vector&) const = default;

 private:
  std::vector<double> c_;
};

class Covector {
 public:
  Covector() = default;
  explicit Covector(std::vector<double> comps);
  Covector(std::initializer_list<double> comps) : Covector(std::vector<double>(comps)) {}
  static Covector zero(int n) { return Covector(std::vector<double>(n, 0.0)); }
  static Covector basis(int n, int i);

  int dim() const { return static_cast<int>(c_.size()); }
  double operator[](int i) const { return c_[i]; }
  std::span<const double> comps() const { return c_; }

  Covector operator+(const Covector& o) const;
  Covector operator-(const Covector& o) const;
  Covector operator-() const;
  Covector operator*(double s) const;
  friend Covector operator*(double s, const Covector& f) { return f * s; }

  double inf_norm() const;
  bool operator==(const Covector&) const = default;

 private:
  std::vector<double> c_;
};

/// Dual pairing <f, v> = sum_i f_i v_i. Bilinear; throws DimensionError on a
/// dimension mismatch.
double pair(const Covector& f, const Vector& v);

/// Affine action of V on Q: coordinates q + v.
Point displace(const Point& q, const Vector& v);

/// The unique vector with displace(q0, difference(q1, q0)) == q1.
Vector difference(const Point& q1, const Point& q0);

/// Euclidean metric g: V -> V*, stored as a symmetric positive-definite
/// matrix. The matrix is symmetrized on construction ((G + G^T)/2) and
/// Cholesky-validated eagerly, so an invalid metric fails at construction
/// rather than at first use.
class Metric {
 public:
  Metric(int n, std::vector<double> row_major);
  explicit Metric(SquareMatrix m);
  static Metric identity(int n);
  static Metric diagonal(std::vector<double> diag);

  int dim() const { return g_.dim(); }
  const SquareMatrix& matrix() const { return g_; }

  /// g(v) in V*.
  Covector apply(const Vector& v) const;
  /// g^{-1}(p) in V, solved through the Cholesky factors.
  Vector inverse_apply(const Covector& p) const;

 private:
  SquareMatrix g_;
  SquareMatrix chol_;
};

/// Free-function forms of the metric action (the names used throughout the
/// operation layer).
Covector metric_apply(const Metric& g, const Vector& v);
Vector metric_inverse_apply(const Metric& g, const Covector& p);

}  // namespace varmech
