#pragma once

#include <cstddef>
#include <vector>

namespace varmech {

/// Dense square matrix, row-major. Dimensions here are tiny (the dimension of
/// the configuration space), so everything is direct dense arithmetic.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(int n) : n_(n), a_(static_cast<size_t>(n) * n, 0.0) {}
  SquareMatrix(int n, std::vector<double> entries);

  static SquareMatrix identity(int n);

  int dim() const { return n_; }
  double& at(int i, int j) { return a_[static_cast<size_t>(i) * n_ + j]; }
  double at(int i, int j) const { return a_[static_cast<size_t>(i) * n_ + j]; }
  const std::vector<double>& data() const { return a_; }

  /// max_i sum_j |a_ij|
  double inf_norm() const;
  /// max_ij |a_ij - a_ji|
  double asymmetry() const;
  SquareMatrix transposed() const;
  SquareMatrix symmetrized() const;

 private:
  int n_ = 0;
  std::vector<double> a_;
};

/// Lower-triangular Cholesky factor of an SPD matrix.
/// Throws SingularMatrixError if the matrix is not positive-definite.
SquareMatrix cholesky(const SquareMatrix& spd);

/// Solve (L L^T) x = b given the Cholesky factor L.
std::vector<double> cholesky_solve(const SquareMatrix& chol_lower,
                                   const std::vector<double>& b);

/// LU factorization with partial pivoting, for general (possibly indefinite)
/// matrices such as velocity Hessians.
struct LuFactors {
  SquareMatrix lu;
  std::vector<int> perm;
};

/// Throws SingularMatrixError on a zero pivot.
LuFactors lu_factor(const SquareMatrix& a);
std::vector<double> lu_solve(const LuFactors& f, const std::vector<double>& b);

/// Inverse via LU; throws SingularMatrixError if singular.
SquareMatrix invert(const SquareMatrix& a);

/// Condition number estimate in the inf norm: |A| * |A^-1|.
/// Returns +inf when the matrix is singular.
double condition_inf(const SquareMatrix& a);

std::vector<double> mat_vec(const SquareMatrix& a, const std::vector<double>& x);

}  // namespace varmech
