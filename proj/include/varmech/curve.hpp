#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace varmech {

struct TimeInterval {
  double t0;
  double t1;

  double span() const { return t1 - t0; }
  /// Slack absorbs roundoff at the endpoints.
  bool contains(double t) const;
  bool contains(const TimeInterval& sub) const;
};

bool same_interval(const TimeInterval& a, const TimeInterval& b);

namespace detail {

/// Shared representation behind motions, displacements and covector curves:
/// either a closed-form map with (optionally) a closed-form derivative, or a
/// uniform grid with C1 cubic-Hermite interpolation. Grid node derivatives
/// are either supplied or computed by 4th-order finite differences (central
/// in the interior, one-sided at the ends, so endpoint evaluations keep full
/// order).
///
/// Cores are immutable and shared; restriction to a subinterval is a view
/// that delegates evaluation to its parent.
class CurveCore {
 public:
  using VecFn = std::function<std::vector<double>(double)>;

  static std::shared_ptr<const CurveCore> closed_form(TimeInterval iv, int dim,
                                                      VecFn value, VecFn deriv);
  /// values[i] is the node value at t0 + i*h; all rows must have size dim and
  /// there must be at least 9 nodes (8 panels).
  static std::shared_ptr<const CurveCore> grid(
      TimeInterval iv, int dim, std::vector<std::vector<double>> values,
      std::optional<std::vector<std::vector<double>>> derivs);
  static std::shared_ptr<const CurveCore> view(std::shared_ptr<const CurveCore> parent,
                                               TimeInterval sub);

  std::vector<double> eval(double t) const;
  std::vector<double> deriv(double t) const;

  const TimeInterval& interval() const { return iv_; }
  int dim() const { return dim_; }

  /// Grid spacing of the underlying grid, looked up through views; empty for
  /// closed forms.
  std::optional<double> grid_step() const;

  /// The view's parent core (null for direct curves).
  std::shared_ptr<const CurveCore> view_parent() const {
    return kind_ == Kind::kView ? parent_ : nullptr;
  }

  /// Direct-grid accessors (throw for closed forms and views).
  int node_count() const;
  double node_time(int i) const;
  std::span<const double> node_value(int i) const;
  std::span<const double> node_deriv(int i) const;

 private:
  CurveCore() = default;

  enum class Kind { kClosedForm, kGrid, kView };

  void check_inside(double t) const;
  std::vector<double> hermite(double t, bool derivative) const;

  Kind kind_ = Kind::kClosedForm;
  TimeInterval iv_{0.0, 1.0};
  int dim_ = 0;

  // closed form
  VecFn value_fn_;
  VecFn deriv_fn_;  // may be empty; falls back to finite differences

  // grid (flattened rows of length dim_)
  int nodes_ = 0;
  double h_ = 0.0;
  std::vector<double> values_;
  std::vector<double> derivs_;

  // view
  std::shared_ptr<const CurveCore> parent_;
};

using CorePtr = std::shared_ptr<const CurveCore>;

}  // namespace detail
}  // namespace varmech
