#include "varmech/curve.hpp"

#include <cmath>
#include <limits>

#include "varmech/error.hpp"

namespace varmech {

namespace {

double slack_for(const TimeInterval& iv) {
  return 1e-9 * std::max(1.0, std::abs(iv.span())) +
         8.0 * std::numeric_limits<double>::epsilon() *
             std::max(std::abs(iv.t0), std::abs(iv.t1));
}

}  // namespace

bool TimeInterval::contains(double t) const {
  const double s = slack_for(*this);
  return t >= t0 - s && t <= t1 + s;
}

bool TimeInterval::contains(const TimeInterval& sub) const {
  return contains(sub.t0) && contains(sub.t1) && sub.t0 < sub.t1;
}

bool same_interval(const TimeInterval& a, const TimeInterval& b) {
  const double s = std::max(slack_for(a), slack_for(b));
  return std::abs(a.t0 - b.t0) <= s && std::abs(a.t1 - b.t1) <= s;
}

namespace detail {

CorePtr CurveCore::closed_form(TimeInterval iv, int dim, VecFn value, VecFn deriv) {
  if (!(iv.t0 < iv.t1)) throw DomainError("curve interval requires t0 < t1");
  if (dim < 1) throw DimensionError("curve dimension must be >= 1");
  if (!value) throw Error("closed-form curve requires a value map");
  auto c = std::shared_ptr<CurveCore>(new CurveCore);
  c->kind_ = Kind::kClosedForm;
  c->iv_ = iv;
  c->dim_ = dim;
  c->value_fn_ = std::move(value);
  c->deriv_fn_ = std::move(deriv);
  return c;
}

CorePtr CurveCore::grid(TimeInterval iv, int dim, std::vector<std::vector<double>> values,
                        std::optional<std::vector<std::vector<double>>> derivs) {
  if (!(iv.t0 < iv.t1)) throw DomainError("curve interval requires t0 < t1");
  if (dim < 1) throw DimensionError("curve dimension must be >= 1");
  const int nodes = static_cast<int>(values.size());
  if (nodes < 9) throw DomainError("grid curve requires at least 8 panels (9 nodes)");
  if (derivs && static_cast<int>(derivs->size()) != nodes)
    throw DimensionError("grid curve: derivative row count mismatch");

  auto c = std::shared_ptr<CurveCore>(new CurveCore);
  c->kind_ = Kind::kGrid;
  c->iv_ = iv;
  c->dim_ = dim;
  c->nodes_ = nodes;
  c->h_ = iv.span() / (nodes - 1);
  c->values_.reserve(static_cast<size_t>(nodes) * dim);
  for (const auto& row : values) {
    if (static_cast<int>(row.size()) != dim)
      throw DimensionError("grid curve: value row dimension mismatch");
    c->values_.insert(c->values_.end(), row.begin(), row.end());
  }
  if (derivs) {
    c->derivs_.reserve(static_cast<size_t>(nodes) * dim);
    for (const auto& row : *derivs) {
      if (static_cast<int>(row.size()) != dim)
        throw DimensionError("grid curve: derivative row dimension mismatch");
      c->derivs_.insert(c->derivs_.end(), row.begin(), row.end());
    }
  } else {
    // 4th-order finite differences on the uniform grid. One-sided stencils at
    // the two nodes next to each end keep the full order there.
    c->derivs_.assign(static_cast<size_t>(nodes) * dim, 0.0);
    const double inv12h = 1.0 / (12.0 * c->h_);
    auto v = [&](int i, int k) { return c->values_[static_cast<size_t>(i) * dim + k]; };
    for (int k = 0; k < dim; ++k) {
      const int n = nodes - 1;
      auto& d = c->derivs_;
      auto set = [&](int i, double val) { d[static_cast<size_t>(i) * dim + k] = val; };
      set(0, (-25.0 * v(0, k) + 48.0 * v(1, k) - 36.0 * v(2, k) + 16.0 * v(3, k) -
              3.0 * v(4, k)) * inv12h);
      set(1, (-3.0 * v(0, k) - 10.0 * v(1, k) + 18.0 * v(2, k) - 6.0 * v(3, k) +
              v(4, k)) * inv12h);
      for (int i = 2; i <= n - 2; ++i)
        set(i, (v(i - 2, k) - 8.0 * v(i - 1, k) + 8.0 * v(i + 1, k) - v(i + 2, k)) * inv12h);
      set(n - 1, (-v(n - 4, k) + 6.0 * v(n - 3, k) - 18.0 * v(n - 2, k) +
                  10.0 * v(n - 1, k) + 3.0 * v(n, k)) * inv12h);
      set(n, (3.0 * v(n - 4, k) - 16.0 * v(n - 3, k) + 36.0 * v(n - 2, k) -
              48.0 * v(n - 1, k) + 25.0 * v(n, k)) * inv12h);
    }
  }
  return c;
}

CorePtr CurveCore::view(CorePtr parent, TimeInterval sub) {
  if (!parent->iv_.contains(sub))
    throw DomainError("curve restriction: subinterval not contained in the domain");
  auto c = std::shared_ptr<CurveCore>(new CurveCore);
  c->kind_ = Kind::kView;
  c->iv_ = sub;
  c->dim_ = parent->dim_;
  c->parent_ = std::move(parent);
  return c;
}

void CurveCore::check_inside(double t) const {
  if (!iv_.contains(t))
    throw DomainError("curve evaluated outside its interval");
}

std::vector<double> CurveCore::hermite(double t, bool derivative) const {
  int cell = static_cast<int>(std::floor((t - iv_.t0) / h_));
  cell = std::max(0, std::min(cell, nodes_ - 2));
  const double s = (t - (iv_.t0 + cell * h_)) / h_;
  const double* y0 = &values_[static_cast<size_t>(cell) * dim_];
  const double* y1 = &values_[static_cast<size_t>(cell + 1) * dim_];
  const double* d0 = &derivs_[static_cast<size_t>(cell) * dim_];
  const double* d1 = &derivs_[static_cast<size_t>(cell + 1) * dim_];
  std::vector<double> out(dim_);
  if (!derivative) {
    const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
    const double h10 = s * (1.0 - s) * (1.0 - s);
    const double h01 = s * s * (3.0 - 2.0 * s);
    const double h11 = s * s * (s - 1.0);
    for (int k = 0; k < dim_; ++k)
      out[k] = h00 * y0[k] + h10 * h_ * d0[k] + h01 * y1[k] + h11 * h_ * d1[k];
  } else {
    const double g00 = (6.0 * s * s - 6.0 * s) / h_;
    const double g10 = 3.0 * s * s - 4.0 * s + 1.0;
    const double g01 = (-6.0 * s * s + 6.0 * s) / h_;
    const double g11 = 3.0 * s * s - 2.0 * s;
    for (int k = 0; k < dim_; ++k)
      out[k] = g00 * y0[k] + g10 * d0[k] + g01 * y1[k] + g11 * d1[k];
  }
  return out;
}

std::vector<double> CurveCore::eval(double t) const {
  check_inside(t);
  switch (kind_) {
    case Kind::kClosedForm: return value_fn_(t);
    case Kind::kGrid: return hermite(t, false);
    case Kind::kView: return parent_->eval(t);
  }
  throw Error("corrupt curve");
}

std::vector<double> CurveCore::deriv(double t) const {
  check_inside(t);
  switch (kind_) {
    case Kind::kClosedForm: {
      if (deriv_fn_) return deriv_fn_(t);
      // Fallback central difference, shifted inward near the endpoints.
      const double h = 1e-6 * std::max(1.0, std::abs(t));
      double a = t - h, b = t + h;
      if (a < iv_.t0) { a = iv_.t0; b = std::min(iv_.t1, a + 2.0 * h); }
      if (b > iv_.t1) { b = iv_.t1; a = std::max(iv_.t0, b - 2.0 * h); }
      const std::vector<double> fa = value_fn_(a);
      const std::vector<double> fb = value_fn_(b);
      std::vector<double> out(dim_);
      for (int k = 0; k < dim_; ++k) out[k] = (fb[k] - fa[k]) / (b - a);
      return out;
    }
    case Kind::kGrid: return hermite(t, true);
    case Kind::kView: return parent_->deriv(t);
  }
  throw Error("corrupt curve");
}

std::optional<double> CurveCore::grid_step() const {
  switch (kind_) {
    case Kind::kClosedForm: return std::nullopt;
    case Kind::kGrid: return h_;
    case Kind::kView: return parent_->grid_step();
  }
  return std::nullopt;
}

int CurveCore::node_count() const {
  if (kind_ != Kind::kGrid) throw Error("node access requires a direct grid curve");
  return nodes_;
}

double CurveCore::node_time(int i) const {
  if (kind_ != Kind::kGrid) throw Error("node access requires a direct grid curve");
  return iv_.t0 + i * h_;
}

std::span<const double> CurveCore::node_value(int i) const {
  if (kind_ != Kind::kGrid) throw Error("node access requires a direct grid curve");
  return {&values_[static_cast<size_t>(i) * dim_], static_cast<size_t>(dim_)};
}

std::span<const double> CurveCore::node_deriv(int i) const {
  if (kind_ != Kind::kGrid) throw Error("node access requires a direct grid curve");
  return {&derivs_[static_cast<size_t>(i) * dim_], static_cast<size_t>(dim_)};
}

}  // namespace detail
}  // namespace varmech
