#pragma once

// Random expression generator for the parser/derivative cross-checks. Shapes
// that would leave the total domain are avoided at the source: denominators
// and sqrt arguments are built as (c + (.)^2) with c >= 0.5.

#include <string>

#include "test_util.hpp"
#include "varmech/field.hpp"

namespace vmtest {

inline std::string random_expression(Rng& rng, int dim, int depth = 3);

inline std::string random_leaf(Rng& rng, int dim) {
  const int pick = static_cast<int>(rng.uniform(0.0, 4.0));
  char buf[40];
  switch (pick) {
    case 0:
      std::snprintf(buf, sizeof buf, "%.17g", rng.uniform(-2.0, 2.0));
      return buf;
    case 1:
      return "q[" + std::to_string(static_cast<int>(rng.uniform(0.0, dim))) + "]";
    case 2:
      return "qdot[" + std::to_string(static_cast<int>(rng.uniform(0.0, dim))) + "]";
    default:
      return "t";
  }
}

inline std::string random_expression(Rng& rng, int dim, int depth) {
  if (depth <= 0 || rng.uniform(0.0, 1.0) < 0.25) return random_leaf(rng, dim);
  const int pick = static_cast<int>(rng.uniform(0.0, 9.0));
  const auto sub = [&] { return random_expression(rng, dim, depth - 1); };
  char buf[40];
  switch (pick) {
    case 0: return "(" + sub() + "+" + sub() + ")";
    case 1: return "(" + sub() + "-" + sub() + ")";
    case 2: return "(" + sub() + "*" + sub() + ")";
    case 3: {
      std::snprintf(buf, sizeof buf, "%.17g", rng.uniform(0.5, 1.5));
      return "(" + sub() + "/(" + buf + "+(" + sub() + ")^2))";
    }
    case 4: {
      const int e = 2 + static_cast<int>(rng.uniform(0.0, 3.0));
      return "(" + sub() + ")^" + std::to_string(e);
    }
    case 5: return "sin(" + sub() + ")";
    case 6: return "cos(" + sub() + ")";
    case 7: return "exp(" + sub() + ")";
    default: {
      std::snprintf(buf, sizeof buf, "%.17g", rng.uniform(0.5, 1.5));
      return "sqrt(" + std::string(buf) + "+(" + sub() + ")^2)";
    }
  }
}

/// Rejects draws where the value or a derivative is large enough to make the
/// finite-difference comparison ill-conditioned.
inline bool tame_at(const varmech::ScalarField& f, const varmech::Point& q,
                    const varmech::Vector& v, double t) {
  const double val = f.value(q, v, t);
  if (!std::isfinite(val) || std::abs(val) > 1e6) return false;
  const varmech::Covector gq = varmech::partial_q(f, q, v, t);
  const varmech::Covector gv = varmech::partial_qdot(f, q, v, t);
  for (int i = 0; i < q.dim(); ++i) {
    if (!std::isfinite(gq[i]) || std::abs(gq[i]) > 1e6) return false;
    if (!std::isfinite(gv[i]) || std::abs(gv[i]) > 1e6) return false;
  }
  return true;
}

}  // namespace vmtest
