#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "varmech/dual.hpp"
#include "varmech/error.hpp"

namespace varmech {

using ParamMap = std::map<std::string, double>;

/// Parsed arithmetic expression over q[i], qdot[i], t, named parameters and
/// the functions sin, cos, exp, sqrt. Nodes live in a flat vector; the tree is
/// immutable after parsing.
class Expression {
 public:
  enum class Op {
    kNumber,
    kTime,
    kVarQ,
    kVarQdot,
    kParam,
    kNeg,
    kAdd,
    kSub,
    kMul,
    kDiv,
    kPow,
    kSin,
    kCos,
    kExp,
    kSqrt,
  };

  struct Node {
    Op op;
    double number = 0.0;   // kNumber
    int index = -1;        // kVarQ / kVarQdot
    std::string name;      // kParam
    int a = -1;            // first child
    int b = -1;            // second child
  };

  int dim() const { return dim_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  int root() const { return root_; }

  bool uses_time() const;
  bool uses_position() const;
  bool uses_velocity() const;

  /// Parameter names referenced anywhere in the tree.
  std::vector<std::string> parameter_names() const;

  /// Evaluate with scalar type T (double, Dual1 or Dual2). Unknown parameters
  /// throw; arithmetic domain problems (division by zero, sqrt of a negative)
  /// surface as non-finite values, which callers check where it matters.
  template <class T>
  T eval(std::span<const T> q, std::span<const T> qdot, double t,
         const ParamMap& params) const {
    if (static_cast<int>(q.size()) != dim_ || static_cast<int>(qdot.size()) != dim_)
      throw DimensionError("Expression::eval: argument dimension mismatch");
    return eval_node<T>(root_, q, qdot, t, params);
  }

  friend Expression parse_expression(std::string_view src, int dim);

 private:
  template <class T>
  T eval_node(int i, std::span<const T> q, std::span<const T> qdot, double t,
              const ParamMap& params) const {
    using std::cos;
    using std::exp;
    using std::pow;
    using std::sin;
    using std::sqrt;
    const Node& n = nodes_[i];
    switch (n.op) {
      case Op::kNumber: return T(n.number);
      case Op::kTime: return T(t);
      case Op::kVarQ: return q[n.index];
      case Op::kVarQdot: return qdot[n.index];
      case Op::kParam: {
        const auto it = params.find(n.name);
        if (it == params.end())
          throw ConfigError("unknown parameter '" + n.name + "' in expression");
        return T(it->second);
      }
      case Op::kNeg: return -eval_node<T>(n.a, q, qdot, t, params);
      case Op::kAdd:
        return eval_node<T>(n.a, q, qdot, t, params) + eval_node<T>(n.b, q, qdot, t, params);
      case Op::kSub:
        return eval_node<T>(n.a, q, qdot, t, params) - eval_node<T>(n.b, q, qdot, t, params);
      case Op::kMul:
        return eval_node<T>(n.a, q, qdot, t, params) * eval_node<T>(n.b, q, qdot, t, params);
      case Op::kDiv:
        return eval_node<T>(n.a, q, qdot, t, params) / eval_node<T>(n.b, q, qdot, t, params);
      case Op::kPow:
        return pow(eval_node<T>(n.a, q, qdot, t, params), eval_node<T>(n.b, q, qdot, t, params));
      case Op::kSin: return sin(eval_node<T>(n.a, q, qdot, t, params));
      case Op::kCos: return cos(eval_node<T>(n.a, q, qdot, t, params));
      case Op::kExp: return exp(eval_node<T>(n.a, q, qdot, t, params));
      case Op::kSqrt: return sqrt(eval_node<T>(n.a, q, qdot, t, params));
    }
    throw Error("Expression::eval: corrupt node");
  }

  std::vector<Node> nodes_;
  int root_ = -1;
  int dim_ = 0;
};

/// Recursive-descent parser for the grammar
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := unary ('^' factor)?
///   unary  := '-' unary | atom
///   atom   := NUMBER | 't' | 'q' '[' INT ']' | 'qdot' '[' INT ']'
///           | IDENT '(' expr ')' | IDENT | '(' expr ')'
/// Function IDENTs are sin, cos, exp, sqrt; any other bare IDENT names a
/// numeric parameter. Variable indices are bounds-checked against dim.
/// Errors carry line/column positions.
Expression parse_expression(std::string_view src, int dim);

/// Fully parenthesized round-trippable rendering: parsing the result yields a
/// structurally identical tree.
std::string to_string(const Expression& e);

/// Structural tree equality (node-by-node from the roots).
bool structurally_equal(const Expression& a, const Expression& b);

}  // namespace varmech
