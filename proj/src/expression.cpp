#include "varmech/expression.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <functional>

namespace varmech {

bool Expression::uses_time() const {
  for (const Node& n : nodes_)
    if (n.op == Op::kTime) return true;
  return false;
}

bool Expression::uses_position() const {
  for (const Node& n : nodes_)
    if (n.op == Op::kVarQ) return true;
  return false;
}

bool Expression::uses_velocity() const {
  for (const Node& n : nodes_)
    if (n.op == Op::kVarQdot) return true;
  return false;
}

std::vector<std::string> Expression::parameter_names() const {
  std::vector<std::string> names;
  for (const Node& n : nodes_)
    if (n.op == Op::kParam) {
      bool seen = false;
      for (const auto& s : names) seen = seen || s == n.name;
      if (!seen) names.push_back(n.name);
    }
  return names;
}

namespace {

struct Token {
  enum class Kind { kNumber, kIdent, kSymbol, kEnd };
  Kind kind;
  double number = 0.0;
  std::string text;
  char symbol = 0;
  int line = 1;
  int column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
    tok_.line = line_;
    tok_.column = col_;
    if (pos_ >= src_.size()) {
      tok_.kind = Token::Kind::kEnd;
      return;
    }
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = src_.data() + pos_;
      const char* end = src_.data() + src_.size();
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(begin, end, value);
      if (ec != std::errc() || ptr == begin)
        throw ParseError("invalid number literal", line_, col_);
      const size_t len = static_cast<size_t>(ptr - begin);
      pos_ += len;
      col_ += static_cast<int>(len);
      tok_.kind = Token::Kind::kNumber;
      tok_.number = value;
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t end = pos_;
      while (end < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_'))
        ++end;
      tok_.kind = Token::Kind::kIdent;
      tok_.text = std::string(src_.substr(pos_, end - pos_));
      col_ += static_cast<int>(end - pos_);
      pos_ = end;
      return;
    }
    if (std::string_view("+-*/^()[],").find(c) != std::string_view::npos) {
      tok_.kind = Token::Kind::kSymbol;
      tok_.symbol = c;
      ++pos_;
      ++col_;
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
  }

  std::string_view src_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token tok_;
};

class Parser {
 public:
  Parser(std::string_view src, int dim) : lex_(src), dim_(dim) {}

  int run() {
    const int root = parse_expr();
    const Token& t = lex_.peek();
    if (t.kind != Token::Kind::kEnd)
      throw ParseError("unexpected trailing input", t.line, t.column);
    return root;
  }

  std::vector<Expression::Node> take_nodes() { return std::move(nodes_); }

 private:
  using Op = Expression::Op;

  int add(Expression::Node n) {
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
  }

  bool peek_symbol(char c) const {
    const Token& t = lex_.peek();
    return t.kind == Token::Kind::kSymbol && t.symbol == c;
  }

  Token expect_symbol(char c, const char* what) {
    const Token& t = lex_.peek();
    if (!(t.kind == Token::Kind::kSymbol && t.symbol == c))
      throw ParseError(std::string("expected '") + c + "' " + what, t.line, t.column);
    return lex_.take();
  }

  int parse_expr() {
    if (++depth_ > 200)
      throw ParseError("expression nests too deeply", lex_.peek().line,
                       lex_.peek().column);
    int lhs = parse_term();
    while (peek_symbol('+') || peek_symbol('-')) {
      const char op = lex_.take().symbol;
      const int rhs = parse_term();
      lhs = add({op == '+' ? Op::kAdd : Op::kSub, 0.0, -1, {}, lhs, rhs});
    }
    --depth_;
    return lhs;
  }

  int parse_term() {
    int lhs = parse_factor();
    while (peek_symbol('*') || peek_symbol('/')) {
      const char op = lex_.take().symbol;
      const int rhs = parse_factor();
      lhs = add({op == '*' ? Op::kMul : Op::kDiv, 0.0, -1, {}, lhs, rhs});
    }
    return lhs;
  }

  int parse_factor() {
    const int base = parse_unary();
    if (peek_symbol('^')) {
      lex_.take();
      const int exponent = parse_factor();  // right-associative
      return add({Op::kPow, 0.0, -1, {}, base, exponent});
    }
    return base;
  }

  int parse_unary() {
    int negations = 0;
    while (peek_symbol('-')) {
      if (++negations > 200)
        throw ParseError("too many stacked unary minus signs", lex_.peek().line,
                         lex_.peek().column);
      lex_.take();
    }
    int node = parse_atom();
    for (int i = 0; i < negations; ++i) node = add({Op::kNeg, 0.0, -1, {}, node, -1});
    return node;
  }

  int parse_index(const char* var) {
    expect_symbol('[', "after variable name");
    const Token t = lex_.peek();
    if (t.kind != Token::Kind::kNumber || t.number != static_cast<int>(t.number) ||
        t.number < 0)
      throw ParseError(std::string("expected nonnegative integer index for ") + var,
                       t.line, t.column);
    lex_.take();
    const int idx = static_cast<int>(t.number);
    if (idx >= dim_)
      throw ParseError(std::string(var) + " index " + std::to_string(idx) +
                           " out of range for dimension " + std::to_string(dim_),
                       t.line, t.column);
    expect_symbol(']', "after index");
    return idx;
  }

  int parse_atom() {
    const Token t = lex_.peek();
    if (t.kind == Token::Kind::kNumber) {
      lex_.take();
      return add({Op::kNumber, t.number, -1, {}, -1, -1});
    }
    if (t.kind == Token::Kind::kSymbol && t.symbol == '(') {
      lex_.take();
      const int inner = parse_expr();
      expect_symbol(')', "to close parenthesis");
      return inner;
    }
    if (t.kind == Token::Kind::kIdent) {
      lex_.take();
      if (t.text == "t") return add({Op::kTime, 0.0, -1, {}, -1, -1});
      if (t.text == "q") return add({Op::kVarQ, 0.0, parse_index("q"), {}, -1, -1});
      if (t.text == "qdot")
        return add({Op::kVarQdot, 0.0, parse_index("qdot"), {}, -1, -1});
      if (peek_symbol('(')) {
        Op op;
        if (t.text == "sin") op = Op::kSin;
        else if (t.text == "cos") op = Op::kCos;
        else if (t.text == "exp") op = Op::kExp;
        else if (t.text == "sqrt") op = Op::kSqrt;
        else
          throw ParseError("unknown function '" + t.text + "'", t.line, t.column);
        lex_.take();
        const int arg = parse_expr();
        expect_symbol(')', "to close function argument");
        return add({op, 0.0, -1, {}, arg, -1});
      }
      // Bare identifier: a named numeric parameter, resolved at evaluation.
      return add({Op::kParam, 0.0, -1, t.text, -1, -1});
    }
    throw ParseError("expected a number, variable, function or '('", t.line, t.column);
  }

  Lexer lex_;
  int dim_;
  int depth_ = 0;
  std::vector<Expression::Node> nodes_;
};

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void print_node(const Expression& e, int i, std::string& out) {
  using Op = Expression::Op;
  const Expression::Node& n = e.nodes()[i];
  auto binary = [&](const char* op) {
    out += '(';
    print_node(e, n.a, out);
    out += op;
    print_node(e, n.b, out);
    out += ')';
  };
  auto func = [&](const char* name) {
    out += name;
    out += '(';
    print_node(e, n.a, out);
    out += ')';
  };
  switch (n.op) {
    case Op::kNumber: out += format_number(n.number); return;
    case Op::kTime: out += 't'; return;
    case Op::kVarQ: out += "q[" + std::to_string(n.index) + "]"; return;
    case Op::kVarQdot: out += "qdot[" + std::to_string(n.index) + "]"; return;
    case Op::kParam: out += n.name; return;
    case Op::kNeg:
      out += "(-";
      print_node(e, n.a, out);
      out += ')';
      return;
    case Op::kAdd: binary("+"); return;
    case Op::kSub: binary("-"); return;
    case Op::kMul: binary("*"); return;
    case Op::kDiv: binary("/"); return;
    case Op::kPow: binary("^"); return;
    case Op::kSin: func("sin"); return;
    case Op::kCos: func("cos"); return;
    case Op::kExp: func("exp"); return;
    case Op::kSqrt: func("sqrt"); return;
  }
}

bool nodes_equal(const Expression& a, int ia, const Expression& b, int ib) {
  const auto& na = a.nodes()[ia];
  const auto& nb = b.nodes()[ib];
  if (na.op != nb.op || na.number != nb.number || na.index != nb.index ||
      na.name != nb.name)
    return false;
  if ((na.a >= 0) != (nb.a >= 0) || (na.b >= 0) != (nb.b >= 0)) return false;
  if (na.a >= 0 && !nodes_equal(a, na.a, b, nb.a)) return false;
  if (na.b >= 0 && !nodes_equal(a, na.b, b, nb.b)) return false;
  return true;
}

}  // namespace

Expression parse_expression(std::string_view src, int dim) {
  if (dim < 0) throw DimensionError("parse_expression: dim must be >= 0");
  Parser parser(src, dim);
  Expression e;
  e.root_ = parser.run();
  e.nodes_ = parser.take_nodes();
  e.dim_ = dim;
  return e;
}

std::string to_string(const Expression& e) {
  std::string out;
  print_node(e, e.root(), out);
  return out;
}

bool structurally_equal(const Expression& a, const Expression& b) {
  if (a.dim() != b.dim()) return false;
  return nodes_equal(a, a.root(), b, b.root());
}

}  // namespace varmech
