#pragma once

#include "degtherm/common.hpp"

#include <memory>
#include <string>
#include <vector>

namespace degtherm {

/// Parse failure with a 1-based character column.
class ExpressionError : public Error {
 public:
  ExpressionError(const std::string& what, std::size_t column)
      : Error(what), column(column) {}
  std::size_t column;
};

/// Arithmetic in x, y, t and pi with + - * / ^, unary minus, sin cos exp log
/// and decimal literals. ^ is right associative and binds tighter than unary minus.
class Expression {
 public:
  Expression();  // the constant 0
  static Expression parse(const std::string& text);

  double operator()(double x, double y, double t = 0.0) const;
  const std::string& text() const { return text_; }
  bool uses_time() const { return uses_t_; }
  /// Constant value when the expression has no variables.
  bool is_constant() const { return !uses_x_ && !uses_y_ && !uses_t_; }

  bool operator==(const Expression& o) const { return text_ == o.text_; }

 private:
  struct Node {
    enum Kind { Num, X, Y, T, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Exp, Log } kind;
    double value = 0.0;
    int lhs = -1;
    int rhs = -1;
  };
  friend class ExpressionParser;

  double eval(int node, double x, double y, double t) const;

  std::string text_;
  std::vector<Node> nodes_;
  int root_ = 0;
  bool uses_x_ = false, uses_y_ = false, uses_t_ = false;
};

}  // namespace degtherm
