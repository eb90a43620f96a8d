#include "degtherm/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>

namespace degtherm {

class ExpressionParser {
 public:
  ExpressionParser(const std::string& s, Expression& e) : s_(s), e_(e) {}

  int parse() {
    const int n = sum();
    skip();
    if (pos_ < s_.size()) fail("unexpected '" + peek_char() + "'");
    return n;
  }

 private:
  using Node = Expression::Node;

  // Column counts UTF-8 code points, not bytes.
  std::size_t column() const {
    std::size_t c = 1;
    for (std::size_t i = 0; i < pos_ && i < s_.size(); ++i)
      if ((static_cast<unsigned char>(s_[i]) & 0xC0) != 0x80) ++c;
    return c;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ExpressionError("column " + std::to_string(column()) + ": " + what, column());
  }
  std::string peek_char() const {
    std::size_t len = 1;
    const auto c = static_cast<unsigned char>(s_[pos_]);
    if (c >= 0xF0) len = 4;
    else if (c >= 0xE0) len = 3;
    else if (c >= 0xC0) len = 2;
    return s_.substr(pos_, len);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  int add(Node::Kind k, int lhs = -1, int rhs = -1, double v = 0.0) {
    e_.nodes_.push_back({k, v, lhs, rhs});
    return static_cast<int>(e_.nodes_.size()) - 1;
  }

  int sum() {
    int n = product();
    for (;;) {
      if (eat('+')) n = add(Node::Add, n, product());
      else if (eat('-')) n = add(Node::Sub, n, product());
      else return n;
    }
  }
  int product() {
    int n = unary();
    for (;;) {
      if (eat('*')) n = add(Node::Mul, n, unary());
      else if (eat('/')) n = add(Node::Div, n, unary());
      else return n;
    }
  }
  int unary() {
    if (eat('-')) return add(Node::Neg, unary());
    if (eat('+')) return unary();
    return power();
  }
  int power() {
    const int base = primary();
    if (eat('^')) return add(Node::Pow, base, unary());
    return base;
  }
  int primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    const char c = s_[pos_];
    if (eat('(')) {
      const int n = sum();
      if (!eat(')')) fail("expected ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail(static_cast<unsigned char>(c) >= 0x80 ? "unknown identifier '" + peek_char() + "'"
                                               : "unexpected '" + peek_char() + "'");
  }
  int number() {
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - begin);
    return add(Node::Num, -1, -1, v);
  }
  int identifier() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    const std::string id = s_.substr(start, pos_ - start);
    if (id == "x") return e_.uses_x_ = true, add(Node::X);
    if (id == "y") return e_.uses_y_ = true, add(Node::Y);
    if (id == "t") return e_.uses_t_ = true, add(Node::T);
    if (id == "pi") return add(Node::Num, -1, -1, std::numbers::pi);
    Node::Kind k;
    if (id == "sin") k = Node::Sin;
    else if (id == "cos") k = Node::Cos;
    else if (id == "exp") k = Node::Exp;
    else if (id == "log") k = Node::Log;
    else {
      pos_ = start;
      fail("unknown identifier '" + id + "'");
    }
    if (!eat('(')) fail("expected '(' after " + id);
    const int arg = sum();
    if (!eat(')')) fail("expected ')'");
    return add(k, arg);
  }

  const std::string& s_;
  Expression& e_;
  std::size_t pos_ = 0;
};

Expression::Expression() : text_("0"), nodes_{{Node::Num, 0.0, -1, -1}} {}

Expression Expression::parse(const std::string& text) {
  Expression e;
  e.nodes_.clear();
  e.text_ = text;
  ExpressionParser p(text, e);
  e.root_ = p.parse();
  return e;
}

double Expression::operator()(double x, double y, double t) const { return eval(root_, x, y, t); }

double Expression::eval(int i, double x, double y, double t) const {
  const Node& n = nodes_[static_cast<std::size_t>(i)];
  switch (n.kind) {
    case Node::Num: return n.value;
    case Node::X: return x;
    case Node::Y: return y;
    case Node::T: return t;
    case Node::Add: return eval(n.lhs, x, y, t) + eval(n.rhs, x, y, t);
    case Node::Sub: return eval(n.lhs, x, y, t) - eval(n.rhs, x, y, t);
    case Node::Mul: return eval(n.lhs, x, y, t) * eval(n.rhs, x, y, t);
    case Node::Div: return eval(n.lhs, x, y, t) / eval(n.rhs, x, y, t);
    case Node::Pow: return std::pow(eval(n.lhs, x, y, t), eval(n.rhs, x, y, t));
    case Node::Neg: return -eval(n.lhs, x, y, t);
    case Node::Sin: return std::sin(eval(n.lhs, x, y, t));
    case Node::Cos: return std::cos(eval(n.lhs, x, y, t));
    case Node::Exp: return std::exp(eval(n.lhs, x, y, t));
    case Node::Log: return std::log(eval(n.lhs, x, y, t));
  }
  return 0.0;
}

}  // namespace degtherm
