#pragma once

#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cliff {

// Scalar expressions over x1..x9:
//   expr  := term (('+' | '-') term)*
//   term  := unary (('*' | '/') unary)*
//   unary := '-' unary | primary
//   primary := number | name | name '(' args ')' | '(' expr ')'
// Functions: sin cos tan sinh cosh tanh exp sqrt (one argument), atan2 (two),
// pi (constant, also accepted as pi()). Any other bare name is a free symbol
// that must be bound before evaluation.
struct ExprNode {
  enum class Op { Number, Var, Symbol, Neg, Add, Sub, Mul, Div, Call };

  Op op = Op::Number;
  double number = 0.0;
  int var = 0;        // 0-based: x1 is 0
  std::string name;   // symbol or function name
  std::vector<std::shared_ptr<const ExprNode>> args;
  std::size_t offset = 0;  // byte offset in the source, for messages
};

using ExprPtr = std::shared_ptr<const ExprNode>;

class ScalarExpr {
 public:
  ScalarExpr();
  explicit ScalarExpr(ExprPtr root) : root_(std::move(root)) {}

  // Throws SyntaxError; the error value is the byte offset.
  static ScalarExpr parse(std::string_view src);
  static ScalarExpr constant(double v);

  // Throws EvalError on division by zero, sqrt of a negative number, a
  // non-finite result, a missing coordinate or an unbound symbol.
  double eval(std::span<const double> x) const;

  // Replaces free symbols by expressions. Unknown names are left alone.
  ScalarExpr substitute(const std::map<std::string, ScalarExpr>& bindings) const;

  // d/dx_{var+1}, with light constant folding.
  ScalarExpr derivative(int var) const;

  // Fully parenthesised; parse(to_string()) gives an identical tree.
  std::string to_string() const;

  // Highest coordinate index used plus one (0 when constant).
  int variables_used() const;
  std::set<std::string> symbols() const;

  const ExprPtr& root() const noexcept { return root_; }

 private:
  ExprPtr root_;
};

ScalarExpr parse_expr(std::string_view src);

// Structural equality; offsets are ignored.
bool operator==(const ScalarExpr& a, const ScalarExpr& b);

}  // namespace cliff
