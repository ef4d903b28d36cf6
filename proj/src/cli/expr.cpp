#include "cliff/expr.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cctype>
#include <numbers>

#include "cliff/error.hpp"

namespace cliff {

namespace {

using Op = ExprNode::Op;

ExprPtr make(Op op, std::vector<ExprPtr> args = {}, std::size_t offset = 0) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->args = std::move(args);
  n->offset = offset;
  return n;
}

ExprPtr number(double v, std::size_t offset = 0) {
  auto n = std::make_shared<ExprNode>();
  n->number = v;
  n->offset = offset;
  return n;
}

ExprPtr call(std::string name, std::vector<ExprPtr> args, std::size_t offset = 0) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::Call;
  n->name = std::move(name);
  n->args = std::move(args);
  n->offset = offset;
  return n;
}

struct FunctionInfo {
  std::string_view name;
  int arity;
};

constexpr std::array<FunctionInfo, 10> kFunctions{{{"sin", 1},
                                                   {"cos", 1},
                                                   {"tan", 1},
                                                   {"sinh", 1},
                                                   {"cosh", 1},
                                                   {"tanh", 1},
                                                   {"exp", 1},
                                                   {"sqrt", 1},
                                                   {"atan2", 2},
                                                   {"pi", 0}}};

const FunctionInfo* find_function(std::string_view name) {
  for (const auto& f : kFunctions) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  ExprPtr parse() {
    auto e = expr();
    skip_space();
    if (pos_ < src_.size()) fail("an operator or end of input");
    return e;
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& expected) const {
    std::string found = pos_ < src_.size() ? "'" + std::string(1, src_[pos_]) + "'" : "end of input";
    throw Error(ErrorKind::SyntaxError,
                "offset " + std::to_string(pos_) + ": expected " + expected + ", found " + found,
                static_cast<double>(pos_));
  }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  ExprPtr expr() {
    auto lhs = term();
    for (;;) {
      skip_space();
      const std::size_t at = pos_;
      if (accept('+')) {
        lhs = make(Op::Add, {lhs, term()}, at);
      } else if (accept('-')) {
        lhs = make(Op::Sub, {lhs, term()}, at);
      } else {
        return lhs;
      }
    }
  }

  ExprPtr term() {
    auto lhs = unary();
    for (;;) {
      skip_space();
      const std::size_t at = pos_;
      if (accept('*')) {
        lhs = make(Op::Mul, {lhs, unary()}, at);
      } else if (accept('/')) {
        lhs = make(Op::Div, {lhs, unary()}, at);
      } else {
        return lhs;
      }
    }
  }

  ExprPtr unary() {
    skip_space();
    const std::size_t at = pos_;
    if (accept('-')) return make(Op::Neg, {unary()}, at);
    return primary();
  }

  ExprPtr primary() {
    skip_space();
    if (pos_ >= src_.size()) fail("a number, name or '('");
    const std::size_t at = pos_;
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      auto e = expr();
      if (!accept(')')) fail("')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number_literal();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        ++pos_;
      }
      const std::string name(src_.substr(at, pos_ - at));
      return name_or_call(name, at);
    }
    fail("a number, name or '('");
  }

  ExprPtr number_literal() {
    const std::size_t at = pos_;
    auto digits = [&] {
      const std::size_t start = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      return pos_ - start;
    };
    std::size_t count = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      count += digits();
    }
    if (count == 0) fail("a digit");
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (digits() == 0) fail("an exponent");
    }
    double v = 0.0;
    const auto text = src_.substr(at, pos_ - at);
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || !std::isfinite(v)) {
      pos_ = at;
      fail("a finite number");
    }
    return number(v, at);
  }

  ExprPtr name_or_call(const std::string& name, std::size_t at) {
    const FunctionInfo* f = find_function(name);
    skip_space();
    const bool has_parens = pos_ < src_.size() && src_[pos_] == '(';
    if (!has_parens) {
      if (name == "pi") return call("pi", {}, at);
      if (name.size() >= 2 && name[0] == 'x' && name.find_first_not_of("0123456789", 1) == std::string::npos) {
        const int idx = std::stoi(name.substr(1));
        if (idx < 1 || idx > 9) {
          pos_ = at;
          fail("a coordinate x1..x9");
        }
        auto n = std::make_shared<ExprNode>();
        n->op = Op::Var;
        n->var = idx - 1;
        n->offset = at;
        return n;
      }
      if (f) fail("'(' after " + name);
      auto n = std::make_shared<ExprNode>();
      n->op = Op::Symbol;
      n->name = name;
      n->offset = at;
      return n;
    }
    if (!f) {
      pos_ = at;
      fail("a known function (" + name + " is not one)");
    }
    ++pos_;
    std::vector<ExprPtr> args;
    if (!accept(')')) {
      args.push_back(expr());
      while (accept(',')) args.push_back(expr());
      if (!accept(')')) fail("',' or ')'");
    }
    if (static_cast<int>(args.size()) != f->arity) {
      pos_ = at;
      fail(name + " with " + std::to_string(f->arity) + " argument(s)");
    }
    return call(name, std::move(args), at);
  }
};

[[noreturn]] void eval_fail(const ExprNode& n, const std::string& what) {
  throw Error(ErrorKind::EvalError, "offset " + std::to_string(n.offset) + ": " + what,
              static_cast<double>(n.offset));
}

double eval_node(const ExprNode& n, std::span<const double> x) {
  auto arg = [&](std::size_t i) { return eval_node(*n.args[i], x); };
  switch (n.op) {
    case Op::Number: return n.number;
    case Op::Var:
      if (static_cast<std::size_t>(n.var) >= x.size()) {
        eval_fail(n, "x" + std::to_string(n.var + 1) + " is not a grid coordinate");
      }
      return x[static_cast<std::size_t>(n.var)];
    case Op::Symbol: eval_fail(n, "unbound name '" + n.name + "'");
    case Op::Neg: return -arg(0);
    case Op::Add: return arg(0) + arg(1);
    case Op::Sub: return arg(0) - arg(1);
    case Op::Mul: return arg(0) * arg(1);
    case Op::Div: {
      const double num = arg(0);
      const double den = arg(1);
      if (den == 0.0) eval_fail(n, "division by zero");
      return num / den;
    }
    case Op::Call: break;
  }
  const std::string& f = n.name;
  if (f == "pi") return std::numbers::pi;
  if (f == "atan2") return std::atan2(arg(0), arg(1));
  const double a = arg(0);
  double v = 0.0;
  if (f == "sin") v = std::sin(a);
  else if (f == "cos") v = std::cos(a);
  else if (f == "tan") v = std::tan(a);
  else if (f == "sinh") v = std::sinh(a);
  else if (f == "cosh") v = std::cosh(a);
  else if (f == "tanh") v = std::tanh(a);
  else if (f == "exp") v = std::exp(a);
  else if (f == "sqrt") {
    if (a < 0.0) eval_fail(n, "sqrt of negative value " + format_number(a));
    v = std::sqrt(a);
  } else {
    eval_fail(n, "unknown function " + f);
  }
  if (!std::isfinite(v)) eval_fail(n, f + " overflowed");
  return v;
}

bool is_number(const ExprPtr& e, double v) { return e->op == Op::Number && e->number == v; }

// Constructors that fold the trivial cases produced by differentiation.
ExprPtr neg(ExprPtr a) {
  if (is_number(a, 0.0)) return a;
  if (a->op == Op::Neg) return a->args[0];
  return make(Op::Neg, {std::move(a)});
}

ExprPtr add(ExprPtr a, ExprPtr b) {
  if (is_number(a, 0.0)) return b;
  if (is_number(b, 0.0)) return a;
  if (b->op == Op::Neg) return make(Op::Sub, {std::move(a), b->args[0]});
  return make(Op::Add, {std::move(a), std::move(b)});
}

ExprPtr sub(ExprPtr a, ExprPtr b) {
  if (is_number(b, 0.0)) return a;
  if (is_number(a, 0.0)) return neg(std::move(b));
  return make(Op::Sub, {std::move(a), std::move(b)});
}

ExprPtr mul(ExprPtr a, ExprPtr b) {
  if (is_number(a, 0.0) || is_number(b, 0.0)) return number(0.0);
  if (is_number(a, 1.0)) return b;
  if (is_number(b, 1.0)) return a;
  if (a->op == Op::Neg) return neg(mul(a->args[0], std::move(b)));
  if (b->op == Op::Neg) return neg(mul(std::move(a), b->args[0]));
  return make(Op::Mul, {std::move(a), std::move(b)});
}

ExprPtr div(ExprPtr a, ExprPtr b) {
  if (is_number(a, 0.0)) return number(0.0);
  if (is_number(b, 1.0)) return a;
  return make(Op::Div, {std::move(a), std::move(b)});
}

ExprPtr derive(const ExprPtr& e, int var) {
  const auto& a = e->args;
  switch (e->op) {
    case Op::Number: return number(0.0);
    case Op::Var: return number(e->var == var ? 1.0 : 0.0);
    case Op::Symbol:
      throw Error(ErrorKind::EvalError, "cannot differentiate unbound name '" + e->name + "'",
                  static_cast<double>(e->offset));
    case Op::Neg: return neg(derive(a[0], var));
    case Op::Add: return add(derive(a[0], var), derive(a[1], var));
    case Op::Sub: return sub(derive(a[0], var), derive(a[1], var));
    case Op::Mul: return add(mul(derive(a[0], var), a[1]), mul(a[0], derive(a[1], var)));
    case Op::Div: {
      // (u/v)' = u'/v - u v'/(v v)
      return sub(div(derive(a[0], var), a[1]),
                 div(mul(a[0], derive(a[1], var)), mul(a[1], a[1])));
    }
    case Op::Call: break;
  }
  const std::string& f = e->name;
  if (f == "pi") return number(0.0);
  if (f == "atan2") {
    // d atan2(y, x) = (x y' - y x') / (x^2 + y^2)
    const auto& y = a[0];
    const auto& x = a[1];
    return div(sub(mul(x, derive(y, var)), mul(y, derive(x, var))), add(mul(x, x), mul(y, y)));
  }
  const ExprPtr du = derive(a[0], var);
  if (is_number(du, 0.0)) return du;
  const ExprPtr& u = a[0];
  if (f == "sin") return mul(call("cos", {u}), du);
  if (f == "cos") return neg(mul(call("sin", {u}), du));
  if (f == "tan") return div(du, mul(call("cos", {u}), call("cos", {u})));
  if (f == "sinh") return mul(call("cosh", {u}), du);
  if (f == "cosh") return mul(call("sinh", {u}), du);
  if (f == "tanh") return div(du, mul(call("cosh", {u}), call("cosh", {u})));
  if (f == "exp") return mul(e, du);
  if (f == "sqrt") return div(du, mul(number(2.0), e));
  throw Error(ErrorKind::EvalError, "unknown function " + f);
}

std::string number_text(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  std::string s(buf.data(), res.ptr);
  // Keep literals inside the grammar: "1e+20" parses, "inf" would not.
  return s;
}

void print(const ExprNode& n, std::string& out) {
  switch (n.op) {
    case Op::Number:
      if (n.number < 0.0 || std::signbit(n.number)) {
        // Only produced by ScalarExpr::constant; printed as a negation.
        out += "(-" + number_text(-n.number) + ")";
      } else {
        out += number_text(n.number);
      }
      return;
    case Op::Var: out += "x" + std::to_string(n.var + 1); return;
    case Op::Symbol: out += n.name; return;
    case Op::Neg:
      out += "(-";
      print(*n.args[0], out);
      out += ")";
      return;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div: {
      static constexpr char kOps[] = {'+', '-', '*', '/'};
      out += "(";
      print(*n.args[0], out);
      out += ' ';
      out += kOps[static_cast<int>(n.op) - static_cast<int>(Op::Add)];
      out += ' ';
      print(*n.args[1], out);
      out += ")";
      return;
    }
    case Op::Call:
      out += n.name;
      if (n.name == "pi") return;
      out += "(";
      for (std::size_t i = 0; i < n.args.size(); ++i) {
        if (i) out += ", ";
        print(*n.args[i], out);
      }
      out += ")";
      return;
  }
}

bool equal(const ExprNode& a, const ExprNode& b) {
  if (a.op != b.op || a.args.size() != b.args.size()) return false;
  switch (a.op) {
    case Op::Number:
      if (a.number != b.number) return false;
      break;
    case Op::Var:
      if (a.var != b.var) return false;
      break;
    case Op::Symbol:
    case Op::Call:
      if (a.name != b.name) return false;
      break;
    default: break;
  }
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (!equal(*a.args[i], *b.args[i])) return false;
  }
  return true;
}

ExprPtr substitute_node(const ExprPtr& e, const std::map<std::string, ScalarExpr>& bindings) {
  if (e->op == Op::Symbol) {
    const auto it = bindings.find(e->name);
    return it == bindings.end() ? e : it->second.root();
  }
  if (e->args.empty()) return e;
  auto copy = std::make_shared<ExprNode>(*e);
  for (auto& arg : copy->args) arg = substitute_node(arg, bindings);
  return copy;
}

void collect(const ExprNode& n, int& vars, std::set<std::string>& symbols) {
  if (n.op == Op::Var) vars = std::max(vars, n.var + 1);
  if (n.op == Op::Symbol) symbols.insert(n.name);
  for (const auto& a : n.args) collect(*a, vars, symbols);
}

}  // namespace

ScalarExpr::ScalarExpr() : root_(number(0.0)) {}

ScalarExpr ScalarExpr::parse(std::string_view src) { return ScalarExpr(Parser(src).parse()); }

ScalarExpr ScalarExpr::constant(double v) {
  if (v < 0.0) return ScalarExpr(make(Op::Neg, {number(-v)}));
  return ScalarExpr(number(v));
}

double ScalarExpr::eval(std::span<const double> x) const { return eval_node(*root_, x); }

ScalarExpr ScalarExpr::substitute(const std::map<std::string, ScalarExpr>& bindings) const {
  return ScalarExpr(substitute_node(root_, bindings));
}

ScalarExpr ScalarExpr::derivative(int var) const { return ScalarExpr(derive(root_, var)); }

std::string ScalarExpr::to_string() const {
  std::string out;
  print(*root_, out);
  return out;
}

int ScalarExpr::variables_used() const {
  int vars = 0;
  std::set<std::string> symbols;
  collect(*root_, vars, symbols);
  return vars;
}

std::set<std::string> ScalarExpr::symbols() const {
  int vars = 0;
  std::set<std::string> symbols;
  collect(*root_, vars, symbols);
  return symbols;
}

ScalarExpr parse_expr(std::string_view src) { return ScalarExpr::parse(src); }

bool operator==(const ScalarExpr& a, const ScalarExpr& b) { return equal(*a.root(), *b.root()); }

}  // namespace cliff
