#include "varode/expr.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "varode/error.hpp"

namespace varode {

struct Expr::Node {
  Kind kind = Kind::Constant;
  cplx value{};
  std::string name;
  std::vector<Expr> args;
};

namespace {

using Kind = Expr::Kind;

// Replace negative zeros so that principal branches never flip on a -0.0.
cplx clean(cplx z) {
  double re = z.real() == 0.0 ? 0.0 : z.real();
  double im = z.imag() == 0.0 ? 0.0 : z.imag();
  return {re, im};
}

bool is_real_integer(cplx z, long long& n) {
  if (z.imag() != 0.0 || std::abs(z.real()) > 1024.0) return false;
  double r = std::round(z.real());
  if (r != z.real()) return false;
  n = static_cast<long long>(r);
  return true;
}

cplx integer_power(cplx base, long long n) {
  if (n < 0) {
    if (base == cplx{}) throw EvalError("division by zero in negative power");
    return cplx{1.0} / integer_power(base, -n);
  }
  cplx result{1.0};
  while (n > 0) {
    if (n & 1) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

bool is_const(const Expr& e, cplx v) { return e.kind() == Kind::Constant && e.value() == v; }

}  // namespace

Expr::Expr() : Expr(constant(0.0)) {}

Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr Expr::constant(cplx value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Constant;
  n->value = clean(value);
  return Expr(std::move(n));
}

Expr Expr::variable() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Variable;
  return Expr(std::move(n));
}

Expr Expr::parameter(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Parameter;
  n->name = std::move(name);
  return Expr(std::move(n));
}

Expr Expr::unary(Kind kind, Expr arg) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->args = {std::move(arg)};
  return Expr(std::move(n));
}

Expr Expr::binary(Kind kind, Expr lhs, Expr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->args = {std::move(lhs), std::move(rhs)};
  return Expr(std::move(n));
}

Expr::Kind Expr::kind() const { return node_->kind; }
cplx Expr::value() const { return node_->value; }
const std::string& Expr::name() const { return node_->name; }
const std::vector<Expr>& Expr::args() const { return node_->args; }

cplx Expr::operator()(cplx t, const Params& params) const { return eval(*this, t, params); }

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Kind::Constant: return a.value() == b.value();
    case Kind::Variable: return true;
    case Kind::Parameter: return a.name() == b.name();
    default: break;
  }
  const auto& x = a.args();
  const auto& y = b.args();
  if (x.size() != y.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!(x[i] == y[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Smart constructors

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.value() + b.value());
  if (is_const(a, 0.0)) return b;
  if (is_const(b, 0.0)) return a;
  return Expr::binary(Kind::Add, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.value() - b.value());
  if (is_const(b, 0.0)) return a;
  if (is_const(a, 0.0)) return -b;
  return Expr::binary(Kind::Sub, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.value() * b.value());
  if (is_const(a, 0.0) || is_const(b, 0.0)) return Expr::constant(0.0);
  if (is_const(a, 1.0)) return b;
  if (is_const(b, 1.0)) return a;
  if (is_const(a, -1.0)) return -b;
  if (is_const(b, -1.0)) return -a;
  return Expr::binary(Kind::Mul, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant() && b.value() != cplx{}) return Expr::constant(a.value() / b.value());
  if (is_const(a, 0.0)) return Expr::constant(0.0);
  if (is_const(b, 1.0)) return a;
  return Expr::binary(Kind::Div, a, b);
}

Expr operator-(const Expr& a) {
  if (a.is_constant()) return Expr::constant(-a.value());
  if (a.kind() == Kind::Neg) return a.args()[0];
  return Expr::unary(Kind::Neg, a);
}

Expr pow(const Expr& base, const Expr& exponent) {
  if (is_const(exponent, 0.0)) return Expr::constant(1.0);
  if (is_const(exponent, 1.0)) return base;
  return Expr::binary(Kind::Pow, base, exponent);
}

Expr sqrt(const Expr& a) { return Expr::unary(Kind::Sqrt, a); }
Expr sin(const Expr& a) { return Expr::unary(Kind::Sin, a); }
Expr cos(const Expr& a) { return Expr::unary(Kind::Cos, a); }
Expr exp(const Expr& a) { return Expr::unary(Kind::Exp, a); }
Expr log(const Expr& a) { return Expr::unary(Kind::Log, a); }

// ---------------------------------------------------------------------------
// Evaluation

cplx eval(const Expr& e, cplx t, const Params& params) {
  const auto& a = e.args();
  switch (e.kind()) {
    case Kind::Constant: return e.value();
    case Kind::Variable: return clean(t);
    case Kind::Parameter: {
      auto it = params.find(e.name());
      if (it == params.end()) throw EvalError("unbound parameter '" + e.name() + "'");
      return clean(it->second);
    }
    case Kind::Add: return clean(eval(a[0], t, params) + eval(a[1], t, params));
    case Kind::Sub: return clean(eval(a[0], t, params) - eval(a[1], t, params));
    case Kind::Mul: return clean(eval(a[0], t, params) * eval(a[1], t, params));
    case Kind::Div: {
      cplx den = eval(a[1], t, params);
      if (den == cplx{}) throw EvalError("division by zero");
      return clean(eval(a[0], t, params) / den);
    }
    case Kind::Pow: {
      cplx base = eval(a[0], t, params);
      cplx ex = eval(a[1], t, params);
      long long n = 0;
      if (is_real_integer(ex, n)) return clean(integer_power(base, n));
      if (base == cplx{}) {
        if (ex.real() > 0.0) return cplx{};
        throw EvalError("zero raised to a non-positive power");
      }
      if (ex == cplx{0.5}) return clean(std::sqrt(base));
      return clean(std::pow(base, ex));
    }
    case Kind::Neg: return clean(-eval(a[0], t, params));
    case Kind::Sqrt: return clean(std::sqrt(eval(a[0], t, params)));
    case Kind::Sin: return clean(std::sin(eval(a[0], t, params)));
    case Kind::Cos: return clean(std::cos(eval(a[0], t, params)));
    case Kind::Exp: return clean(std::exp(eval(a[0], t, params)));
    case Kind::Log: {
      cplx x = eval(a[0], t, params);
      if (x == cplx{}) throw EvalError("log of zero");
      return clean(std::log(x));
    }
  }
  throw EvalError("corrupt expression node");
}

// ---------------------------------------------------------------------------
// Differentiation

Expr differentiate(const Expr& e) {
  const auto& a = e.args();
  switch (e.kind()) {
    case Kind::Constant:
    case Kind::Parameter: return Expr::constant(0.0);
    case Kind::Variable: return Expr::constant(1.0);
    case Kind::Add: return differentiate(a[0]) + differentiate(a[1]);
    case Kind::Sub: return differentiate(a[0]) - differentiate(a[1]);
    case Kind::Mul: return differentiate(a[0]) * a[1] + a[0] * differentiate(a[1]);
    case Kind::Div: return (differentiate(a[0]) * a[1] - a[0] * differentiate(a[1])) / pow(a[1], Expr::constant(2.0));
    case Kind::Neg: return -differentiate(a[0]);
    case Kind::Pow: {
      const Expr& u = a[0];
      const Expr& v = a[1];
      if (v.is_constant()) return v * pow(u, Expr::constant(v.value() - 1.0)) * differentiate(u);
      return e * (differentiate(v) * log(u) + v * differentiate(u) / u);
    }
    case Kind::Sqrt: return differentiate(a[0]) / (Expr::constant(2.0) * e);
    case Kind::Sin: return cos(a[0]) * differentiate(a[0]);
    case Kind::Cos: return -(sin(a[0]) * differentiate(a[0]));
    case Kind::Exp: return e * differentiate(a[0]);
    case Kind::Log: return differentiate(a[0]) / a[0];
  }
  throw EvalError("corrupt expression node");
}

// ---------------------------------------------------------------------------
// Printing

namespace {

int precedence(const Expr& e) {
  switch (e.kind()) {
    case Kind::Add:
    case Kind::Sub: return 1;
    case Kind::Mul:
    case Kind::Div: return 2;
    case Kind::Neg: return 3;
    case Kind::Pow: return 4;
    case Kind::Constant: {
      cplx v = e.value();
      if (v.imag() == 0.0 && v.real() >= 0.0) return 5;
      if (v == cplx{0.0, 1.0}) return 5;
      return 0;  // printed as a parenthesized group
    }
    default: return 5;
  }
}

std::string number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string print(const Expr& e);

std::string wrap(const Expr& e, bool parens) { return parens ? "(" + print(e) + ")" : print(e); }

std::string print(const Expr& e) {
  const auto& a = e.args();
  switch (e.kind()) {
    case Kind::Constant: {
      cplx v = e.value();
      if (v.imag() == 0.0) return v.real() >= 0.0 ? number(v.real()) : "(-" + number(-v.real()) + ")";
      if (v == cplx{0.0, 1.0}) return "i";
      return "(" + number(v.real()) + "+" + number(v.imag()) + "*i)";
    }
    case Kind::Variable: return "t";
    case Kind::Parameter: return e.name();
    case Kind::Add:
    case Kind::Sub: {
      const char* op = e.kind() == Kind::Add ? "+" : "-";
      bool right_parens = precedence(a[1]) <= 1 || a[1].kind() == Kind::Neg;
      return wrap(a[0], precedence(a[0]) < 1) + op + wrap(a[1], right_parens);
    }
    case Kind::Mul:
    case Kind::Div: {
      const char* op = e.kind() == Kind::Mul ? "*" : "/";
      bool left_parens = precedence(a[0]) < 2;
      bool right_parens = precedence(a[1]) <= 3;
      return wrap(a[0], left_parens) + op + wrap(a[1], right_parens);
    }
    case Kind::Neg: return "-" + wrap(a[0], precedence(a[0]) < 4);
    case Kind::Pow: return wrap(a[0], precedence(a[0]) < 5) + "^" + wrap(a[1], precedence(a[1]) < 5);
    case Kind::Sqrt: return "sqrt(" + print(a[0]) + ")";
    case Kind::Sin: return "sin(" + print(a[0]) + ")";
    case Kind::Cos: return "cos(" + print(a[0]) + ")";
    case Kind::Exp: return "exp(" + print(a[0]) + ")";
    case Kind::Log: return "log(" + print(a[0]) + ")";
  }
  return "?";
}

}  // namespace

std::string to_string(const Expr& e) { return print(e); }

std::set<std::string, std::less<>> parameters_of(const Expr& e) {
  std::set<std::string, std::less<>> out;
  if (e.kind() == Kind::Parameter) out.insert(e.name());
  for (const auto& c : e.args()) out.merge(parameters_of(c));
  return out;
}

// ---------------------------------------------------------------------------
// Parsing
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | '+' unary | power
//   power   := primary ('^' unary)?
//   primary := number | ident | ident '(' expr ')' | '(' expr ')'

namespace {

class Parser {
 public:
  Parser(std::string_view src, const std::optional<std::set<std::string, std::less<>>>& params)
      : src_(src), params_(params) {}

  Expr parse() {
    Expr e = expr();
    skip_ws();
    if (pos_ != src_.size()) throw ParseError("unexpected '" + std::string(1, src_[pos_]) + "'", pos_);
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= src_.size()) throw ParseError(std::string("expected '") + c + "' but input ended", pos_);
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
  }

  Expr expr() {
    Expr lhs = term();
    for (;;) {
      if (accept('+')) lhs = Expr::binary(Kind::Add, lhs, term());
      else if (accept('-')) lhs = Expr::binary(Kind::Sub, lhs, term());
      else return lhs;
    }
  }

  Expr term() {
    Expr lhs = unary();
    for (;;) {
      if (accept('*')) lhs = Expr::binary(Kind::Mul, lhs, unary());
      else if (accept('/')) lhs = Expr::binary(Kind::Div, lhs, unary());
      else return lhs;
    }
  }

  Expr unary() {
    if (accept('-')) return Expr::unary(Kind::Neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (accept('^')) return Expr::binary(Kind::Pow, base, unary());
    return base;
  }

  Expr primary() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError("unexpected end of input", pos_);
    char c = src_[pos_];
    if (accept('(')) {
      Expr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    throw ParseError("unexpected '" + std::string(1, c) + "'", pos_);
  }

  Expr number() {
    std::size_t start = pos_;
    double value = 0.0;
    auto [end, ec] = std::from_chars(src_.data() + pos_, src_.data() + src_.size(), value);
    if (ec != std::errc()) throw ParseError("malformed number", start);
    pos_ = static_cast<std::size_t>(end - src_.data());
    return Expr::constant(value);
  }

  Expr identifier() {
    std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
    std::string id(src_.substr(start, pos_ - start));
    skip_ws();
    bool call = pos_ < src_.size() && src_[pos_] == '(';
    if (call) {
      static const std::map<std::string, Kind, std::less<>> functions = {
          {"sqrt", Kind::Sqrt}, {"sin", Kind::Sin}, {"cos", Kind::Cos}, {"exp", Kind::Exp}, {"log", Kind::Log}};
      auto it = functions.find(id);
      if (it == functions.end()) throw ParseError("unknown function '" + id + "'", start);
      ++pos_;
      Expr arg = expr();
      expect(')');
      return Expr::unary(it->second, arg);
    }
    if (id == "t") return Expr::variable();
    if (id == "i") return Expr::constant(cplx{0.0, 1.0});
    if (id == "pi") return Expr::constant(std::numbers::pi);
    if (id == "sqrt" || id == "sin" || id == "cos" || id == "exp" || id == "log")
      throw ParseError("function '" + id + "' requires an argument", start);
    if (params_ && !params_->contains(id)) throw ParseError("unknown identifier '" + id + "'", start);
    return Expr::parameter(id);
  }

  std::string_view src_;
  const std::optional<std::set<std::string, std::less<>>>& params_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view source, const std::optional<std::set<std::string, std::less<>>>& parameters) {
  return Parser(source, parameters).parse();
}

}  // namespace varode
