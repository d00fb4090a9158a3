#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "varode/types.hpp"

namespace varode {

using Params = std::map<std::string, cplx, std::less<>>;

/// Immutable expression tree over one independent variable `t`.
///
/// Evaluation is complex throughout. Functions with a restricted real domain
/// (sqrt, log, non-integer powers) use the principal branch, so an expression
/// such as sqrt(t+1) at t = -2 evaluates to i rather than failing.
class Expr {
 public:
  enum class Kind { Constant, Variable, Parameter, Add, Sub, Mul, Div, Pow, Neg, Sqrt, Sin, Cos, Exp, Log };

  Expr();  // the constant 0

  static Expr constant(cplx value);
  static Expr variable();
  static Expr parameter(std::string name);
  static Expr unary(Kind kind, Expr arg);
  static Expr binary(Kind kind, Expr lhs, Expr rhs);

  Kind kind() const;
  cplx value() const;               // Constant only
  const std::string& name() const;  // Parameter only
  const std::vector<Expr>& args() const;

  cplx operator()(cplx t, const Params& params = {}) const;

  bool is_constant() const { return kind() == Kind::Constant; }

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

// Expression-building operators. These fold constants and drop additive and
// multiplicative identities, nothing more.
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& base, const Expr& exponent);
Expr sqrt(const Expr& a);
Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr exp(const Expr& a);
Expr log(const Expr& a);

/// Parses `source`. Bare identifiers other than `t`, `i` and `pi` become
/// parameters; when `parameters` is given, only those names are accepted.
Expr parse(std::string_view source, const std::optional<std::set<std::string, std::less<>>>& parameters = std::nullopt);

cplx eval(const Expr& e, cplx t, const Params& params = {});

Expr differentiate(const Expr& e);

/// Re-parseable text form (the serialized form of an Expr).
std::string to_string(const Expr& e);

/// Names of all parameters referenced by `e`.
std::set<std::string, std::less<>> parameters_of(const Expr& e);

}  // namespace varode
