#pragma once

/// Expression language for pre-potentials and metric components.
///
/// Grammar (whitespace insignificant, `#` has no meaning inside an expression):
///
///     expr    := term (('+' | '-') term)*
///     term    := factor (('*' | '/') factor)*
///     factor  := '-' factor | power
///     power   := primary ('^' uint)?
///     primary := number | 'i' | identifier | func '(' expr ')' | '(' expr ')'
///     func    := sin | cos | sinh | cosh | exp | ln | sqrt | re | im | conj
///
/// `^` binds tighter than unary minus, so `-x^2` is `-(x^2)`. Binary operators
/// are left associative. Numbers are real doubles; complex values only enter
/// through `i`. Exponents are non-negative integer literals.

#include <array>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <variant>

#include "prepot/jet.hpp"

namespace prepot {

using CoordinateNames = std::array<std::string, kDim>;
using ParamBinding = std::map<std::string, double>;

enum class Function : std::uint8_t { sin, cos, sinh, cosh, exp, ln, sqrt, re, im, conj };

enum class BinaryOp : std::uint8_t { add, sub, mul, div };

class Expr;

namespace expr_node {
struct Number;
struct ImaginaryUnit;
struct Coordinate;
struct Parameter;
struct Negate;
struct Binary;
struct Power;
struct Call;
}  // namespace expr_node

using ExprNode =
    std::variant<expr_node::Number, expr_node::ImaginaryUnit, expr_node::Coordinate,
                 expr_node::Parameter, expr_node::Negate, expr_node::Binary, expr_node::Power,
                 expr_node::Call>;

/// Immutable, cheaply copyable expression tree handle.
class Expr {
 public:
  Expr();  // the literal 0
  explicit Expr(ExprNode node);

  const ExprNode& node() const;
  /// Identity of the shared tree; copies of one Expr compare equal.
  const void* id() const { return node_.get(); }

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  std::shared_ptr<const ExprNode> node_;
};

namespace expr_node {
struct Number {
  double value;
};
struct ImaginaryUnit {};
struct Coordinate {
  int axis;
  std::string name;
};
struct Parameter {
  std::string name;
};
struct Negate {
  Expr operand;
};
struct Binary {
  BinaryOp op;
  Expr lhs;
  Expr rhs;
};
struct Power {
  Expr base;
  unsigned exponent;
};
struct Call {
  Function fn;
  Expr arg;
};
}  // namespace expr_node

inline const ExprNode& Expr::node() const { return *node_; }

/// Parse `text`. Identifiers must be one of `coordinates` or `parameters`;
/// `i` and the function names are reserved. Throws ParseError.
Expr parse(std::string_view text, const CoordinateNames& coordinates,
           const std::set<std::string>& parameters = {});

/// Jet of the expression at `point`. Throws DomainError (branch cut, zero
/// divisor) or std::invalid_argument for a parameter missing from `params`.
Jet eval_jet(const Expr& e, const Point& point, const ParamBinding& params);

/// Plain complex value, computed without jets. Same error behaviour.
cplx eval_value(const Expr& e, const Point& point, const ParamBinding& params);

/// Coordinate names syntactically present in `e`.
std::set<std::string> free_coordinates(const Expr& e);
/// Parameter names syntactically present in `e`.
std::set<std::string> free_parameters(const Expr& e);

/// Fully parenthesised rendering that reparses to an identical tree.
std::string to_string(const Expr& e);

const char* function_name(Function f);

}  // namespace prepot
