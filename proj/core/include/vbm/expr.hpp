#pragma once

// A small arithmetic expression language used by problem files to define
// operators, functionals and metric components.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?
//   primary := number | variable | func '(' expr (',' expr)* ')' | '(' expr ')'
//
// Variables are x1..xm, y1..ym, u1..um, v1..vm (1-based); functions are abs,
// sqrt, exp (unary) and min, max (binary). '^' binds tighter than unary minus
// and is right-associative, so -2^2 = -4 and 2^3^2 = 512.

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace vbm::expr {

enum class VarKind : char { x = 'x', y = 'y', u = 'u', v = 'v' };
enum class BinaryOp : char { add = '+', sub = '-', mul = '*', div = '/', pow = '^' };
enum class Func { abs, sqrt, exp, min, max };

std::string_view func_name(Func f) noexcept;
std::size_t func_arity(Func f) noexcept;

struct Node;

// Immutable expression tree with value semantics; copies share structure.
class Expr {
 public:
  static Expr literal(double value);
  static Expr variable(VarKind kind, std::size_t index);
  static Expr negate(Expr operand);
  static Expr binary(BinaryOp op, Expr lhs, Expr rhs);
  static Expr call(Func fn, std::vector<Expr> args);

  const Node& node() const { return *node_; }

  // Structural equality; literals compare bitwise.
  friend bool operator==(const Expr& a, const Expr& b);

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct Literal {
  double value;
};
struct Variable {
  VarKind kind;
  std::size_t index;  // 0-based
};
struct Negate {
  Expr operand;
};
struct Binary {
  BinaryOp op;
  Expr lhs;
  Expr rhs;
};
struct Call {
  Func fn;
  std::vector<Expr> args;
};

struct Node {
  std::variant<Literal, Variable, Negate, Binary, Call> value;
};

// Values bound to each variable family; x1 is x[0].
struct Bindings {
  std::span<const double> x;
  std::span<const double> y;
  std::span<const double> u;
  std::span<const double> v;
};

// Throws SyntaxError with the byte offset and the expected-token set.
Expr parse(std::string_view text);

// Throws UnboundVariable or DomainError (division by zero, sqrt of a negative,
// 0^negative, or any non-finite result).
double eval(const Expr& e, const Bindings& env);

// Minimal-parenthesis rendering; parse(print(e)) == e.
std::string print(const Expr& e);

// One past the largest index used for `kind` (0 if unused).
std::size_t arity(const Expr& e, VarKind kind);

}  // namespace vbm::expr
