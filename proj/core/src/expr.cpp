#include "vbm/expr.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <optional>

#include "vbm/error.hpp"

namespace vbm::expr {

std::string_view func_name(Func f) noexcept {
  switch (f) {
    case Func::abs: return "abs";
    case Func::sqrt: return "sqrt";
    case Func::exp: return "exp";
    case Func::min: return "min";
    case Func::max: return "max";
  }
  return "?";
}

std::size_t func_arity(Func f) noexcept {
  return (f == Func::min || f == Func::max) ? 2 : 1;
}

Expr Expr::literal(double value) {
  return Expr(std::make_shared<const Node>(Node{Literal{value}}));
}

Expr Expr::variable(VarKind kind, std::size_t index) {
  return Expr(std::make_shared<const Node>(Node{Variable{kind, index}}));
}

Expr Expr::negate(Expr operand) {
  return Expr(std::make_shared<const Node>(Node{Negate{std::move(operand)}}));
}

Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs) {
  return Expr(std::make_shared<const Node>(
      Node{Binary{op, std::move(lhs), std::move(rhs)}}));
}

Expr Expr::call(Func fn, std::vector<Expr> args) {
  if (args.size() != func_arity(fn)) {
    throw Error(ErrorCode::InvalidArgument,
                std::string(func_name(fn)) + " takes " +
                    std::to_string(func_arity(fn)) + " argument(s)");
  }
  return Expr(std::make_shared<const Node>(Node{Call{fn, std::move(args)}}));
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  const auto& va = a.node().value;
  const auto& vb = b.node().value;
  if (va.index() != vb.index()) return false;
  return std::visit(
      overloaded{
          [&](const Literal& l) {
            return std::bit_cast<std::uint64_t>(l.value) ==
                   std::bit_cast<std::uint64_t>(std::get<Literal>(vb).value);
          },
          [&](const Variable& v) {
            const auto& w = std::get<Variable>(vb);
            return v.kind == w.kind && v.index == w.index;
          },
          [&](const Negate& n) { return n.operand == std::get<Negate>(vb).operand; },
          [&](const Binary& x) {
            const auto& y = std::get<Binary>(vb);
            return x.op == y.op && x.lhs == y.lhs && x.rhs == y.rhs;
          },
          [&](const Call& c) {
            const auto& d = std::get<Call>(vb);
            return c.fn == d.fn && c.args == d.args;
          },
      },
      va);
}

// ---------------------------------------------------------------------------
// Lexer and parser

namespace {

enum class Tok { number, ident, plus, minus, star, slash, caret, lparen, rparen, comma, end };

struct Token {
  Tok kind;
  std::size_t offset;
  std::string_view text;
  double number = 0.0;
};

bool is_ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
bool is_ident_char(char c) {
  return is_ident_start(c) || (c >= '0' && c <= '9');
}
bool is_digit(char c) { return c >= '0' && c <= '9'; }

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) { advance(); }

  Expr parse_all() {
    Expr e = parse_expr();
    if (tok_.kind != Tok::end) fail({"operator", "end of input"});
    return e;
  }

 private:
  [[noreturn]] void fail(std::vector<std::string> expected) const {
    std::string msg = "at offset " + std::to_string(tok_.offset) + ": expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) msg += (i + 1 == expected.size()) ? " or " : ", ";
      msg += expected[i];
    }
    msg += tok_.kind == Tok::end ? ", found end of input"
                                 : ", found '" + std::string(tok_.text) + "'";
    throw SyntaxError(tok_.offset, std::move(expected), msg);
  }

  [[noreturn]] void fail_at(std::size_t offset, const std::string& what) const {
    throw SyntaxError(offset, {}, "at offset " + std::to_string(offset) + ": " + what);
  }

  void advance() {
    while (pos_ < src_.size() &&
           (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' ||
            src_[pos_] == '\r')) {
      ++pos_;
    }
    tok_ = Token{Tok::end, pos_, {}};
    if (pos_ >= src_.size()) return;

    const char c = src_[pos_];
    const std::size_t start = pos_;
    auto single = [&](Tok k) {
      ++pos_;
      tok_ = Token{k, start, src_.substr(start, 1)};
    };
    switch (c) {
      case '+': return single(Tok::plus);
      case '-': return single(Tok::minus);
      case '*': return single(Tok::star);
      case '/': return single(Tok::slash);
      case '^': return single(Tok::caret);
      case '(': return single(Tok::lparen);
      case ')': return single(Tok::rparen);
      case ',': return single(Tok::comma);
      default: break;
    }
    if (is_digit(c) || (c == '.' && pos_ + 1 < src_.size() && is_digit(src_[pos_ + 1]))) {
      std::size_t end = pos_;
      while (end < src_.size() && is_digit(src_[end])) ++end;
      if (end < src_.size() && src_[end] == '.') {
        ++end;
        while (end < src_.size() && is_digit(src_[end])) ++end;
      }
      if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
        std::size_t e = end + 1;
        if (e < src_.size() && (src_[e] == '+' || src_[e] == '-')) ++e;
        if (e < src_.size() && is_digit(src_[e])) {
          while (e < src_.size() && is_digit(src_[e])) ++e;
          end = e;
        }
      }
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + end, value);
      if (ec != std::errc() || ptr != src_.data() + end || !std::isfinite(value)) {
        fail_at(start, "malformed number '" + std::string(src_.substr(start, end - start)) + "'");
      }
      pos_ = end;
      tok_ = Token{Tok::number, start, src_.substr(start, end - start), value};
      return;
    }
    if (is_ident_start(c)) {
      std::size_t end = pos_;
      while (end < src_.size() && is_ident_char(src_[end])) ++end;
      pos_ = end;
      tok_ = Token{Tok::ident, start, src_.substr(start, end - start)};
      return;
    }
    fail_at(start, std::string("unexpected character '") + c + "'");
  }

  bool accept(Tok k) {
    if (tok_.kind != k) return false;
    advance();
    return true;
  }

  Expr parse_expr() {
    Expr lhs = parse_term();
    while (tok_.kind == Tok::plus || tok_.kind == Tok::minus) {
      const BinaryOp op = tok_.kind == Tok::plus ? BinaryOp::add : BinaryOp::sub;
      advance();
      lhs = Expr::binary(op, std::move(lhs), parse_term());
    }
    return lhs;
  }

  Expr parse_term() {
    Expr lhs = parse_unary();
    while (tok_.kind == Tok::star || tok_.kind == Tok::slash) {
      const BinaryOp op = tok_.kind == Tok::star ? BinaryOp::mul : BinaryOp::div;
      advance();
      lhs = Expr::binary(op, std::move(lhs), parse_unary());
    }
    return lhs;
  }

  Expr parse_unary() {
    if (accept(Tok::minus)) return Expr::negate(parse_unary());
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (accept(Tok::caret)) return Expr::binary(BinaryOp::pow, std::move(base), parse_unary());
    return base;
  }

  Expr parse_primary() {
    switch (tok_.kind) {
      case Tok::number: {
        const double v = tok_.number;
        advance();
        return Expr::literal(v);
      }
      case Tok::lparen: {
        advance();
        Expr e = parse_expr();
        if (!accept(Tok::rparen)) fail({"')'", "operator"});
        return e;
      }
      case Tok::ident:
        return parse_identifier();
      default:
        fail({"number", "variable", "function", "'('", "'-'"});
    }
  }

  Expr parse_identifier() {
    const Token id = tok_;
    if (auto fn = lookup_function(id.text)) {
      advance();
      if (!accept(Tok::lparen)) fail({"'('"});
      std::vector<Expr> args;
      args.push_back(parse_expr());
      while (accept(Tok::comma)) args.push_back(parse_expr());
      if (!accept(Tok::rparen)) fail({"','", "')'", "operator"});
      if (args.size() != func_arity(*fn)) {
        fail_at(id.offset, std::string(func_name(*fn)) + " takes " +
                               std::to_string(func_arity(*fn)) + " argument(s), got " +
                               std::to_string(args.size()));
      }
      return Expr::call(*fn, std::move(args));
    }
    if (auto var = lookup_variable(id.text)) {
      advance();
      return Expr::variable(var->kind, var->index);
    }
    fail_at(id.offset, "unknown identifier '" + std::string(id.text) +
                           "' (variables are x1.., y1.., u1.., v1..)");
  }

  static std::optional<Func> lookup_function(std::string_view name) {
    for (Func f : {Func::abs, Func::sqrt, Func::exp, Func::min, Func::max})
      if (func_name(f) == name) return f;
    return std::nullopt;
  }

  static std::optional<Variable> lookup_variable(std::string_view name) {
    if (name.size() < 2) return std::nullopt;
    const char k = name[0];
    if (k != 'x' && k != 'y' && k != 'u' && k != 'v') return std::nullopt;
    if (name[1] == '0') return std::nullopt;
    std::size_t index = 0;
    auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), index);
    if (ec != std::errc() || ptr != name.data() + name.size() || index == 0) {
      return std::nullopt;
    }
    return Variable{static_cast<VarKind>(k), index - 1};
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  Token tok_{Tok::end, 0, {}};
};

}  // namespace

Expr parse(std::string_view text) { return Parser(text).parse_all(); }

// ---------------------------------------------------------------------------
// Evaluation

namespace {

[[noreturn]] void domain_error(const std::string& what) {
  throw Error(ErrorCode::DomainError, what);
}

double checked(double v, const char* what) {
  if (!std::isfinite(v)) domain_error(std::string("non-finite result in ") + what);
  return v;
}

std::span<const double> family(const Bindings& env, VarKind k) {
  switch (k) {
    case VarKind::x: return env.x;
    case VarKind::y: return env.y;
    case VarKind::u: return env.u;
    case VarKind::v: return env.v;
  }
  return {};
}

}  // namespace

double eval(const Expr& e, const Bindings& env) {
  return std::visit(
      overloaded{
          [](const Literal& l) { return l.value; },
          [&](const Variable& v) {
            const auto vals = family(env, v.kind);
            if (v.index >= vals.size()) {
              throw Error(ErrorCode::UnboundVariable,
                          std::string(1, static_cast<char>(v.kind)) +
                              std::to_string(v.index + 1) + " is not bound");
            }
            return vals[v.index];
          },
          [&](const Negate& n) { return -eval(n.operand, env); },
          [&](const Binary& b) {
            const double l = eval(b.lhs, env);
            const double r = eval(b.rhs, env);
            switch (b.op) {
              case BinaryOp::add: return checked(l + r, "'+'");
              case BinaryOp::sub: return checked(l - r, "'-'");
              case BinaryOp::mul: return checked(l * r, "'*'");
              case BinaryOp::div:
                if (r == 0.0) domain_error("division by zero");
                return checked(l / r, "'/'");
              case BinaryOp::pow:
                if (l == 0.0 && r < 0.0) domain_error("0 raised to a negative power");
                return checked(std::pow(l, r), "'^'");
            }
            return 0.0;
          },
          [&](const Call& c) {
            const double a = eval(c.args[0], env);
            switch (c.fn) {
              case Func::abs: return std::abs(a);
              case Func::sqrt:
                if (a < 0.0) domain_error("sqrt of a negative number");
                return std::sqrt(a);
              case Func::exp: return checked(std::exp(a), "exp");
              case Func::min: return std::min(a, eval(c.args[1], env));
              case Func::max: return std::max(a, eval(c.args[1], env));
            }
            return 0.0;
          },
      },
      e.node().value);
}

// ---------------------------------------------------------------------------
// Printing

namespace {

enum Prec { kAdd = 1, kMul = 2, kUnary = 3, kPow = 4, kAtom = 5 };

int precedence(const Expr& e) {
  return std::visit(
      overloaded{
          [](const Literal&) { return int{kAtom}; },
          [](const Variable&) { return int{kAtom}; },
          [](const Call&) { return int{kAtom}; },
          [](const Negate&) { return int{kUnary}; },
          [](const Binary& b) {
            switch (b.op) {
              case BinaryOp::add:
              case BinaryOp::sub: return int{kAdd};
              case BinaryOp::mul:
              case BinaryOp::div: return int{kMul};
              case BinaryOp::pow: return int{kPow};
            }
            return int{kAtom};
          },
      },
      e.node().value);
}

void render(const Expr& e, std::string& out);

void render_wrapped(const Expr& e, bool parens, std::string& out) {
  if (parens) out += '(';
  render(e, out);
  if (parens) out += ')';
}

void render(const Expr& e, std::string& out) {
  std::visit(
      overloaded{
          [&](const Literal& l) {
            char buf[64];
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, std::abs(l.value));
            (void)ec;
            // Negative literals never come out of the parser; keep them
            // printable as a negation.
            if (std::signbit(l.value)) out += "(-";
            out.append(buf, ptr);
            if (std::signbit(l.value)) out += ')';
          },
          [&](const Variable& v) {
            out += static_cast<char>(v.kind);
            out += std::to_string(v.index + 1);
          },
          [&](const Negate& n) {
            out += '-';
            render_wrapped(n.operand, precedence(n.operand) < kUnary, out);
          },
          [&](const Binary& b) {
            const int p = precedence(e);
            if (b.op == BinaryOp::pow) {
              render_wrapped(b.lhs, precedence(b.lhs) <= kPow, out);
              out += '^';
              render_wrapped(b.rhs, precedence(b.rhs) < kUnary, out);
              return;
            }
            render_wrapped(b.lhs, precedence(b.lhs) < p, out);
            out += ' ';
            out += static_cast<char>(b.op);
            out += ' ';
            render_wrapped(b.rhs, precedence(b.rhs) <= p, out);
          },
          [&](const Call& c) {
            out += func_name(c.fn);
            out += '(';
            for (std::size_t i = 0; i < c.args.size(); ++i) {
              if (i) out += ", ";
              render(c.args[i], out);
            }
            out += ')';
          },
      },
      e.node().value);
}

}  // namespace

std::string print(const Expr& e) {
  std::string out;
  render(e, out);
  return out;
}

std::size_t arity(const Expr& e, VarKind kind) {
  return std::visit(
      overloaded{
          [](const Literal&) { return std::size_t{0}; },
          [&](const Variable& v) { return v.kind == kind ? v.index + 1 : 0; },
          [&](const Negate& n) { return arity(n.operand, kind); },
          [&](const Binary& b) { return std::max(arity(b.lhs, kind), arity(b.rhs, kind)); },
          [&](const Call& c) {
            std::size_t m = 0;
            for (const auto& a : c.args) m = std::max(m, arity(a, kind));
            return m;
          },
      },
      e.node().value);
}

}  // namespace vbm::expr
