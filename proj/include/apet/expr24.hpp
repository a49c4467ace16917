#pragma once
// Game-of-24 oracle: exact rational evaluation of infix expressions.

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "apet/core.hpp"

namespace apet::expr24 {

class ParseError : public Error {
 public:
  ParseError(std::size_t position, std::string expected);
  std::size_t position() const { return position_; }
  const std::string& expected() const { return expected_; }

 private:
  std::size_t position_;
  std::string expected_;
};

class DivisionByZero : public Error {
 public:
  DivisionByZero() : Error("division by zero") {}
};

class Overflow : public Error {
 public:
  Overflow() : Error("integer overflow in rational arithmetic") {}
};

// Always reduced, denominator positive.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t numerator, std::int64_t denominator = 1);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  bool is_zero() const { return num_ == 0; }

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);  // throws DivisionByZero
  bool operator==(const Rational&) const = default;

  std::string str() const;  // "24" or "-3/4"

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

enum class Op : char { Add = '+', Sub = '-', Mul = '*', Div = '/' };

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Literal {
  std::int64_t value;
};

struct BinOp {
  Op op;
  ExprPtr left;
  ExprPtr right;
};

struct Expr {
  std::variant<Literal, BinOp> node;
};

ExprPtr make_literal(std::int64_t value);
ExprPtr make_binop(Op op, ExprPtr left, ExprPtr right);

// Infix grammar over nonnegative integer literals, + - * / (with × ÷ and the
// Unicode minus as aliases) and parentheses. Whitespace is ignored.
ExprPtr parse_expr(std::string_view src);

Rational eval_exact(const Expr& expr);

// Literals in source order.
std::vector<std::int64_t> literals(const Expr& expr);

// Fully parenthesised rendering that parses back to the same tree.
std::string render(const Expr& expr);

using Numbers = std::array<std::int64_t, 4>;

Verdict check_24(const Numbers& numbers, std::string_view src);

// Exhaustive search: every operand ordering, all five tree shapes, all 4^3
// operator choices. Deterministic; returns the first solution found.
std::optional<std::string> solve_24(const Numbers& numbers);

// Serial reference and OpenMP batch version of solve_24 over many puzzles.
std::vector<std::optional<std::string>> solve_all_serial(std::span<const Numbers> puzzles);
std::vector<std::optional<std::string>> solve_all(std::span<const Numbers> puzzles);

// All 1820 multisets of four values from 1..13 in lexicographic order.
std::vector<Numbers> standard_puzzles();

}  // namespace apet::expr24
