#include "apet/expr24.hpp"

#include <algorithm>
#include <numeric>

namespace apet::expr24 {

namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw Overflow();
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw Overflow();
  return r;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  ExprPtr parse() {
    skip_space();
    if (pos_ == src_.size()) throw ParseError(pos_, "an expression");
    auto e = expression();
    skip_space();
    if (pos_ != src_.size()) throw ParseError(pos_, "an operator or end of input");
    return e;
  }

 private:
  void skip_space() {
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' ||
                                  src_[pos_] == '\r'))
      ++pos_;
  }

  // Consumes an operator token if one is next, including the UTF-8 aliases.
  std::optional<Op> peek_op(std::size_t* width) const {
    if (pos_ >= src_.size()) return std::nullopt;
    const auto rest = src_.substr(pos_);
    *width = 1;
    switch (rest[0]) {
      case '+': return Op::Add;
      case '-': return Op::Sub;
      case '*': return Op::Mul;
      case '/': return Op::Div;
      default: break;
    }
    *width = 2;
    if (rest.starts_with("\xC3\x97")) return Op::Mul;  // ×
    if (rest.starts_with("\xC3\xB7")) return Op::Div;  // ÷
    *width = 3;
    if (rest.starts_with("\xE2\x88\x92")) return Op::Sub;  // − (U+2212)
    if (rest.starts_with("\xE2\x8B\x85")) return Op::Mul;  // ⋅ (U+22C5)
    return std::nullopt;
  }

  ExprPtr expression() {
    auto left = term();
    for (;;) {
      skip_space();
      std::size_t width = 0;
      auto op = peek_op(&width);
      if (!op || (*op != Op::Add && *op != Op::Sub)) return left;
      pos_ += width;
      left = make_binop(*op, std::move(left), term());
    }
  }

  ExprPtr term() {
    auto left = factor();
    for (;;) {
      skip_space();
      std::size_t width = 0;
      auto op = peek_op(&width);
      if (!op || (*op != Op::Mul && *op != Op::Div)) return left;
      pos_ += width;
      left = make_binop(*op, std::move(left), factor());
    }
  }

  ExprPtr factor() {
    skip_space();
    if (pos_ >= src_.size()) throw ParseError(pos_, "a number or '('");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      auto inner = expression();
      skip_space();
      if (pos_ >= src_.size() || src_[pos_] != ')') throw ParseError(pos_, "')'");
      ++pos_;
      return inner;
    }
    if (c >= '0' && c <= '9') {
      std::int64_t value = 0;
      const auto start = pos_;
      while (pos_ < src_.size() && src_[pos_] >= '0' && src_[pos_] <= '9') {
        std::int64_t next;
        if (__builtin_mul_overflow(value, 10, &next) ||
            __builtin_add_overflow(next, src_[pos_] - '0', &next))
          throw ParseError(start, "an integer literal that fits in 64 bits");
        value = next;
        ++pos_;
      }
      if (pos_ < src_.size() && (src_[pos_] == '.' || src_[pos_] == ','))
        throw ParseError(pos_, "an integer literal (no fractions)");
      return make_literal(value);
    }
    throw ParseError(pos_, "a number or '('");
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

void collect_literals(const Expr& e, std::vector<std::int64_t>& out) {
  if (const auto* lit = std::get_if<Literal>(&e.node)) {
    out.push_back(lit->value);
    return;
  }
  const auto& bin = std::get<BinOp>(e.node);
  collect_literals(*bin.left, out);
  collect_literals(*bin.right, out);
}

}  // namespace

ParseError::ParseError(std::size_t position, std::string expected)
    : Error("parse error at position " + std::to_string(position) + ": expected " + expected),
      position_(position),
      expected_(std::move(expected)) {}

Rational::Rational(std::int64_t numerator, std::int64_t denominator) {
  if (denominator == 0) throw DivisionByZero();
  if (denominator < 0) {
    numerator = checked_mul(numerator, -1);
    denominator = checked_mul(denominator, -1);
  }
  const auto g = std::gcd(numerator, denominator);
  num_ = numerator / g;
  den_ = denominator / g;
}

Rational operator+(const Rational& a, const Rational& b) {
  return {checked_add(checked_mul(a.num_, b.den_), checked_mul(b.num_, a.den_)),
          checked_mul(a.den_, b.den_)};
}

Rational operator-(const Rational& a, const Rational& b) {
  return {checked_add(checked_mul(a.num_, b.den_), checked_mul(checked_mul(b.num_, -1), a.den_)),
          checked_mul(a.den_, b.den_)};
}

Rational operator*(const Rational& a, const Rational& b) {
  return {checked_mul(a.num_, b.num_), checked_mul(a.den_, b.den_)};
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw DivisionByZero();
  return {checked_mul(a.num_, b.den_), checked_mul(a.den_, b.num_)};
}

std::string Rational::str() const {
  return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

ExprPtr make_literal(std::int64_t value) {
  return std::make_unique<Expr>(Expr{Literal{value}});
}

ExprPtr make_binop(Op op, ExprPtr left, ExprPtr right) {
  return std::make_unique<Expr>(Expr{BinOp{op, std::move(left), std::move(right)}});
}

ExprPtr parse_expr(std::string_view src) { return Parser(src).parse(); }

Rational eval_exact(const Expr& e) {
  if (const auto* lit = std::get_if<Literal>(&e.node)) return Rational(lit->value);
  const auto& bin = std::get<BinOp>(e.node);
  const auto l = eval_exact(*bin.left);
  const auto r = eval_exact(*bin.right);
  switch (bin.op) {
    case Op::Add: return l + r;
    case Op::Sub: return l - r;
    case Op::Mul: return l * r;
    case Op::Div: return l / r;
  }
  return {};
}

std::vector<std::int64_t> literals(const Expr& e) {
  std::vector<std::int64_t> out;
  collect_literals(e, out);
  return out;
}

std::string render(const Expr& e) {
  if (const auto* lit = std::get_if<Literal>(&e.node)) return std::to_string(lit->value);
  const auto& bin = std::get<BinOp>(e.node);
  return "(" + render(*bin.left) + " " + static_cast<char>(bin.op) + " " + render(*bin.right) + ")";
}

Verdict check_24(const Numbers& numbers, std::string_view src) {
  constexpr auto mode = ScoringMode::Semantic;
  ExprPtr ast;
  try {
    ast = parse_expr(src);
  } catch (const ParseError& e) {
    return Verdict::fail(mode, e.what());
  }

  auto remaining = std::vector<std::int64_t>(numbers.begin(), numbers.end());
  for (auto lit : literals(*ast)) {
    auto it = std::find(remaining.begin(), remaining.end(), lit);
    if (it == remaining.end())
      return Verdict::fail(mode, "literal " + std::to_string(lit) + " not in given multiset");
    remaining.erase(it);
  }
  if (!remaining.empty())
    return Verdict::fail(mode, "given number " + std::to_string(remaining.front()) + " not used");

  try {
    const auto value = eval_exact(*ast);
    if (value != Rational(24)) return Verdict::fail(mode, "value " + value.str() + " is not 24");
  } catch (const DivisionByZero&) {
    return Verdict::fail(mode, "division by zero");
  } catch (const Overflow&) {
    return Verdict::fail(mode, "arithmetic overflow");
  }
  return Verdict::pass(mode);
}

std::vector<Numbers> standard_puzzles() {
  std::vector<Numbers> out;
  for (std::int64_t a = 1; a <= 13; ++a)
    for (std::int64_t b = a; b <= 13; ++b)
      for (std::int64_t c = b; c <= 13; ++c)
        for (std::int64_t d = c; d <= 13; ++d) out.push_back({a, b, c, d});
  return out;
}

}  // namespace apet::expr24
