// Brute-force Game-of-24 search: single-puzzle kernel, serial reference
// loop, and the OpenMP batch loop.

#include <omp.h>

#include <algorithm>

#include "apet/expr24.hpp"

namespace apet::expr24 {

namespace {

constexpr std::array<Op, 4> kOps = {Op::Add, Op::Sub, Op::Mul, Op::Div};

std::optional<Rational> apply(Op op, const std::optional<Rational>& a,
                              const std::optional<Rational>& b) {
  if (!a || !b) return std::nullopt;
  try {
    switch (op) {
      case Op::Add: return *a + *b;
      case Op::Sub: return *a - *b;
      case Op::Mul: return *a * *b;
      case Op::Div:
        if (b->is_zero()) return std::nullopt;
        return *a / *b;
    }
  } catch (const Overflow&) {
  }
  return std::nullopt;
}

std::string bin(const std::string& l, Op op, const std::string& r) {
  return "(" + l + " " + static_cast<char>(op) + " " + r + ")";
}

// Evaluates tree shape `shape` over operands v with operators o, returning
// the rendered expression when it equals 24.
std::optional<std::string> try_shape(int shape, const std::array<std::int64_t, 4>& v,
                                     const std::array<Op, 3>& o) {
  const std::array<std::optional<Rational>, 4> x = {Rational(v[0]), Rational(v[1]),
                                                    Rational(v[2]), Rational(v[3])};
  std::optional<Rational> value;
  switch (shape) {
    case 0: value = apply(o[2], apply(o[1], apply(o[0], x[0], x[1]), x[2]), x[3]); break;
    case 1: value = apply(o[2], apply(o[0], x[0], apply(o[1], x[1], x[2])), x[3]); break;
    case 2: value = apply(o[1], apply(o[0], x[0], x[1]), apply(o[2], x[2], x[3])); break;
    case 3: value = apply(o[0], x[0], apply(o[2], apply(o[1], x[1], x[2]), x[3])); break;
    case 4: value = apply(o[0], x[0], apply(o[1], x[1], apply(o[2], x[2], x[3]))); break;
  }
  if (!value || *value != Rational(24)) return std::nullopt;

  const std::array<std::string, 4> s = {std::to_string(v[0]), std::to_string(v[1]),
                                        std::to_string(v[2]), std::to_string(v[3])};
  switch (shape) {
    case 0: return bin(bin(bin(s[0], o[0], s[1]), o[1], s[2]), o[2], s[3]);
    case 1: return bin(bin(s[0], o[0], bin(s[1], o[1], s[2])), o[2], s[3]);
    case 2: return bin(bin(s[0], o[0], s[1]), o[1], bin(s[2], o[2], s[3]));
    case 3: return bin(s[0], o[0], bin(bin(s[1], o[1], s[2]), o[2], s[3]));
    default: return bin(s[0], o[0], bin(s[1], o[1], bin(s[2], o[2], s[3])));
  }
}

}  // namespace

std::optional<std::string> solve_24(const Numbers& numbers) {
  std::array<int, 4> perm = {0, 1, 2, 3};
  do {
    const std::array<std::int64_t, 4> v = {numbers[perm[0]], numbers[perm[1]], numbers[perm[2]],
                                           numbers[perm[3]]};
    for (int shape = 0; shape < 5; ++shape)
      for (auto o1 : kOps)
        for (auto o2 : kOps)
          for (auto o3 : kOps)
            if (auto found = try_shape(shape, v, {o1, o2, o3})) return found;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::nullopt;
}

std::vector<std::optional<std::string>> solve_all_serial(std::span<const Numbers> puzzles) {
  std::vector<std::optional<std::string>> out;
  out.reserve(puzzles.size());
  for (const auto& p : puzzles) out.push_back(solve_24(p));
  return out;
}

std::vector<std::optional<std::string>> solve_all(std::span<const Numbers> puzzles) {
  std::vector<std::optional<std::string>> out(puzzles.size());
  const auto n = static_cast<std::ptrdiff_t>(puzzles.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = solve_24(puzzles[i]);
  return out;
}

}  // namespace apet::expr24
