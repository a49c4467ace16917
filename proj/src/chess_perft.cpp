#include <omp.h>

#include "apet/chess.hpp"

namespace apet::chess {

std::uint64_t perft(const Position& pos, int depth) {
  if (depth <= 0) return 1;
  const auto moves = legal_moves(pos);
  if (depth == 1) return moves.size();
  std::uint64_t nodes = 0;
  for (const auto& m : moves) nodes += perft(pos.after(m), depth - 1);
  return nodes;
}

std::uint64_t perft_parallel(const Position& pos, int depth) {
  if (depth <= 1) return perft(pos, depth);
  const auto moves = legal_moves(pos);
  const auto n = static_cast<std::ptrdiff_t>(moves.size());
  std::uint64_t nodes = 0;
#pragma omp parallel for schedule(dynamic, 1) reduction(+ : nodes)
  for (std::ptrdiff_t i = 0; i < n; ++i) nodes += perft(pos.after(moves[i]), depth - 1);
  return nodes;
}

}  // namespace apet::chess
