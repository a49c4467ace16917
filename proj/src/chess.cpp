#include <algorithm>
#include <sstream>

#include "apet/chess.hpp"

namespace apet::chess {

namespace {

constexpr std::array<std::pair<int, int>, 8> kKnightSteps = {
    {{1, 2}, {2, 1}, {2, -1}, {1, -2}, {-1, -2}, {-2, -1}, {-2, 1}, {-1, 2}}};
constexpr std::array<std::pair<int, int>, 8> kKingSteps = {
    {{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}}};
constexpr std::array<std::pair<int, int>, 4> kDiagonals = {{{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};
constexpr std::array<std::pair<int, int>, 4> kOrthogonals = {{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
constexpr std::array<PieceType, 4> kPromotions = {PieceType::Queen, PieceType::Rook,
                                                  PieceType::Bishop, PieceType::Knight};

constexpr bool on_board(int file, int rank) { return file >= 0 && file < 8 && rank >= 0 && rank < 8; }

char piece_char(const Piece& p) {
  static constexpr char kChars[] = "pnbrqk";
  const char c = kChars[static_cast<int>(p.type)];
  return p.color == Color::White ? static_cast<char>(c - 'a' + 'A') : c;
}

std::optional<Piece> piece_from_char(char c) {
  static constexpr std::string_view kChars = "pnbrqk";
  const bool white = c >= 'A' && c <= 'Z';
  const char lower = white ? static_cast<char>(c - 'A' + 'a') : c;
  const auto idx = kChars.find(lower);
  if (idx == std::string_view::npos) return std::nullopt;
  return Piece{white ? Color::White : Color::Black, static_cast<PieceType>(idx)};
}

bool holds(const std::optional<Piece>& sq, Color c, PieceType t) {
  return sq && sq->color == c && sq->type == t;
}

int parse_clock(const std::string& text, const char* what) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(text, &used);
    if (used != text.size() || v < 0) throw FenError(std::string("bad ") + what);
    return v;
  } catch (const std::logic_error&) {
    throw FenError(std::string("bad ") + what);
  }
}

}  // namespace

std::string square_name(Square s) {
  return {static_cast<char>('a' + file_of(s)), static_cast<char>('1' + rank_of(s))};
}

std::optional<Square> parse_square(std::string_view name) {
  if (name.size() != 2 || name[0] < 'a' || name[0] > 'h' || name[1] < '1' || name[1] > '8')
    return std::nullopt;
  return make_square(name[0] - 'a', name[1] - '1');
}

std::string to_uci(const Move& m) {
  auto out = square_name(m.from) + square_name(m.to);
  if (m.promotion) out.push_back("pnbrqk"[static_cast<int>(*m.promotion)]);
  return out;
}

Position Position::initial() {
  return from_fen("rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1");
}

Position Position::from_fen(std::string_view fen) {
  std::istringstream in{std::string(fen)};
  std::string placement, side, castling, ep, half, full;
  if (!(in >> placement >> side >> castling >> ep)) throw FenError("FEN needs at least 4 fields");
  in >> half >> full;

  Position pos;
  int rank = 7, file = 0;
  for (char c : placement) {
    if (c == '/') {
      if (file != 8) throw FenError("rank " + std::to_string(rank + 1) + " does not have 8 files");
      --rank;
      file = 0;
      if (rank < 0) throw FenError("too many ranks");
    } else if (c >= '1' && c <= '8') {
      file += c - '0';
      if (file > 8) throw FenError("rank overflows 8 files");
    } else if (auto p = piece_from_char(c)) {
      if (file >= 8) throw FenError("rank overflows 8 files");
      pos.board_[make_square(file++, rank)] = *p;
    } else {
      throw FenError(std::string("bad piece character '") + c + "'");
    }
  }
  if (rank != 0 || file != 8) throw FenError("placement does not describe 8 ranks");

  if (side == "w") pos.side_ = Color::White;
  else if (side == "b") pos.side_ = Color::Black;
  else throw FenError("side to move must be w or b");

  if (castling != "-") {
    for (char c : castling) {
      switch (c) {
        case 'K': pos.castling_.white_king = true; break;
        case 'Q': pos.castling_.white_queen = true; break;
        case 'k': pos.castling_.black_king = true; break;
        case 'q': pos.castling_.black_queen = true; break;
        default: throw FenError(std::string("bad castling character '") + c + "'");
      }
    }
  }

  if (ep != "-") {
    auto sq = parse_square(ep);
    if (!sq) throw FenError("bad en passant square");
    const int expected_rank = pos.side_ == Color::White ? 5 : 2;
    if (rank_of(*sq) != expected_rank) throw FenError("en passant square on wrong rank");
    pos.ep_ = sq;
  }
  if (!half.empty()) pos.halfmove_ = parse_clock(half, "halfmove clock");
  if (!full.empty()) {
    pos.fullmove_ = parse_clock(full, "fullmove number");
    if (pos.fullmove_ < 1) throw FenError("fullmove number must be positive");
  }

  for (auto c : {Color::White, Color::Black}) {
    const auto kings = std::count_if(pos.board_.begin(), pos.board_.end(),
                                     [c](const auto& sq) { return holds(sq, c, PieceType::King); });
    if (kings != 1) throw InvalidPosition("each side needs exactly one king");
  }
  for (int f = 0; f < 8; ++f)
    for (int r : {0, 7})
      if (pos.board_[make_square(f, r)] && pos.board_[make_square(f, r)]->type == PieceType::Pawn)
        throw InvalidPosition("pawn on first or last rank");
  const auto waiting = opposite(pos.side_);
  if (pos.is_attacked(pos.king_square(waiting), pos.side_))
    throw InvalidPosition("side not to move is in check");
  return pos;
}

std::string Position::fen() const {
  std::string out;
  for (int rank = 7; rank >= 0; --rank) {
    int empty = 0;
    for (int file = 0; file < 8; ++file) {
      const auto& sq = board_[make_square(file, rank)];
      if (!sq) {
        ++empty;
        continue;
      }
      if (empty) out.push_back(static_cast<char>('0' + empty));
      empty = 0;
      out.push_back(piece_char(*sq));
    }
    if (empty) out.push_back(static_cast<char>('0' + empty));
    if (rank) out.push_back('/');
  }
  out += side_ == Color::White ? " w " : " b ";
  std::string rights;
  if (castling_.white_king) rights += 'K';
  if (castling_.white_queen) rights += 'Q';
  if (castling_.black_king) rights += 'k';
  if (castling_.black_queen) rights += 'q';
  out += rights.empty() ? "-" : rights;
  out += ' ';
  out += ep_ ? square_name(*ep_) : "-";
  out += ' ' + std::to_string(halfmove_) + ' ' + std::to_string(fullmove_);
  return out;
}

Square Position::king_square(Color c) const {
  for (Square s = 0; s < 64; ++s)
    if (holds(board_[s], c, PieceType::King)) return s;
  throw InvalidPosition("no king on board");
}

bool Position::is_attacked(Square s, Color by) const {
  const int f = file_of(s), r = rank_of(s);
  // A pawn of colour `by` attacks s from one rank behind (from its viewpoint).
  const int pawn_rank = by == Color::White ? r - 1 : r + 1;
  for (int df : {-1, 1})
    if (on_board(f + df, pawn_rank) && holds(board_[make_square(f + df, pawn_rank)], by, PieceType::Pawn))
      return true;
  for (auto [df, dr] : kKnightSteps)
    if (on_board(f + df, r + dr) && holds(board_[make_square(f + df, r + dr)], by, PieceType::Knight))
      return true;
  for (auto [df, dr] : kKingSteps)
    if (on_board(f + df, r + dr) && holds(board_[make_square(f + df, r + dr)], by, PieceType::King))
      return true;
  auto slide = [&](const auto& dirs, PieceType a, PieceType b) {
    for (auto [df, dr] : dirs) {
      for (int nf = f + df, nr = r + dr; on_board(nf, nr); nf += df, nr += dr) {
        const auto& sq = board_[make_square(nf, nr)];
        if (!sq) continue;
        if (sq->color == by && (sq->type == a || sq->type == b)) return true;
        break;
      }
    }
    return false;
  };
  return slide(kDiagonals, PieceType::Bishop, PieceType::Queen) ||
         slide(kOrthogonals, PieceType::Rook, PieceType::Queen);
}

bool Position::in_check() const { return is_attacked(king_square(side_), opposite(side_)); }

Position Position::after(const Move& m) const {
  Position next = *this;
  const Piece mover = *board_[m.from];
  const bool capture = board_[m.to].has_value() || (m.flags & move_flags::kEnPassant);

  if (m.flags & move_flags::kEnPassant) {
    const Square victim = make_square(file_of(m.to), rank_of(m.from));
    next.board_[victim].reset();
  }
  next.board_[m.to] = m.promotion ? Piece{mover.color, *m.promotion} : mover;
  next.board_[m.from].reset();

  if (m.is_castle()) {
    const int rank = rank_of(m.from);
    const bool king_side = m.flags & move_flags::kCastleKing;
    const Square rook_from = make_square(king_side ? 7 : 0, rank);
    const Square rook_to = make_square(king_side ? 5 : 3, rank);
    next.board_[rook_to] = next.board_[rook_from];
    next.board_[rook_from].reset();
  }

  auto touch = [&next](Square s) {
    if (s == make_square(0, 0)) next.castling_.white_queen = false;
    if (s == make_square(7, 0)) next.castling_.white_king = false;
    if (s == make_square(0, 7)) next.castling_.black_queen = false;
    if (s == make_square(7, 7)) next.castling_.black_king = false;
  };
  if (mover.type == PieceType::King) {
    if (mover.color == Color::White) next.castling_.white_king = next.castling_.white_queen = false;
    else next.castling_.black_king = next.castling_.black_queen = false;
  }
  touch(m.from);
  touch(m.to);

  next.ep_.reset();
  if (m.flags & move_flags::kDoublePush)
    next.ep_ = make_square(file_of(m.from), (rank_of(m.from) + rank_of(m.to)) / 2);

  next.halfmove_ = (mover.type == PieceType::Pawn || capture) ? 0 : halfmove_ + 1;
  if (side_ == Color::Black) ++next.fullmove_;
  next.side_ = opposite(side_);
  return next;
}

std::vector<Move> pseudo_legal_moves(const Position& pos) {
  std::vector<Move> moves;
  moves.reserve(64);
  const Color us = pos.side_;
  const Color them = opposite(us);
  const auto& board = pos.board_;

  auto add_pawn_move = [&moves](Square from, Square to, std::uint8_t flags) {
    if (rank_of(to) == 0 || rank_of(to) == 7) {
      for (auto promo : kPromotions) moves.push_back({from, to, promo, flags});
    } else {
      moves.push_back({from, to, std::nullopt, flags});
    }
  };

  for (Square from = 0; from < 64; ++from) {
    const auto& sq = board[from];
    if (!sq || sq->color != us) continue;
    const int f = file_of(from), r = rank_of(from);

    switch (sq->type) {
      case PieceType::Pawn: {
        const int dir = us == Color::White ? 1 : -1;
        const int start_rank = us == Color::White ? 1 : 6;
        if (on_board(f, r + dir) && !board[make_square(f, r + dir)]) {
          add_pawn_move(from, make_square(f, r + dir), 0);
          if (r == start_rank && !board[make_square(f, r + 2 * dir)])
            moves.push_back({from, make_square(f, r + 2 * dir), std::nullopt, move_flags::kDoublePush});
        }
        for (int df : {-1, 1}) {
          if (!on_board(f + df, r + dir)) continue;
          const Square to = make_square(f + df, r + dir);
          if (board[to] && board[to]->color == them) add_pawn_move(from, to, move_flags::kCapture);
          else if (pos.ep_ && *pos.ep_ == to)
            moves.push_back({from, to, std::nullopt,
                             static_cast<std::uint8_t>(move_flags::kCapture | move_flags::kEnPassant)});
        }
        break;
      }
      case PieceType::Knight:
      case PieceType::King: {
        const auto& steps = sq->type == PieceType::Knight ? kKnightSteps : kKingSteps;
        for (auto [df, dr] : steps) {
          if (!on_board(f + df, r + dr)) continue;
          const Square to = make_square(f + df, r + dr);
          if (!board[to]) moves.push_back({from, to, std::nullopt, 0});
          else if (board[to]->color == them) moves.push_back({from, to, std::nullopt, move_flags::kCapture});
        }
        break;
      }
      case PieceType::Bishop:
      case PieceType::Rook:
      case PieceType::Queen: {
        auto slide = [&](const auto& dirs) {
          for (auto [df, dr] : dirs) {
            for (int nf = f + df, nr = r + dr; on_board(nf, nr); nf += df, nr += dr) {
              const Square to = make_square(nf, nr);
              if (!board[to]) {
                moves.push_back({from, to, std::nullopt, 0});
                continue;
              }
              if (board[to]->color == them) moves.push_back({from, to, std::nullopt, move_flags::kCapture});
              break;
            }
          }
        };
        if (sq->type != PieceType::Rook) slide(kDiagonals);
        if (sq->type != PieceType::Bishop) slide(kOrthogonals);
        break;
      }
    }
  }

  // Castling: rights, empty path, rook in place, no attacked king/transit square.
  const int home = us == Color::White ? 0 : 7;
  const Square king_from = make_square(4, home);
  if (holds(board[king_from], us, PieceType::King)) {
    const bool can_king = us == Color::White ? pos.castling_.white_king : pos.castling_.black_king;
    const bool can_queen = us == Color::White ? pos.castling_.white_queen : pos.castling_.black_queen;
    const bool checked = pos.is_attacked(king_from, them);
    if (can_king && !checked && holds(board[make_square(7, home)], us, PieceType::Rook) &&
        !board[make_square(5, home)] && !board[make_square(6, home)] &&
        !pos.is_attacked(make_square(5, home), them) && !pos.is_attacked(make_square(6, home), them))
      moves.push_back({king_from, make_square(6, home), std::nullopt, move_flags::kCastleKing});
    if (can_queen && !checked && holds(board[make_square(0, home)], us, PieceType::Rook) &&
        !board[make_square(1, home)] && !board[make_square(2, home)] && !board[make_square(3, home)] &&
        !pos.is_attacked(make_square(3, home), them) && !pos.is_attacked(make_square(2, home), them))
      moves.push_back({king_from, make_square(2, home), std::nullopt, move_flags::kCastleQueen});
  }
  return moves;
}

std::vector<Move> legal_moves(const Position& pos) {
  auto moves = pseudo_legal_moves(pos);
  const Color us = pos.side_to_move();
  std::erase_if(moves, [&](const Move& m) {
    const auto next = pos.after(m);
    return next.is_attacked(next.king_square(us), opposite(us));
  });
  return moves;
}

bool has_legal_move(const Position& pos) {
  const Color us = pos.side_to_move();
  for (const auto& m : pseudo_legal_moves(pos)) {
    const auto next = pos.after(m);
    if (!next.is_attacked(next.king_square(us), opposite(us))) return true;
  }
  return false;
}

bool is_checkmate(const Position& pos) { return pos.in_check() && !has_legal_move(pos); }

bool is_stalemate(const Position& pos) { return !pos.in_check() && !has_legal_move(pos); }

}  // namespace apet::chess
