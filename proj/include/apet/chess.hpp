#pragma once
// Chess rules: enough to build positions from SAN move lists and verify
// mate-in-one answers. Squares are 0..63 with a1 = 0, h8 = 63.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "apet/core.hpp"

namespace apet::chess {

enum class Color : std::uint8_t { White, Black };
enum class PieceType : std::uint8_t { Pawn, Knight, Bishop, Rook, Queen, King };

constexpr Color opposite(Color c) { return c == Color::White ? Color::Black : Color::White; }

struct Piece {
  Color color;
  PieceType type;
  bool operator==(const Piece&) const = default;
};

using Square = int;

constexpr int file_of(Square s) { return s & 7; }
constexpr int rank_of(Square s) { return s >> 3; }
constexpr Square make_square(int file, int rank) { return rank * 8 + file; }
std::string square_name(Square s);
std::optional<Square> parse_square(std::string_view name);

class ChessError : public Error {
 public:
  using Error::Error;
};

class FenError : public ChessError {
 public:
  using ChessError::ChessError;
};

class InvalidPosition : public ChessError {
 public:
  using ChessError::ChessError;
};

enum class SanErrorKind : std::uint8_t { Malformed, Ambiguous, NoMatch };

class SanError : public ChessError {
 public:
  SanError(SanErrorKind kind, std::string san, std::string detail);
  SanErrorKind kind() const { return kind_; }

 private:
  SanErrorKind kind_;
};

// Raised by position_from_moves; index counts move tokens from zero.
class MoveSequenceError : public ChessError {
 public:
  enum class Kind : std::uint8_t { IllegalMove, MalformedSan };
  MoveSequenceError(Kind kind, std::size_t index, std::string token, std::string detail);
  Kind kind() const { return kind_; }
  std::size_t index() const { return index_; }

 private:
  Kind kind_;
  std::size_t index_;
};

struct CastlingRights {
  bool white_king = false;
  bool white_queen = false;
  bool black_king = false;
  bool black_queen = false;
  bool operator==(const CastlingRights&) const = default;
};

namespace move_flags {
inline constexpr std::uint8_t kCapture = 1;
inline constexpr std::uint8_t kDoublePush = 2;
inline constexpr std::uint8_t kEnPassant = 4;
inline constexpr std::uint8_t kCastleKing = 8;
inline constexpr std::uint8_t kCastleQueen = 16;
}  // namespace move_flags

struct Move {
  Square from = 0;
  Square to = 0;
  std::optional<PieceType> promotion;
  std::uint8_t flags = 0;

  bool is_capture() const { return flags & move_flags::kCapture; }
  bool is_castle() const { return flags & (move_flags::kCastleKing | move_flags::kCastleQueen); }
  bool operator==(const Move&) const = default;
};

// Long algebraic (e2e4, e7e8q).
std::string to_uci(const Move& m);

class Position {
 public:
  static Position initial();
  // "placement side castling ep halfmove fullmove"; the two clocks may be
  // omitted. Throws FenError / InvalidPosition.
  static Position from_fen(std::string_view fen);

  std::string fen() const;

  const std::optional<Piece>& at(Square s) const { return board_[s]; }
  Color side_to_move() const { return side_; }
  const CastlingRights& castling() const { return castling_; }
  std::optional<Square> en_passant() const { return ep_; }
  int halfmove_clock() const { return halfmove_; }
  int fullmove_number() const { return fullmove_; }

  Square king_square(Color c) const;
  bool is_attacked(Square s, Color by) const;
  bool in_check() const;

  // Applies a move from legal_moves() to a copy; the original is untouched.
  Position after(const Move& m) const;

  bool operator==(const Position&) const = default;

 private:
  std::array<std::optional<Piece>, 64> board_{};
  Color side_ = Color::White;
  CastlingRights castling_{};
  std::optional<Square> ep_;
  int halfmove_ = 0;
  int fullmove_ = 1;

  friend std::vector<Move> pseudo_legal_moves(const Position& pos);
};

std::vector<Move> pseudo_legal_moves(const Position& pos);
std::vector<Move> legal_moves(const Position& pos);
bool has_legal_move(const Position& pos);

bool is_checkmate(const Position& pos);
bool is_stalemate(const Position& pos);

// SAN with disambiguation, promotion and +/# suffix.
std::string to_san(const Position& pos, const Move& m);

// Accepts O-O / 0-0 castling, optional "x", "=" for promotion, trailing
// + # ! ? annotations. Throws SanError.
Move parse_san(const Position& pos, std::string_view san);

// Splits PGN-ish text into move tokens, dropping move numbers ("1.", "12..."),
// results and {comments}.
std::vector<std::string> tokenize_moves(std::string_view text);

Position position_from_moves(const std::vector<std::string>& san_sequence);
Position position_from_moves(std::string_view move_text);

// Semantic scoring: the candidate must be a legal move that mates.
Verdict verify_mate_in_one(const Position& pos, std::string_view candidate_san);

// Leaf-node counts. perft_parallel splits the root moves across OpenMP
// threads; perft is the serial reference.
std::uint64_t perft(const Position& pos, int depth);
std::uint64_t perft_parallel(const Position& pos, int depth);

}  // namespace apet::chess
