// SAN rendering/parsing and move-list replay.

#include <regex>

#include "apet/chess.hpp"

namespace apet::chess {

namespace {

constexpr std::string_view kPieceLetters = "PNBRQK";

std::string describe(SanErrorKind kind) {
  switch (kind) {
    case SanErrorKind::Malformed: return "malformed SAN";
    case SanErrorKind::Ambiguous: return "ambiguous SAN";
    case SanErrorKind::NoMatch: return "no legal move matches";
  }
  return {};
}

std::string_view strip_annotations(std::string_view san) {
  while (!san.empty() && (san.front() == ' ' || san.front() == '\t')) san.remove_prefix(1);
  while (!san.empty() && std::string_view("+#!? \t\r\n").find(san.back()) != std::string_view::npos)
    san.remove_suffix(1);
  return san;
}

std::optional<PieceType> piece_from_letter(char c) {
  if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  const auto idx = kPieceLetters.find(c);
  if (idx == std::string_view::npos) return std::nullopt;
  return static_cast<PieceType>(idx);
}

bool is_result(std::string_view t) {
  return t == "1-0" || t == "0-1" || t == "1/2-1/2" || t == "*" || t == "½-½";
}

}  // namespace

SanError::SanError(SanErrorKind kind, std::string san, std::string detail)
    : ChessError(describe(kind) + " \"" + san + "\"" + (detail.empty() ? "" : ": " + detail)),
      kind_(kind) {}

MoveSequenceError::MoveSequenceError(Kind kind, std::size_t index, std::string token,
                                     std::string detail)
    : ChessError(std::string(kind == Kind::IllegalMove ? "illegal move" : "malformed SAN") +
                 " at token " + std::to_string(index) + " \"" + token + "\": " + detail),
      kind_(kind),
      index_(index) {}

std::string to_san(const Position& pos, const Move& m) {
  std::string out;
  const auto piece = *pos.at(m.from);
  if (m.flags & move_flags::kCastleKing) {
    out = "O-O";
  } else if (m.flags & move_flags::kCastleQueen) {
    out = "O-O-O";
  } else if (piece.type == PieceType::Pawn) {
    if (m.is_capture()) {
      out.push_back(static_cast<char>('a' + file_of(m.from)));
      out.push_back('x');
    }
    out += square_name(m.to);
    if (m.promotion) {
      out.push_back('=');
      out.push_back(kPieceLetters[static_cast<int>(*m.promotion)]);
    }
  } else {
    out.push_back(kPieceLetters[static_cast<int>(piece.type)]);
    bool clash = false, same_file = false, same_rank = false;
    for (const auto& other : legal_moves(pos)) {
      if (other.to != m.to || other.from == m.from) continue;
      if (pos.at(other.from)->type != piece.type) continue;
      clash = true;
      same_file |= file_of(other.from) == file_of(m.from);
      same_rank |= rank_of(other.from) == rank_of(m.from);
    }
    if (clash) {
      if (!same_file) out.push_back(static_cast<char>('a' + file_of(m.from)));
      else if (!same_rank) out.push_back(static_cast<char>('1' + rank_of(m.from)));
      else out += square_name(m.from);
    }
    if (m.is_capture()) out.push_back('x');
    out += square_name(m.to);
  }
  const auto next = pos.after(m);
  if (next.in_check()) out.push_back(has_legal_move(next) ? '+' : '#');
  return out;
}

Move parse_san(const Position& pos, std::string_view raw) {
  const std::string original(raw);
  const auto san = std::string(strip_annotations(raw));
  if (san.empty()) throw SanError(SanErrorKind::Malformed, original, "empty move");

  std::string castle = san;
  for (auto& c : castle)
    if (c == '0' || c == 'o') c = 'O';
  if (castle == "O-O" || castle == "O-O-O") {
    const auto flag = castle == "O-O" ? move_flags::kCastleKing : move_flags::kCastleQueen;
    for (const auto& m : legal_moves(pos))
      if (m.flags & flag) return m;
    throw SanError(SanErrorKind::NoMatch, original, "castling is not legal here");
  }

  static const std::regex kSan(R"(^([KQRBN])?([a-h])?([1-8])?([x:])?([a-h][1-8])(?:=?([QRBNqrbn]))?$)");
  std::smatch mt;
  if (!std::regex_match(san, mt, kSan)) throw SanError(SanErrorKind::Malformed, original, "");

  const auto type = mt[1].matched ? *piece_from_letter(mt[1].str()[0]) : PieceType::Pawn;
  // -1 when the disambiguator is absent.
  const int from_file = mt[2].matched ? mt[2].str()[0] - 'a' : -1;
  const int from_rank = mt[3].matched ? mt[3].str()[0] - '1' : -1;
  const bool capture_marked = mt[4].matched;
  const Square to = *parse_square(mt[5].str());
  const std::optional<PieceType> promotion =
      mt[6].matched ? piece_from_letter(mt[6].str()[0]) : std::nullopt;
  if (promotion && type != PieceType::Pawn)
    throw SanError(SanErrorKind::Malformed, original, "only pawns promote");

  std::vector<Move> matches;
  for (const auto& m : legal_moves(pos)) {
    if (m.to != to || m.is_castle() || pos.at(m.from)->type != type) continue;
    if (from_file >= 0 && file_of(m.from) != from_file) continue;
    if (from_rank >= 0 && rank_of(m.from) != from_rank) continue;
    if (capture_marked && !m.is_capture()) continue;
    if (m.promotion != promotion) continue;
    matches.push_back(m);
  }
  if (matches.empty()) {
    const bool needs_promotion = type == PieceType::Pawn && !promotion && (rank_of(to) == 0 || rank_of(to) == 7);
    throw SanError(SanErrorKind::NoMatch, original, needs_promotion ? "promotion piece required" : "");
  }
  if (matches.size() > 1)
    throw SanError(SanErrorKind::Ambiguous, original,
                   std::to_string(matches.size()) + " legal moves match");
  return matches.front();
}

std::vector<std::string> tokenize_moves(std::string_view text) {
  std::string cleaned;
  int brace = 0, paren = 0;
  for (char c : text) {
    if (c == '{') ++brace;
    else if (c == '}' && brace) --brace;
    else if (c == '(' && !brace) ++paren;
    else if (c == ')' && paren && !brace) --paren;
    else if (!brace && !paren) cleaned.push_back(c);
    else continue;
    if (c == '{' || c == '}' || c == '(' || c == ')') cleaned.push_back(' ');
  }

  static const std::regex kMoveNumber(R"(^\d+\.+)");
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < cleaned.size()) {
    const auto start = cleaned.find_first_not_of(" \t\r\n", pos);
    if (start == std::string::npos) break;
    auto end = cleaned.find_first_of(" \t\r\n", start);
    if (end == std::string::npos) end = cleaned.size();
    auto token = std::regex_replace(cleaned.substr(start, end - start), kMoveNumber, "");
    pos = end;
    if (token.empty() || is_result(token) || token.front() == '$') continue;
    if (token.find_first_not_of('.') == std::string::npos) continue;
    out.push_back(std::move(token));
  }
  return out;
}

Position position_from_moves(const std::vector<std::string>& san_sequence) {
  auto pos = Position::initial();
  for (std::size_t i = 0; i < san_sequence.size(); ++i) {
    try {
      pos = pos.after(parse_san(pos, san_sequence[i]));
    } catch (const SanError& e) {
      const auto kind = e.kind() == SanErrorKind::Malformed ? MoveSequenceError::Kind::MalformedSan
                                                           : MoveSequenceError::Kind::IllegalMove;
      throw MoveSequenceError(kind, i, san_sequence[i], e.what());
    }
  }
  return pos;
}

Position position_from_moves(std::string_view move_text) {
  return position_from_moves(tokenize_moves(move_text));
}

Verdict verify_mate_in_one(const Position& pos, std::string_view candidate_san) {
  constexpr auto mode = ScoringMode::Semantic;
  Move move;
  try {
    move = parse_san(pos, candidate_san);
  } catch (const SanError& e) {
    return Verdict::fail(mode, e.what());
  }
  if (!is_checkmate(pos.after(move)))
    return Verdict::fail(mode, "resulting position is not checkmate");
  return Verdict::pass(mode);
}

}  // namespace apet::chess
