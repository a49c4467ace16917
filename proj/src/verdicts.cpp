#include "apet/verdicts.hpp"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <algorithm>
#include <regex>

#include "apet/svgshapes.hpp"

namespace apet::verdicts {

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    pos = end + 1;
  }
  return lines;
}

std::string join(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out.push_back(' ');
    out += w;
  }
  return out;
}

bool has_operator(std::string_view s) {
  return s.find_first_of("+-*/") != std::string_view::npos || s.find("\xC3\x97") != std::string_view::npos ||
         s.find("\xC3\xB7") != std::string_view::npos || s.find("\xE2\x88\x92") != std::string_view::npos ||
         s.find("\xE2\x8B\x85") != std::string_view::npos;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

// Tries the run as an expression, peeling unbalanced outer parentheses.
std::optional<std::string> as_expression(std::string_view run) {
  run = trim(run);
  for (int guard = 0; guard < 16 && !run.empty(); ++guard) {
    if (run.find_first_of("0123456789") == std::string_view::npos || !has_operator(run)) return std::nullopt;
    try {
      expr24::parse_expr(run);
      return std::string(run);
    } catch (const expr24::ParseError&) {
    }
    const auto opens = std::count(run.begin(), run.end(), '(');
    const auto closes = std::count(run.begin(), run.end(), ')');
    if (opens > closes && run.front() == '(') run = trim(run.substr(1));
    else if (closes > opens && run.back() == ')') run = trim(run.substr(0, run.size() - 1));
    else return std::nullopt;
  }
  return std::nullopt;
}

// Length of the expression-alphabet character starting at s[i], or 0.
std::size_t expr_char(std::string_view s, std::size_t i) {
  const char c = s[i];
  if ((c >= '0' && c <= '9') || c == ' ' || c == '\t' || c == '+' || c == '-' || c == '*' ||
      c == '/' || c == '(' || c == ')')
    return 1;
  const auto rest = s.substr(i);
  if (rest.starts_with("\xC3\x97") || rest.starts_with("\xC3\xB7")) return 2;
  if (rest.starts_with("\xE2\x88\x92") || rest.starts_with("\xE2\x8B\x85")) return 3;
  return 0;
}

std::optional<std::string> extract_expression(std::string_view raw) {
  const auto lines = split_lines(raw);
  for (auto line = lines.rbegin(); line != lines.rend(); ++line) {
    std::vector<std::string_view> runs;
    std::size_t i = 0;
    while (i < line->size()) {
      const auto start = i;
      while (i < line->size()) {
        const auto w = expr_char(*line, i);
        if (!w) break;
        i += w;
      }
      if (i > start) runs.push_back(line->substr(start, i - start));
      else ++i;
    }
    for (auto run = runs.rbegin(); run != runs.rend(); ++run)
      if (auto e = as_expression(*run)) return e;
  }
  return std::nullopt;
}

std::optional<std::string> extract_san(std::string_view raw) {
  static const std::regex kSan(
      R"((?:^|[^A-Za-z0-9])(O-O-O|O-O|0-0-0|0-0|[KQRBN][a-h]?[1-8]?x?[a-h][1-8]|[a-h]x[a-h][1-8](?:=?[QRBN])?|[a-h][1-8](?:=?[QRBN])?)([+#]?)(?=[^A-Za-z0-9]|$))");
  const std::string s(raw);
  std::optional<std::string> last;
  for (auto it = std::sregex_iterator(s.begin(), s.end(), kSan); it != std::sregex_iterator(); ++it)
    last = (*it)[1].str() + (*it)[2].str();
  return last;
}

std::optional<std::string> last_option_letter(std::string_view raw) {
  static const std::regex kLetter(R"(\(([A-K])\))");
  const std::string s(raw);
  std::optional<std::string> last;
  for (auto it = std::sregex_iterator(s.begin(), s.end(), kLetter); it != std::sregex_iterator(); ++it)
    last = (*it)[0].str();
  return last;
}

std::string normalize_expression(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto rest = s.substr(i);
    if (rest.starts_with("\xC3\x97")) { out.push_back('*'); ++i; }
    else if (rest.starts_with("\xC3\xB7")) { out.push_back('/'); ++i; }
    else if (rest.starts_with("\xE2\x88\x92")) { out.push_back('-'); i += 2; }
    else if (rest.starts_with("\xE2\x8B\x85")) { out.push_back('*'); i += 2; }
    else if (s[i] != ' ' && s[i] != '\t' && s[i] != '\n' && s[i] != '\r') out.push_back(s[i]);
  }
  return out;
}

}  // namespace

bool supports(TaskKind kind, ScoringMode mode) {
  if (mode == ScoringMode::Exact) return true;
  return kind == TaskKind::GameOf24 || kind == TaskKind::CheckmateInOne;
}

ScoringMode default_mode(TaskKind kind) {
  return supports(kind, ScoringMode::Semantic) ? ScoringMode::Semantic : ScoringMode::Exact;
}

std::vector<std::string> normalize_words(std::string_view text) {
  UErrorCode status = U_ZERO_ERROR;
  const auto* nfc = icu::Normalizer2::getNFCInstance(status);
  auto ustr = icu::UnicodeString::fromUTF8(icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  if (U_SUCCESS(status)) {
    auto normalized = nfc->normalize(ustr, status);
    if (U_SUCCESS(status)) ustr = normalized;
  }
  ustr.toLower(icu::Locale::getRoot());

  std::vector<std::string> out;
  std::vector<UChar32> token;
  auto flush = [&]() {
    std::size_t b = 0, e = token.size();
    while (b < e && u_ispunct(token[b])) ++b;
    while (e > b && u_ispunct(token[e - 1])) --e;
    if (b < e) {
      icu::UnicodeString word;
      for (std::size_t i = b; i < e; ++i) word.append(token[i]);
      std::string utf8;
      word.toUTF8String(utf8);
      out.push_back(std::move(utf8));
    }
    token.clear();
  };
  for (int32_t i = 0; i < ustr.length();) {
    const UChar32 c = ustr.char32At(i);
    i += U16_LENGTH(c);
    if (u_isUWhiteSpace(c)) flush();
    else token.push_back(c);
  }
  flush();
  return out;
}

std::vector<std::string> sort_words(std::vector<std::string> words) {
  // UTF-8 byte order coincides with code-point order.
  std::stable_sort(words.begin(), words.end());
  return words;
}

std::vector<std::string> word_list_of(std::string_view input) {
  const auto marker = input.rfind("List:");
  if (marker != std::string_view::npos) input = input.substr(marker + 5);
  return normalize_words(input);
}

expr24::Numbers numbers_of(std::string_view input) {
  static const std::regex kInt(R"(\d+)");
  const std::string s(input);
  std::vector<std::int64_t> all;
  for (auto it = std::sregex_iterator(s.begin(), s.end(), kInt); it != std::sregex_iterator(); ++it) {
    try {
      all.push_back(std::stoll(it->str()));
    } catch (const std::out_of_range&) {
      throw InstanceParseError("number too large in Game of 24 input");
    }
  }
  if (all.size() < 4) throw InstanceParseError("Game of 24 input has fewer than four numbers");
  return {all[all.size() - 4], all[all.size() - 3], all[all.size() - 2], all[all.size() - 1]};
}

chess::Position position_of(std::string_view input, bool fen_input) {
  try {
    if (fen_input) return chess::Position::from_fen(trim(input));
    static const std::regex kFirstMove(R"((?:^|\s)1\.)");
    const std::string s(input);
    std::smatch m;
    std::string moves = s;
    if (std::regex_search(s, m, kFirstMove)) moves = s.substr(static_cast<std::size_t>(m.position(0)));
    return chess::position_from_moves(std::string_view(moves));
  } catch (const chess::ChessError& e) {
    throw InstanceParseError(std::string("chess input: ") + e.what());
  }
}

std::string normalize_san(std::string_view san) {
  std::string out;
  for (char c : san) {
    if (c == ' ' || c == '\t' || c == '+' || c == '#' || c == '!' || c == '?') continue;
    out.push_back(c == '0' ? 'O' : c);
  }
  return out;
}

std::optional<std::string> option_letter(std::string_view text) {
  static const std::regex kLetter(R"(\(([A-Z])\))");
  const std::string s(text);
  std::smatch m;
  if (std::regex_search(s, m, kLetter)) return m[0].str();
  return std::nullopt;
}

std::optional<std::string> extract_answer(std::string_view raw, TaskKind kind) {
  switch (kind) {
    case TaskKind::WordSorting: {
      const auto lines = split_lines(raw);
      for (auto line = lines.rbegin(); line != lines.rend(); ++line) {
        auto words = normalize_words(*line);
        if (!words.empty()) return join(words);
      }
      return std::nullopt;
    }
    case TaskKind::GeometricShapes: return last_option_letter(raw);
    case TaskKind::GameOf24: return extract_expression(raw);
    case TaskKind::CheckmateInOne: return extract_san(raw);
  }
  return std::nullopt;
}

Verdict verify(const TaskInstance& instance, const std::optional<std::string>& extracted,
               ScoringMode mode, const VerifyOptions& options) {
  if (!supports(instance.kind, mode))
    throw Error(std::string(to_string(instance.kind)) + " does not support " +
                std::string(to_string(mode)) + " scoring");
  if (!extracted) return Verdict::fail(mode, "no answer found");

  switch (instance.kind) {
    case TaskKind::WordSorting: {
      if (normalize_words(*extracted) == normalize_words(instance.target)) return Verdict::pass(mode);
      return Verdict::fail(mode, "word sequence differs from target");
    }
    case TaskKind::GeometricShapes: {
      const auto target = option_letter(instance.target);
      if (!target) throw InstanceParseError("Geometric Shapes target has no option letter");
      const auto got = option_letter(*extracted);
      if (got && *got == *target) return Verdict::pass(mode);
      return Verdict::fail(mode, "option " + extracted->substr(0, 40) + " is not " + *target);
    }
    case TaskKind::GameOf24: {
      if (mode == ScoringMode::Semantic) {
        auto v = expr24::check_24(numbers_of(instance.input), *extracted);
        v.mode = mode;
        return v;
      }
      if (normalize_expression(*extracted) == normalize_expression(instance.target))
        return Verdict::pass(mode);
      return Verdict::fail(mode, "expression differs from target");
    }
    case TaskKind::CheckmateInOne: {
      if (mode == ScoringMode::Semantic)
        return chess::verify_mate_in_one(position_of(instance.input, options.fen_input), *extracted);
      if (normalize_san(*extracted) == normalize_san(instance.target)) return Verdict::pass(mode);
      return Verdict::fail(mode, "move differs from target");
    }
  }
  return Verdict::fail(mode, "unsupported task");
}

Verdict score(const TaskInstance& instance, std::string_view raw, ScoringMode mode,
              const VerifyOptions& options) {
  return verify(instance, extract_answer(raw, instance.kind), mode, options);
}

Verdict sanity_check(const TaskInstance& instance, const VerifyOptions& options) {
  constexpr auto mode = ScoringMode::Semantic;
  switch (instance.kind) {
    case TaskKind::WordSorting: {
      if (normalize_words(instance.target) == sort_words(word_list_of(instance.input)))
        return Verdict::pass(mode);
      return Verdict::fail(mode, "target is not the sorted input word list");
    }
    case TaskKind::GameOf24: {
      const auto numbers = numbers_of(instance.input);
      auto v = expr24::check_24(numbers, instance.target);
      if (v.correct) return v;
      if (!expr24::solve_24(numbers)) return Verdict::fail(mode, "puzzle has no solution");
      return Verdict::fail(mode, "target is not a valid solution: " + v.reason);
    }
    case TaskKind::GeometricShapes: {
      const auto target = option_letter(instance.target);
      if (!target) return Verdict::fail(mode, "target has no option letter");
      svg::ShapeClass shape;
      try {
        shape = svg::classify(svg::parse_path(svg::extract_path_data(instance.input)));
      } catch (const svg::PathParseError& e) {
        return Verdict::fail(mode, e.what());
      }
      if (shape == svg::ShapeClass::Unknown) return Verdict::fail(mode, "classifier returned unknown");
      try {
        const auto letter = svg::option_for(shape, svg::parse_options(instance.input));
        if (letter == *target) return Verdict::pass(mode);
        return Verdict::fail(mode, "classifier says " + letter + " " + std::string(svg::to_string(shape)));
      } catch (const svg::NoSuchOption& e) {
        return Verdict::fail(mode, e.what());
      }
    }
    case TaskKind::CheckmateInOne:
      return chess::verify_mate_in_one(position_of(instance.input, options.fen_input), instance.target);
  }
  return Verdict::fail(mode, "unsupported task");
}

}  // namespace apet::verdicts
