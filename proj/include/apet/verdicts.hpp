#pragma once
// Answer extraction from free-form model output and per-task verification.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "apet/chess.hpp"
#include "apet/core.hpp"
#include "apet/expr24.hpp"

namespace apet::verdicts {

// The task instance's own input could not be interpreted; a dataset fault.
class InstanceParseError : public Error {
 public:
  using Error::Error;
};

bool supports(TaskKind kind, ScoringMode mode);
ScoringMode default_mode(TaskKind kind);

// nullopt means no answer could be found in the text; never throws.
std::optional<std::string> extract_answer(std::string_view raw, TaskKind kind);

// Unicode NFC + lower-case, split on whitespace, punctuation stripped from
// token edges, empty tokens dropped.
std::vector<std::string> normalize_words(std::string_view text);

// Ascending code-point order, stable.
std::vector<std::string> sort_words(std::vector<std::string> words);

// Words to sort: the text after the last "List:" marker, else the whole input.
std::vector<std::string> word_list_of(std::string_view input);

// The last four integers in the input text.
expr24::Numbers numbers_of(std::string_view input);

// Position from a move list (starting at the first "1." if present) or, when
// fen_input is set, from a FEN string.
chess::Position position_of(std::string_view input, bool fen_input = false);

// Canonical SAN for exact comparison: annotations dropped, 0-0 spelled O-O.
std::string normalize_san(std::string_view san);

// First "(X)" in the text, e.g. "(G) pentagon" -> "(G)".
std::optional<std::string> option_letter(std::string_view text);

struct VerifyOptions {
  bool fen_input = false;
};

// `extracted` is nullopt when extraction found nothing. Throws
// InstanceParseError when the instance itself is unusable.
Verdict verify(const TaskInstance& instance, const std::optional<std::string>& extracted,
               ScoringMode mode, const VerifyOptions& options = {});

// extract_answer followed by verify.
Verdict score(const TaskInstance& instance, std::string_view raw, ScoringMode mode,
              const VerifyOptions& options = {});

// Checks that the benchmark target is itself a correct answer according to
// the task's independent oracle. Geometric Shapes compares the SVG
// classifier's option letter with the target letter.
Verdict sanity_check(const TaskInstance& instance, const VerifyOptions& options = {});

}  // namespace apet::verdicts
