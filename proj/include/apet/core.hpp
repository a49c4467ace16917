#pragma once
// Domain types shared by every module, plus the one-line trial encoding.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace apet {

// Root of every exception this library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MalformedRecord : public Error {
 public:
  using Error::Error;
};

enum class TaskKind : std::uint8_t { WordSorting, GameOf24, GeometricShapes, CheckmateInOne };

inline constexpr std::array<TaskKind, 4> kAllTaskKinds = {
    TaskKind::WordSorting, TaskKind::GameOf24, TaskKind::GeometricShapes,
    TaskKind::CheckmateInOne};

// Snake-case identifier used on the command line and in persisted records.
std::string_view to_string(TaskKind kind);
// Human-readable name used in report tables ("Game Of 24").
std::string_view display_name(TaskKind kind);
std::optional<TaskKind> parse_task_kind(std::string_view text);

struct TaskInstance {
  TaskKind kind{};
  std::size_t index = 0;
  std::string input;
  std::string target;

  bool operator==(const TaskInstance&) const = default;
};

enum class Role : std::uint8_t { System, User, Assistant };

std::string_view to_string(Role role);
std::optional<Role> parse_role(std::string_view text);

struct Message {
  Role role{};
  std::string content;

  bool operator==(const Message&) const = default;
};

struct TechniqueSet {
  bool expert = false;
  bool cot = false;
  bool tot = false;

  bool operator==(const TechniqueSet&) const = default;
};

enum class UsageBucket : std::uint8_t {
  ExpertOnly,
  CoTOnly,
  ToTOnly,
  ExpertCoT,
  ExpertToT,
  CoTToT,
  AllThree,
  NoneDetected,
};

inline constexpr std::array<UsageBucket, 8> kAllBuckets = {
    UsageBucket::ExpertOnly, UsageBucket::CoTOnly,   UsageBucket::ToTOnly,
    UsageBucket::ExpertCoT,  UsageBucket::ExpertToT, UsageBucket::CoTToT,
    UsageBucket::AllThree,   UsageBucket::NoneDetected};

UsageBucket bucket_of(TechniqueSet set);
TechniqueSet set_of(UsageBucket bucket);
// Column heading as printed in the usage tables ("Expert + CoT").
std::string_view display_name(UsageBucket bucket);

enum class ScoringMode : std::uint8_t { Exact, Semantic };

std::string_view to_string(ScoringMode mode);
std::optional<ScoringMode> parse_scoring_mode(std::string_view text);

struct Verdict {
  bool correct = false;
  ScoringMode mode = ScoringMode::Exact;
  std::string reason;  // non-empty whenever correct is false

  static Verdict pass(ScoringMode mode) { return {true, mode, "ok"}; }
  static Verdict fail(ScoringMode mode, std::string reason) {
    return {false, mode, std::move(reason)};
  }

  bool operator==(const Verdict&) const = default;
};

struct TrialRecord {
  TaskKind kind{};
  std::size_t index = 0;
  std::string sample_prompt;
  std::string optimized_prompt;
  std::string benchmark_answer;
  std::string answer_original;
  std::string answer_optimized;
  std::vector<Message> original_messages;
  std::vector<Message> optimized_messages;
  TechniqueSet techniques;
  Verdict verdict_original;
  Verdict verdict_optimized;

  bool operator==(const TrialRecord&) const = default;
};

// Single-line structured encoding (no embedded newlines), UTF-8.
std::string encode_trial(const TrialRecord& record);
// Throws MalformedRecord on any schema violation or truncated input.
TrialRecord decode_trial(std::string_view line);

// Reads every non-blank line of a trial file. Throws MalformedRecord with the
// offending line number.
std::vector<TrialRecord> read_trial_file(const std::string& path);

}  // namespace apet
