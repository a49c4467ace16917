#include "apet/core.hpp"

#include <fstream>
#include <json.hpp>

namespace apet {

using ojson = nlohmann::ordered_json;

namespace {

constexpr std::array<std::string_view, 4> kKindIds = {"word_sorting", "game_of_24",
                                                      "geometric_shapes", "checkmate_in_one"};
constexpr std::array<std::string_view, 4> kKindNames = {"Word Sorting", "Game Of 24",
                                                        "Geometric Shapes", "Checkmate in One"};
constexpr std::array<std::string_view, 3> kRoleIds = {"system", "user", "assistant"};
constexpr std::array<std::string_view, 8> kBucketNames = {
    "Expert Only",  "CoT Only",  "ToT Only",        "Expert + CoT",
    "Expert + ToT", "CoT + ToT", "Expert + CoT + ToT", "None Detected"};

ojson encode_messages(const std::vector<Message>& messages) {
  ojson out = ojson::array();
  for (const auto& m : messages) {
    ojson item;
    item["role"] = to_string(m.role);
    item["content"] = m.content;
    out.push_back(std::move(item));
  }
  return out;
}

ojson encode_verdict(const Verdict& v) {
  ojson out;
  out["correct"] = v.correct;
  out["mode"] = to_string(v.mode);
  out["reason"] = v.reason;
  return out;
}

const ojson& field(const ojson& obj, const char* name) {
  auto it = obj.find(name);
  if (it == obj.end()) throw MalformedRecord(std::string("missing field \"") + name + "\"");
  return *it;
}

std::string text_field(const ojson& obj, const char* name) {
  const auto& v = field(obj, name);
  if (!v.is_string()) throw MalformedRecord(std::string("field \"") + name + "\" is not a string");
  return v.get<std::string>();
}

bool bool_field(const ojson& obj, const char* name) {
  const auto& v = field(obj, name);
  if (!v.is_boolean())
    throw MalformedRecord(std::string("field \"") + name + "\" is not a boolean");
  return v.get<bool>();
}

std::vector<Message> decode_messages(const ojson& obj, const char* name) {
  const auto& arr = field(obj, name);
  if (!arr.is_array()) throw MalformedRecord(std::string("field \"") + name + "\" is not an array");
  std::vector<Message> out;
  out.reserve(arr.size());
  for (const auto& item : arr) {
    if (!item.is_object()) throw MalformedRecord(std::string(name) + ": message is not an object");
    auto role = parse_role(text_field(item, "role"));
    if (!role) throw MalformedRecord(std::string(name) + ": unknown role");
    out.push_back({*role, text_field(item, "content")});
  }
  return out;
}

Verdict decode_verdict(const ojson& obj, const char* name) {
  const auto& v = field(obj, name);
  if (!v.is_object()) throw MalformedRecord(std::string("field \"") + name + "\" is not an object");
  Verdict out;
  out.correct = bool_field(v, "correct");
  auto mode = parse_scoring_mode(text_field(v, "mode"));
  if (!mode) throw MalformedRecord(std::string(name) + ": unknown scoring mode");
  out.mode = *mode;
  out.reason = text_field(v, "reason");
  if (!out.correct && out.reason.empty())
    throw MalformedRecord(std::string(name) + ": incorrect verdict without reason");
  return out;
}

}  // namespace

std::string_view to_string(TaskKind kind) { return kKindIds[static_cast<std::size_t>(kind)]; }

std::string_view display_name(TaskKind kind) {
  return kKindNames[static_cast<std::size_t>(kind)];
}

std::optional<TaskKind> parse_task_kind(std::string_view text) {
  for (auto kind : kAllTaskKinds)
    if (to_string(kind) == text) return kind;
  return std::nullopt;
}

std::string_view to_string(Role role) { return kRoleIds[static_cast<std::size_t>(role)]; }

std::optional<Role> parse_role(std::string_view text) {
  for (std::size_t i = 0; i < kRoleIds.size(); ++i)
    if (kRoleIds[i] == text) return static_cast<Role>(i);
  return std::nullopt;
}

UsageBucket bucket_of(TechniqueSet s) {
  const int bits = (s.expert ? 1 : 0) | (s.cot ? 2 : 0) | (s.tot ? 4 : 0);
  switch (bits) {
    case 1: return UsageBucket::ExpertOnly;
    case 2: return UsageBucket::CoTOnly;
    case 4: return UsageBucket::ToTOnly;
    case 3: return UsageBucket::ExpertCoT;
    case 5: return UsageBucket::ExpertToT;
    case 6: return UsageBucket::CoTToT;
    case 7: return UsageBucket::AllThree;
    default: return UsageBucket::NoneDetected;
  }
}

TechniqueSet set_of(UsageBucket b) {
  switch (b) {
    case UsageBucket::ExpertOnly: return {true, false, false};
    case UsageBucket::CoTOnly: return {false, true, false};
    case UsageBucket::ToTOnly: return {false, false, true};
    case UsageBucket::ExpertCoT: return {true, true, false};
    case UsageBucket::ExpertToT: return {true, false, true};
    case UsageBucket::CoTToT: return {false, true, true};
    case UsageBucket::AllThree: return {true, true, true};
    case UsageBucket::NoneDetected: return {};
  }
  return {};
}

std::string_view display_name(UsageBucket bucket) {
  return kBucketNames[static_cast<std::size_t>(bucket)];
}

std::string_view to_string(ScoringMode mode) {
  return mode == ScoringMode::Exact ? "exact" : "semantic";
}

std::optional<ScoringMode> parse_scoring_mode(std::string_view text) {
  if (text == "exact") return ScoringMode::Exact;
  if (text == "semantic") return ScoringMode::Semantic;
  return std::nullopt;
}

std::string encode_trial(const TrialRecord& r) {
  ojson j;
  j["kind"] = to_string(r.kind);
  j["index"] = r.index;
  j["sample_prompt"] = r.sample_prompt;
  j["optimized_prompt"] = r.optimized_prompt;
  j["benchmark_answer"] = r.benchmark_answer;
  j["answer_original"] = r.answer_original;
  j["answer_optimized"] = r.answer_optimized;
  j["original_messages"] = encode_messages(r.original_messages);
  j["optimized_messages"] = encode_messages(r.optimized_messages);
  j["techniques"] = {{"expert", r.techniques.expert},
                     {"cot", r.techniques.cot},
                     {"tot", r.techniques.tot}};
  j["verdict_original"] = encode_verdict(r.verdict_original);
  j["verdict_optimized"] = encode_verdict(r.verdict_optimized);
  // Compact dump escapes control characters, so the result is one line.
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::strict);
}

TrialRecord decode_trial(std::string_view line) {
  ojson j;
  try {
    j = ojson::parse(line);
  } catch (const ojson::parse_error& e) {
    throw MalformedRecord(std::string("unparseable record: ") + e.what());
  }
  if (!j.is_object()) throw MalformedRecord("record is not an object");

  TrialRecord r;
  auto kind = parse_task_kind(text_field(j, "kind"));
  if (!kind) throw MalformedRecord("unknown task kind");
  r.kind = *kind;
  const auto& index = field(j, "index");
  if (!index.is_number_unsigned()) throw MalformedRecord("field \"index\" is not a nonnegative integer");
  r.index = index.get<std::size_t>();
  r.sample_prompt = text_field(j, "sample_prompt");
  r.optimized_prompt = text_field(j, "optimized_prompt");
  r.benchmark_answer = text_field(j, "benchmark_answer");
  r.answer_original = text_field(j, "answer_original");
  r.answer_optimized = text_field(j, "answer_optimized");
  r.original_messages = decode_messages(j, "original_messages");
  r.optimized_messages = decode_messages(j, "optimized_messages");
  const auto& tech = field(j, "techniques");
  if (!tech.is_object()) throw MalformedRecord("field \"techniques\" is not an object");
  r.techniques = {bool_field(tech, "expert"), bool_field(tech, "cot"), bool_field(tech, "tot")};
  r.verdict_original = decode_verdict(j, "verdict_original");
  r.verdict_optimized = decode_verdict(j, "verdict_optimized");
  return r;
}

std::vector<TrialRecord> read_trial_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open trial file: " + path);
  std::vector<TrialRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(decode_trial(line));
    } catch (const MalformedRecord& e) {
      throw MalformedRecord(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace apet
