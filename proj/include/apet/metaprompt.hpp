#pragma once
// Optimizer request construction and prompting-technique detection.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "apet/core.hpp"

namespace apet::metaprompt {

class EmptySample : public Error {
 public:
  EmptySample() : Error("sample prompt is empty") {}
};

class TemplateError : public Error {
 public:
  using Error::Error;
};

inline constexpr std::string_view kPlaceholder = "{sample_prompt}";

// System and user text of the optimizer request. The user text holds exactly
// one placeholder; substitution is a single pass at that site.
class OptimizerTemplate {
 public:
  OptimizerTemplate(std::string system_text, std::string user_text);

  // The compiled-in transcription of the optimizer instructions.
  static const OptimizerTemplate& golden();
  // Loads optimizer_system.txt and optimizer_user.txt from a directory.
  static OptimizerTemplate load(const std::string& directory);

  const std::string& system_text() const { return system_; }
  const std::string& user_text() const { return user_; }

  std::string render_user(std::string_view sample) const;

 private:
  std::string system_;
  std::string user_;
  std::size_t placeholder_at_;
};

// [system, user] with the sample substituted verbatim. Throws EmptySample.
std::vector<Message> build_optimizer_messages(std::string_view sample);
std::vector<Message> build_optimizer_messages(const OptimizerTemplate& tmpl,
                                              std::string_view sample);

struct Postprocessed {
  std::string text;
  bool fence_stripped = false;
};

// Trims surrounding whitespace and removes one matching pair of quote-fence
// lines (a line of three or more '"' or '`') wrapping the whole reply.
Postprocessed postprocess_optimized(std::string_view raw);

// Pattern families, versioned so reports can say which rules produced them.
inline constexpr std::string_view kRulesVersion = "techniques-rules/1";

struct RuleFamily {
  std::string_view name;
  std::span<const std::string_view> patterns;  // ECMAScript, matched case-insensitively
};

std::span<const RuleFamily> rule_families();  // expert, cot, tot in that order

TechniqueSet classify_techniques(std::string_view optimized_prompt);

namespace detail {
extern const std::string_view kGoldenSystem;
extern const std::string_view kGoldenUser;
}  // namespace detail

}  // namespace apet::metaprompt
