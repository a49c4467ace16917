#include "apet/metaprompt.hpp"

#include <array>
#include <fstream>
#include <regex>
#include <sstream>

namespace apet::metaprompt {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TemplateError("cannot read template file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::size_t locate_placeholder(const std::string& user) {
  const auto first = user.find(kPlaceholder);
  if (first == std::string::npos) throw TemplateError("user template has no {sample_prompt}");
  if (user.find(kPlaceholder, first + 1) != std::string::npos)
    throw TemplateError("user template has more than one {sample_prompt}");
  return first;
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

bool is_fence(std::string_view line) {
  line = trim(line);
  if (line.size() < 3) return false;
  const char c = line.front();
  if (c != '"' && c != '`') return false;
  return line.find_first_not_of(c) == std::string_view::npos;
}

// R1: second-person expert framing.
constexpr std::array<std::string_view, 8> kExpertPatterns = {
    R"(\byou are (?:a|an|the) [^.\n]{0,80}?expert)",
    R"(\byou are (?:a|an) (?:seasoned|world-class|world class|renowned|distinguished|accomplished|highly|experienced|skilled|leading|master|grandmaster|professional|specialist|virtuoso))",
    R"(\bimagine yourself as)",
    R"(\bimagine you are (?:a|an) )",
    R"(\bas (?:a|an) (?:seasoned|world-class|world class|renowned|distinguished|accomplished|highly skilled|experienced|expert))",
    R"(\b(?:assume|take on|adopt) the (?:role|persona) of)",
    R"(\byour expertise)",
    R"(\bact as (?:a|an) [^.\n]{0,60}?expert)",
};

// R2: step-sequencing cues. Numbered step lists are detected separately
// (see has_numbered_steps).
constexpr std::array<std::string_view, 4> kCotPatterns = {
    R"(step-by-step)",
    R"(step by step)",
    R"(let's think)",
    R"(let us think)",
};

// R3: multi-expert deliberation cues.
constexpr std::array<std::string_view, 6> kTotPatterns = {
    R"(\b(?:two|three|four|five|several|multiple|\d) (?:different |distinct |independent )?experts)",
    R"(\bexperts\b[^.\n]{0,60}?discuss)",
    R"(share (?:it|this|them|their [a-z]+) with the group)",
    R"(if any expert reali[sz])",
    R"(\btree of thought)",
    R"(\bpanel of experts)",
};

const std::array<RuleFamily, 3> kFamilies = {{
    {"expert", kExpertPatterns},
    {"cot", kCotPatterns},
    {"tot", kTotPatterns},
}};

struct CompiledFamily {
  std::vector<std::regex> patterns;
};

const std::array<CompiledFamily, 3>& compiled() {
  static const std::array<CompiledFamily, 3> families = [] {
    std::array<CompiledFamily, 3> out;
    for (std::size_t i = 0; i < kFamilies.size(); ++i)
      for (auto p : kFamilies[i].patterns)
        out[i].patterns.emplace_back(std::string(p), std::regex::ECMAScript | std::regex::optimize);
    return out;
  }();
  return families;
}

// Lower-cases ASCII and folds the typographic apostrophe U+2019 to '.
std::string fold(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    const unsigned char c = static_cast<unsigned char>(text[i]);
    if (c == 0xE2 && i + 2 < text.size() && static_cast<unsigned char>(text[i + 1]) == 0x80 &&
        static_cast<unsigned char>(text[i + 2]) == 0x99) {
      out.push_back('\'');
      i += 2;
    } else if (c >= 'A' && c <= 'Z') {
      out.push_back(static_cast<char>(c - 'A' + 'a'));
    } else {
      out.push_back(static_cast<char>(c));
    }
  }
  return out;
}

// Does this line open numbered step n ("2. ...", "2) ...", "step 2: ...")?
bool opens_step(std::string_view line, char n) {
  std::size_t i = 0;
  while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '-' || line[i] == '*'))
    ++i;
  if (line.substr(i, 4) == "step") {
    i += 4;
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
  }
  if (i + 2 >= line.size() || line[i] != n) return false;
  const char sep = line[i + 1];
  if (sep != '.' && sep != ')' && sep != ':') return false;
  return line[i + 2] == ' ' || line[i + 2] == '\t';
}

// A line opening step 1 followed later by a line opening step 2.
bool has_numbered_steps(std::string_view text) {
  bool seen_first = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto line = text.substr(pos, end - pos);
    if (seen_first && opens_step(line, '2')) return true;
    if (opens_step(line, '1')) seen_first = true;
    pos = end + 1;
  }
  return false;
}

bool any_match(const CompiledFamily& family, const std::string& text) {
  for (const auto& re : family.patterns)
    if (std::regex_search(text, re)) return true;
  return false;
}

}  // namespace

OptimizerTemplate::OptimizerTemplate(std::string system_text, std::string user_text)
    : system_(std::move(system_text)),
      user_(std::move(user_text)),
      placeholder_at_(locate_placeholder(user_)) {}

const OptimizerTemplate& OptimizerTemplate::golden() {
  static const OptimizerTemplate tmpl{std::string(detail::kGoldenSystem),
                                      std::string(detail::kGoldenUser)};
  return tmpl;
}

OptimizerTemplate OptimizerTemplate::load(const std::string& directory) {
  return {read_file(directory + "/optimizer_system.txt"),
          read_file(directory + "/optimizer_user.txt")};
}

std::string OptimizerTemplate::render_user(std::string_view sample) const {
  std::string out;
  out.reserve(user_.size() + sample.size());
  out.append(user_, 0, placeholder_at_);
  out.append(sample);
  out.append(user_, placeholder_at_ + kPlaceholder.size());
  return out;
}

std::vector<Message> build_optimizer_messages(std::string_view sample) {
  return build_optimizer_messages(OptimizerTemplate::golden(), sample);
}

std::vector<Message> build_optimizer_messages(const OptimizerTemplate& tmpl,
                                              std::string_view sample) {
  if (sample.empty()) throw EmptySample();
  return {{Role::System, tmpl.system_text()}, {Role::User, tmpl.render_user(sample)}};
}

Postprocessed postprocess_optimized(std::string_view raw) {
  const auto body = trim(raw);
  const auto first_nl = body.find('\n');
  const auto last_nl = body.rfind('\n');
  if (first_nl == std::string_view::npos || first_nl == last_nl)
    return {std::string(body), false};
  const auto opening = trim(body.substr(0, first_nl));
  const auto closing = trim(body.substr(last_nl + 1));
  if (!is_fence(opening) || opening != closing) return {std::string(body), false};
  return {std::string(trim(body.substr(first_nl + 1, last_nl - first_nl - 1))), true};
}

std::span<const RuleFamily> rule_families() { return kFamilies; }

TechniqueSet classify_techniques(std::string_view optimized_prompt) {
  const std::string text = fold(optimized_prompt);
  const auto& families = compiled();
  TechniqueSet out;
  out.expert = any_match(families[0], text);
  out.cot = any_match(families[1], text) || has_numbered_steps(text);
  out.tot = any_match(families[2], text);
  return out;
}

}  // namespace apet::metaprompt
