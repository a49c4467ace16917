#include <doctest.h>

#include <random>

#include "apet/metaprompt.hpp"
#include "support.hpp"

using namespace apet;
using namespace apet::metaprompt;

namespace {

std::string resource(const std::string& name) {
  return testing::read_text(std::string(APET_RESOURCE_DIR) + "/" + name);
}

std::size_t count(const std::string& hay, std::string_view needle) {
  std::size_t n = 0;
  for (auto at = hay.find(needle); at != std::string::npos; at = hay.find(needle, at + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("built-in template equals the resource files byte for byte") {
  const auto& g = OptimizerTemplate::golden();
  CHECK(g.system_text() == resource("optimizer_system.txt"));
  CHECK(g.user_text() == resource("optimizer_user.txt"));
  CHECK(g.system_text().rfind("Imagine yourself as an expert in the realm of prompting techniques", 0) == 0);
}

TEST_CASE("optimizer messages substitute the sample at one site") {
  const std::string sample = "Sort the following words alphabetically: List: pear apple";
  const auto msgs = build_optimizer_messages(sample);
  REQUIRE(msgs.size() == 2);
  CHECK(msgs[0].role == Role::System);
  CHECK(msgs[1].role == Role::User);
  CHECK(msgs[0].content == resource("optimizer_system.txt"));

  const auto user = resource("optimizer_user.txt");
  const auto at = user.find(kPlaceholder);
  CHECK(msgs[1].content == user.substr(0, at) + sample + user.substr(at + kPlaceholder.size()));
  CHECK(count(msgs[1].content, sample) == 1);
  CHECK(msgs[1].content.find(kPlaceholder) == std::string::npos);
}

TEST_CASE("substitution is single-pass") {
  const auto msgs = build_optimizer_messages("echo {sample_prompt} back");
  CHECK(count(msgs[1].content, "{sample_prompt}") == 1);
  CHECK(msgs[1].content.find("echo {sample_prompt} back") != std::string::npos);
}

TEST_CASE("empty samples are rejected") { CHECK_THROWS_AS(build_optimizer_messages(""), EmptySample); }

TEST_CASE("templates need exactly one placeholder") {
  CHECK_THROWS_AS(OptimizerTemplate("s", "no slot"), TemplateError);
  CHECK_THROWS_AS(OptimizerTemplate("s", "{sample_prompt} and {sample_prompt}"), TemplateError);
  const OptimizerTemplate t("sys", "before {sample_prompt} after");
  CHECK(build_optimizer_messages(t, "X")[1].content == "before X after");
}

TEST_CASE("templates load from a directory") {
  const auto t = OptimizerTemplate::load(APET_RESOURCE_DIR);
  CHECK(t.user_text() == OptimizerTemplate::golden().user_text());
  CHECK_THROWS_AS(OptimizerTemplate::load("/nonexistent-dir"), Error);
}

TEST_CASE("post-processing strips one matching fence pair") {
  auto p = postprocess_optimized("\"\"\"\nDo X\n\"\"\"");
  CHECK(p.text == "Do X");
  CHECK(p.fence_stripped);

  p = postprocess_optimized("Do X");
  CHECK(p.text == "Do X");
  CHECK_FALSE(p.fence_stripped);

  p = postprocess_optimized("\"\"\"Do X");
  CHECK(p.text == "\"\"\"Do X");
  CHECK_FALSE(p.fence_stripped);

  p = postprocess_optimized("  \n```\nline 1\nline 2\n```\n ");
  CHECK(p.text == "line 1\nline 2");
  CHECK(p.fence_stripped);

  // Mismatched fences are not a pair.
  CHECK_FALSE(postprocess_optimized("\"\"\"\nDo X\n```").fence_stripped);
  // Only the outer pair goes.
  CHECK(postprocess_optimized("\"\"\"\n\"\"\"\nY\n\"\"\"\n\"\"\"").text == "\"\"\"\nY\n\"\"\"");
}

TEST_CASE("technique detection per family") {
  CHECK(classify_techniques("You are a world-class chess grandmaster and expert tactician.") ==
        TechniqueSet{true, false, false});
  CHECK(classify_techniques("Let's think step-by-step about the board.") == TechniqueSet{false, true, false});
  CHECK(classify_techniques("Let\xE2\x80\x99s think about it.") == TechniqueSet{false, true, false});
  CHECK(classify_techniques("Imagine three different experts are answering. Each will share it with the group.") ==
        TechniqueSet{false, false, true});
  CHECK(classify_techniques("Follow these steps:\n1. Read the path.\n2. Count vertices.") ==
        TechniqueSet{false, true, false});
  CHECK(classify_techniques("Sort these words.") == TechniqueSet{});
  CHECK(classify_techniques("") == TechniqueSet{});
  const auto& g = OptimizerTemplate::golden();
  CHECK(bucket_of(classify_techniques(g.system_text() + "\n" + g.user_text())) == UsageBucket::AllThree);
}

TEST_CASE("detection is monotone under appended text") {
  const std::vector<std::string> pieces = {
      "You are an expert geometer.", " Let us think", " step by step.", " Three experts discuss",
      " the path.", "\n1. Parse.\n2. Count.", " Your expertise matters.", " plain filler text"};
  std::mt19937 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::string text;
    TechniqueSet prev;
    for (int k = 0; k < 6; ++k) {
      text += pieces[rng() % pieces.size()];
      const auto now = classify_techniques(text);
      CHECK((!prev.expert || now.expert));
      CHECK((!prev.cot || now.cot));
      CHECK((!prev.tot || now.tot));
      prev = now;
    }
  }
}

TEST_CASE("rule table is versioned and ordered") {
  const auto fams = rule_families();
  REQUIRE(fams.size() == 3);
  CHECK(fams[0].name == "expert");
  CHECK(fams[1].name == "cot");
  CHECK(fams[2].name == "tot");
  CHECK_FALSE(kRulesVersion.empty());
}
