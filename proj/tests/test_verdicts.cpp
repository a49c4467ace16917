#include <doctest.h>

#include <random>

#include "apet/datasets.hpp"
#include "apet/verdicts.hpp"
#include "support.hpp"

using namespace apet;
using namespace apet::verdicts;

namespace {

// Code points of a UTF-8 string, decoded by hand.
std::vector<char32_t> code_points(const std::string& s) {
  std::vector<char32_t> out;
  for (std::size_t i = 0; i < s.size();) {
    const auto c = static_cast<unsigned char>(s[i]);
    int extra = c < 0x80 ? 0 : c < 0xE0 ? 1 : c < 0xF0 ? 2 : 3;
    char32_t cp = extra == 0 ? c : extra == 1 ? c & 0x1F : extra == 2 ? c & 0x0F : c & 0x07;
    for (int k = 1; k <= extra; ++k) cp = (cp << 6) | (static_cast<unsigned char>(s[i + static_cast<std::size_t>(k)]) & 0x3F);
    out.push_back(cp);
    i += static_cast<std::size_t>(extra) + 1;
  }
  return out;
}

std::vector<std::string> insertion_sort(std::vector<std::string> v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    for (std::size_t j = i; j > 0 && code_points(v[j]) < code_points(v[j - 1]); --j) std::swap(v[j], v[j - 1]);
  return v;
}

TaskInstance instance(TaskKind kind, std::string input, std::string target) {
  return {kind, 0, std::move(input), std::move(target)};
}

}  // namespace

TEST_CASE("mode support") {
  CHECK(supports(TaskKind::WordSorting, ScoringMode::Exact));
  CHECK_FALSE(supports(TaskKind::WordSorting, ScoringMode::Semantic));
  CHECK_FALSE(supports(TaskKind::GeometricShapes, ScoringMode::Semantic));
  CHECK(supports(TaskKind::GameOf24, ScoringMode::Semantic));
  CHECK(default_mode(TaskKind::CheckmateInOne) == ScoringMode::Semantic);
  CHECK(default_mode(TaskKind::GeometricShapes) == ScoringMode::Exact);
  CHECK_THROWS_AS(verify(instance(TaskKind::WordSorting, "x", "x"), std::string("x"), ScoringMode::Semantic), Error);
}

TEST_CASE("extraction rules") {
  CHECK(extract_answer("The sorted list is:\napple banana cherry", TaskKind::WordSorting) == "apple banana cherry");
  CHECK(extract_answer("Sorted:\n  Apple, Banana.\n\n", TaskKind::WordSorting) == "apple banana");
  CHECK(extract_answer("...therefore the shape is (G) pentagon.", TaskKind::GeometricShapes) == "(G)");
  CHECK(extract_answer("(A) is wrong; the answer is (C).", TaskKind::GeometricShapes) == "(C)");
  CHECK(extract_answer("We find (10-4)*(13-9) = 24.", TaskKind::GameOf24) == "(10-4)*(13-9)");
  CHECK(extract_answer("Step 1: 13 - 9 = 4\nAnswer: (10 - 4) \xC3\x97 (13 - 9)", TaskKind::GameOf24) ==
        "(10 - 4) \xC3\x97 (13 - 9)");
  CHECK(extract_answer("The answer is ((10-4)*(13-9))!", TaskKind::GameOf24) == "((10-4)*(13-9))");
  CHECK(extract_answer("(final: (10-4)*(13-9))", TaskKind::GameOf24) == "(10-4)*(13-9)");
  CHECK(extract_answer("The best move is Qh4#.", TaskKind::CheckmateInOne) == "Qh4#");
  CHECK(extract_answer("Not Nf3 but exd8=Q+ wins", TaskKind::CheckmateInOne) == "exd8=Q+");
  CHECK(extract_answer("Castle: O-O", TaskKind::CheckmateInOne) == "O-O");
}

TEST_CASE("extraction never throws and reports absence") {
  for (auto kind : kAllTaskKinds) {
    CHECK_FALSE(extract_answer("", kind).has_value());
    CHECK_NOTHROW(extract_answer("\xFF\xFE garbage ((((", kind));
  }
  CHECK_FALSE(extract_answer("I cannot solve this.", TaskKind::GameOf24).has_value());
  CHECK_FALSE(extract_answer("no letters here", TaskKind::GeometricShapes).has_value());
  const auto v = score(instance(TaskKind::GameOf24, "4 9 10 13", "x"), "no idea", ScoringMode::Semantic);
  CHECK_FALSE(v.correct);
  CHECK(v.reason == "no answer found");
}

TEST_CASE("word normalization") {
  CHECK(normalize_words("  Apple,  BANANA.\t\"cherry\" ") == std::vector<std::string>{"apple", "banana", "cherry"});
  CHECK(normalize_words("don't re-sort") == std::vector<std::string>{"don't", "re-sort"});
  // Decomposed e + combining acute equals the precomposed form.
  CHECK(normalize_words("Cafe\xCC\x81") == normalize_words("caf\xC3\xA9"));
  CHECK(normalize_words("... , ;").empty());
  CHECK(word_list_of("Sort the following words alphabetically: List: pear Apple") ==
        std::vector<std::string>{"pear", "apple"});
}

TEST_CASE("word sorting verdicts") {
  const auto inst = instance(TaskKind::WordSorting, "List: banana apple", "apple banana");
  CHECK(verify(inst, std::string("apple banana"), ScoringMode::Exact).correct);
  CHECK_FALSE(verify(inst, std::string("banana apple"), ScoringMode::Exact).correct);
  CHECK(score(inst, "Here you go:\nApple, Banana", ScoringMode::Exact).correct);
}

TEST_CASE("sort_words matches an independent insertion sort") {
  const std::vector<std::string> alphabet = {"a", "b", "c", "z", "\xC3\xA9", "\xC3\x9F", "\xD0\xB6", "\xE4\xB8\xAD", "'", "-"};
  std::mt19937_64 rng(9);
  CHECK(sort_words({}).empty());
  CHECK(sort_words({"banana", "apple"}) == std::vector<std::string>{"apple", "banana"});
  for (int t = 0; t < 1000; ++t) {
    std::vector<std::string> words(rng() % 12);
    for (auto& w : words)
      for (std::size_t n = 1 + rng() % 5; n > 0; --n) w += alphabet[rng() % alphabet.size()];
    CHECK(sort_words(words) == insertion_sort(words));
  }
}

TEST_CASE("game of 24 verdicts") {
  const auto inst = instance(TaskKind::GameOf24, "Input: 4 9 10 13", "(10 - 4) * (13 - 9)");
  CHECK(verify(inst, std::string("(10-4)*(13-9)"), ScoringMode::Semantic).correct);
  CHECK(verify(inst, std::string("(13-9)*(10-4)"), ScoringMode::Semantic).correct);
  CHECK_FALSE(verify(inst, std::string("(13-9)*(10-4)"), ScoringMode::Exact).correct);
  CHECK(verify(inst, std::string("(10-4)*(13-9)"), ScoringMode::Exact).correct);
  CHECK(numbers_of("Use 1, 2 and 3 to get 24. Input: 4 9 10 13") == expr24::Numbers{4, 9, 10, 13});
  CHECK_THROWS_AS(numbers_of("Input: 4 9"), InstanceParseError);
  CHECK_THROWS_AS(verify(instance(TaskKind::GameOf24, "nothing", "x"), std::string("1+1"), ScoringMode::Semantic),
                  InstanceParseError);
}

TEST_CASE("geometric shapes verdicts compare letters") {
  const auto inst = instance(TaskKind::GeometricShapes, "path...", "(G)");
  CHECK(verify(inst, std::string("(G)"), ScoringMode::Exact).correct);
  CHECK_FALSE(verify(inst, std::string("(F)"), ScoringMode::Exact).correct);
  CHECK(verify(instance(TaskKind::GeometricShapes, "p", "(G) pentagon"), std::string("(G)"), ScoringMode::Exact).correct);
  CHECK_THROWS_AS(verify(instance(TaskKind::GeometricShapes, "p", "pentagon"), std::string("(G)"), ScoringMode::Exact),
                  InstanceParseError);
  CHECK(option_letter("(G) pentagon") == "(G)");
}

TEST_CASE("checkmate verdicts") {
  const auto inst = instance(TaskKind::CheckmateInOne, "1. f3 e5 2. g4", "Qh4#");
  CHECK(verify(inst, std::string("Qh4#"), ScoringMode::Semantic).correct);
  CHECK(verify(inst, std::string("Qh4"), ScoringMode::Exact).correct);
  CHECK_FALSE(verify(inst, std::string("Qg5"), ScoringMode::Semantic).correct);
  CHECK(normalize_san("0-0+") == "O-O");
  CHECK(position_of("Find the mate. 1. f3 e5 2. g4").side_to_move() == chess::Color::Black);
  CHECK(position_of("rnbqkbnr/pppp1ppp/8/4p3/6P1/5P2/PPPPP2P/RNBQKBNR b KQkq g3 0 2", true).side_to_move() ==
        chess::Color::Black);
  CHECK_THROWS_AS(position_of("1. e4 e4"), InstanceParseError);
}

TEST_CASE("fixture targets pass the sanity oracle") {
  for (auto kind : kAllTaskKinds) {
    for (const auto& inst : datasets::load_dataset({kind, testing::fixture(std::string(to_string(kind)) + ".jsonl"), 10})) {
      const auto v = sanity_check(inst);
      CHECK_MESSAGE(v.correct, to_string(kind), " #", inst.index, ": ", v.reason);
    }
  }
  const auto bad = sanity_check(instance(TaskKind::WordSorting, "List: b a", "b a"));
  CHECK_FALSE(bad.correct);
  CHECK_FALSE(sanity_check(instance(TaskKind::GameOf24, "1 1 1 1", "1+1+1+1")).correct);
}

TEST_CASE("exact-correct implies semantic-correct when the target is sound") {
  for (const auto& inst :
       datasets::load_dataset({TaskKind::CheckmateInOne, testing::fixture("checkmate_in_one.jsonl"), 10})) {
    REQUIRE(sanity_check(inst).correct);
    for (const auto& answer : {inst.target, inst.target + "!", std::string("Kxa1")}) {
      if (verify(inst, answer, ScoringMode::Exact).correct) CHECK(verify(inst, answer, ScoringMode::Semantic).correct);
    }
  }
}
