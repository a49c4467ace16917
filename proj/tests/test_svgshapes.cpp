#include <doctest.h>

#include "apet/svgshapes.hpp"
#include "support.hpp"

using namespace apet;
using namespace apet::svg;

namespace {

ShapeClass shape(std::string_view d) { return classify(parse_path(d)); }

const char* kOptions =
    "Options:\n(A) circle\n(B) heptagon\n(C) hexagon\n(D) kite\n(E) line\n(F) octagon\n(G) pentagon\n"
    "(H) rectangle\n(I) sector\n(J) triangle";

}  // namespace

TEST_CASE("path parsing") {
  const auto cmds = parse_path("M 31.00,73.00 L 32.00,59.00 L 44.00,50.00 L 31.00,73.00");
  REQUIRE(cmds.size() == 4);
  CHECK(cmds[0].op == PathOp::MoveTo);
  CHECK(cmds[1].end == Point{32, 59});

  // Extra coordinate pairs after M are line segments.
  const auto implicit = parse_path("M0 0 10 0 10 10Z");
  REQUIRE(implicit.size() == 4);
  CHECK(implicit[1].op == PathOp::LineTo);
  CHECK(implicit[3].op == PathOp::ClosePath);

  const auto arc = parse_path("M 10,10 A 5.00,5.00 0.00 0,1 20,10");
  REQUIRE(arc.size() == 2);
  CHECK(arc[1].arc.rx == 5);
  CHECK_FALSE(arc[1].arc.large_arc);
  CHECK(arc[1].arc.sweep);
  CHECK(parse_path("M1e1,-2.5L3,4")[0].end == Point{10, -2.5});
}

TEST_CASE("path parse errors") {
  try {
    parse_path("M 0,0 C 1,1 2,2 3,3");
    FAIL("expected PathParseError");
  } catch (const PathParseError& e) {
    CHECK(e.position() == 6);
    CHECK(std::string(e.what()).find("unsupported command 'C'") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_path(""), PathParseError);
  CHECK_THROWS_AS(parse_path("L 1,1"), PathParseError);
  CHECK_THROWS_AS(parse_path("M 1"), PathParseError);
  CHECK_THROWS_AS(parse_path("M 1,1 A 1,1 0 2,0 3,3"), PathParseError);
  CHECK_THROWS_AS(parse_path("m 1,1 l 2,2"), PathParseError);
}

TEST_CASE("polygons by vertex count") {
  CHECK(shape("M 0,0 L 10,0 L 5,8 L 0,0") == ShapeClass::Triangle);
  CHECK(shape("M 0,0 L 10,0 L 5,8 Z") == ShapeClass::Triangle);
  CHECK(shape("M 37.00,47.00 L 54.12,68.78 L 77.75,52.34 L 67.39,28.93 L 45.02,26.05 L 37.00,47.00") ==
        ShapeClass::Pentagon);
  CHECK(shape("M 10,0 L 5,8.66 L -5,8.66 L -10,0 L -5,-8.66 L 5,-8.66 Z") == ShapeClass::Hexagon);
  // A vertex on a straight edge does not count.
  CHECK(shape("M 0,0 L 5,0 L 10,0 L 5,8 Z") == ShapeClass::Triangle);
  // Repeated points collapse.
  CHECK(shape("M 0,0 L 10,0 L 10,0 L 5,8 Z") == ShapeClass::Triangle);
  // Disjoint subpaths that join up end to end still form one polygon.
  CHECK(shape("M 0,0 L 10,0 M 10,0 L 5,8 M 5,8 L 0,0") == ShapeClass::Triangle);
}

TEST_CASE("lines") {
  CHECK(shape("M 10,10 L 20,25") == ShapeClass::Line);
  CHECK(shape("M 0,0 L 1,1 L 2,2") == ShapeClass::Line);
  CHECK(shape("M 0,0 L 10,0 L 10,10") == ShapeClass::Unknown);
}

TEST_CASE("quadrilateral predicates") {
  CHECK(shape("M 0,0 L 20,0 L 20,10 L 0,10 Z") == ShapeClass::Rectangle);
  CHECK(shape("M 0,0 L 10,0 L 10,10 L 0,10 Z") == ShapeClass::Rectangle);  // square
  // Rotated by 30 degrees and rounded to two decimals.
  CHECK(shape("M 0.00,0.00 L 17.32,10.00 L 12.32,18.66 L -5.00,8.66 Z") == ShapeClass::Rectangle);
  CHECK(shape("M 0,-20 L 8,0 L 0,6 L -8,0 Z") == ShapeClass::Kite);
  CHECK(shape("M 0,-10 L 6,0 L 0,10 L -6,0 Z") == ShapeClass::Kite);  // rhombus
  CHECK(shape("M 0,0 L 30,0 L 20,10 L 5,10 Z") == ShapeClass::Trapezoid);
  CHECK(shape("M 0,0 L 30,0 L 30,10 L 0,18 Z") == ShapeClass::Trapezoid);  // right trapezoid
  CHECK(shape("M 0,0 L 30,0 L 22,10 L 8,10 Z") == ShapeClass::Trapezoid);  // isosceles
  CHECK(shape("M 0,0 L 20,0 L 25,10 L 5,10 Z") == ShapeClass::Unknown);    // parallelogram
  CHECK(shape("M 0,0 L 21,3 L 17,11 L 2,14 Z") == ShapeClass::Unknown);    // irregular
  CHECK(shape("M 0,0 L 10,10 L 10,0 L 0,10 Z") == ShapeClass::Unknown);    // bow tie
}

TEST_CASE("arcs") {
  CHECK(shape("M 70,50 A 20,20 0 1,0 30,50 A 20,20 0 1,0 70,50") == ShapeClass::Circle);
  CHECK(shape("M 70,50 A 20,10 0 1,0 30,50 A 20,10 0 1,0 70,50") == ShapeClass::Unknown);
  CHECK(shape("M 50,50 L 70,50 A 20,20 0 0,1 50,70 L 50,50") == ShapeClass::Sector);
  CHECK(shape("M 50,50 L 70,50 A 25,25 0 0,1 50,70 L 50,50") == ShapeClass::Unknown);
  CHECK(shape("M 70,50 A 20,20 0 0,1 50,70") == ShapeClass::Unknown);
}

TEST_CASE("random figures classify exactly") {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 300; ++i) {
    const int k = 3 + static_cast<int>(rng() % 6);
    const auto s = testing::random_shape(k, rng);
    CHECK_MESSAGE(shape(s.d) == s.expected, s.d);
  }
}

TEST_CASE("option handling") {
  const std::string text = std::string("This SVG path element <path d=\"M 1,2 L 3,4\"/> draws a\n") + kOptions;
  CHECK(extract_path_data(text) == "M 1,2 L 3,4");
  CHECK(extract_path_data("  M 1,2 L 3,4 ") == "M 1,2 L 3,4");
  const auto opts = parse_options(text);
  REQUIRE(opts.size() == 10);
  CHECK(opts[6] == std::pair<std::string, std::string>{"(G)", "pentagon"});
  CHECK(option_for(ShapeClass::Pentagon, opts) == "(G)");
  CHECK(option_for(ShapeClass::Line, opts) == "(E)");
  CHECK_THROWS_AS(option_for(ShapeClass::Trapezoid, opts), NoSuchOption);
  CHECK(to_string(ShapeClass::Heptagon) == "heptagon");
}
