#pragma once
// SVG path parsing (M, L, A, Z absolute dialect) and shape classification.

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "apet/core.hpp"

namespace apet::svg {

class PathParseError : public Error {
 public:
  PathParseError(std::size_t position, const std::string& message);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class NoSuchOption : public Error {
 public:
  using Error::Error;
};

struct Point {
  double x = 0;
  double y = 0;
  bool operator==(const Point&) const = default;
};

struct ArcParams {
  double rx = 0;
  double ry = 0;
  double rotation = 0;
  bool large_arc = false;
  bool sweep = false;
  bool operator==(const ArcParams&) const = default;
};

enum class PathOp : std::uint8_t { MoveTo, LineTo, Arc, ClosePath };

struct PathCommand {
  PathOp op = PathOp::MoveTo;
  Point end;      // unused for ClosePath
  ArcParams arc;  // Arc only
  bool operator==(const PathCommand&) const = default;
};

enum class ShapeClass : std::uint8_t {
  Line,
  Triangle,
  Rectangle,
  Kite,
  Trapezoid,
  Pentagon,
  Hexagon,
  Heptagon,
  Octagon,
  Circle,
  Sector,
  Unknown,
};

std::string_view to_string(ShapeClass shape);

struct Tolerances {
  // Vertex merging and collinearity, relative to the bounding-box diagonal.
  double vertex = 1e-6;
  // Right angles (|cos|), parallel sides (|sin|), equal side lengths and
  // sector radii, all relative. Coordinates in the benchmark carry two
  // decimals, so this has to absorb rounding of rotated figures.
  double predicate = 1e-2;
};

std::vector<PathCommand> parse_path(std::string_view d);

ShapeClass classify(const std::vector<PathCommand>& commands, const Tolerances& tol = {});

// Pulls the d="..." attribute out of task text; the whole text if absent.
std::string extract_path_data(std::string_view text);

// "(A) circle" pairs in order of appearance.
std::vector<std::pair<std::string, std::string>> parse_options(std::string_view text);

// Returns "(G)" for the option named after `shape`; throws NoSuchOption.
std::string option_for(ShapeClass shape,
                       const std::vector<std::pair<std::string, std::string>>& options);

}  // namespace apet::svg
