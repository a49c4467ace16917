#include "apet/svgshapes.hpp"

#include <algorithm>
#include <cctype>
#include <array>
#include <charconv>
#include <cmath>
#include <numeric>
#include <optional>
#include <regex>

namespace apet::svg {

namespace {

constexpr std::array<std::string_view, 12> kShapeNames = {
    "line",    "triangle", "rectangle", "kite",   "trapezoid", "pentagon",
    "hexagon", "heptagon", "octagon",   "circle", "sector",    "unknown"};

class PathParser {
 public:
  explicit PathParser(std::string_view d) : d_(d) {}

  std::vector<PathCommand> parse() {
    std::vector<PathCommand> out;
    skip_separators();
    while (pos_ < d_.size()) {
      const char c = d_[pos_];
      const auto at = pos_;
      if (!std::isalpha(static_cast<unsigned char>(c)))
        throw PathParseError(pos_, "expected a command letter");
      ++pos_;
      if (out.empty() && c != 'M') throw PathParseError(at, "path must start with M");
      switch (c) {
        case 'M': {
          out.push_back({PathOp::MoveTo, read_point(), {}});
          while (number_follows()) out.push_back({PathOp::LineTo, read_point(), {}});
          break;
        }
        case 'L': {
          do out.push_back({PathOp::LineTo, read_point(), {}});
          while (number_follows());
          break;
        }
        case 'A': {
          do {
            PathCommand cmd{PathOp::Arc, {}, {}};
            cmd.arc.rx = read_number();
            cmd.arc.ry = read_number();
            cmd.arc.rotation = read_number();
            cmd.arc.large_arc = read_flag();
            cmd.arc.sweep = read_flag();
            cmd.end = read_point();
            out.push_back(cmd);
          } while (number_follows());
          break;
        }
        case 'Z': {
          out.push_back({PathOp::ClosePath, {}, {}});
          skip_separators();
          if (number_follows()) throw PathParseError(pos_, "Z takes no parameters");
          break;
        }
        default:
          throw PathParseError(at, std::string("unsupported command '") + c +
                                       "' (supported: M, L, A, Z)");
      }
      skip_separators();
    }
    if (out.empty()) throw PathParseError(0, "empty path");
    return out;
  }

 private:
  void skip_separators() {
    while (pos_ < d_.size() && (std::isspace(static_cast<unsigned char>(d_[pos_])) || d_[pos_] == ','))
      ++pos_;
  }

  bool number_follows() {
    skip_separators();
    if (pos_ >= d_.size()) return false;
    const char c = d_[pos_];
    return std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.';
  }

  double read_number() {
    skip_separators();
    if (pos_ >= d_.size()) throw PathParseError(pos_, "expected a number, found end of path");
    const char* first = d_.data() + pos_;
    if (*first == '+') ++first;
    double value = 0;
    const auto [ptr, ec] = std::from_chars(first, d_.data() + d_.size(), value);
    if (ec != std::errc()) throw PathParseError(pos_, "expected a number");
    pos_ = static_cast<std::size_t>(ptr - d_.data());
    return value;
  }

  bool read_flag() {
    skip_separators();
    if (pos_ >= d_.size() || (d_[pos_] != '0' && d_[pos_] != '1'))
      throw PathParseError(pos_, "expected an arc flag (0 or 1)");
    return d_[pos_++] == '1';
  }

  Point read_point() {
    const double x = read_number();
    const double y = read_number();
    return {x, y};
  }

  std::string_view d_;
  std::size_t pos_ = 0;
};

Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
double norm(Point a) { return std::hypot(a.x, a.y); }

bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

// Distance from p to the line through a and b.
double line_distance(Point p, Point a, Point b) {
  const double len = norm(b - a);
  if (len == 0) return norm(p - a);
  return std::abs(cross(b - a, p - a)) / len;
}

bool segments_cross(Point a, Point b, Point c, Point d) {
  const double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

struct Edge {
  int u;
  int v;
  int arc;  // index into arcs, or -1 for straight edges
};

ShapeClass classify_quad(const std::vector<Point>& p, const Tolerances& tol) {
  if (segments_cross(p[0], p[1], p[2], p[3]) || segments_cross(p[1], p[2], p[3], p[0]))
    return ShapeClass::Unknown;
  std::array<Point, 4> e;
  std::array<double, 4> len;
  for (int i = 0; i < 4; ++i) {
    e[i] = p[(i + 1) % 4] - p[i];
    len[i] = norm(e[i]);
  }
  bool all_right = true;
  for (int i = 0; i < 4; ++i)
    all_right &= std::abs(dot(e[i], e[(i + 1) % 4])) < tol.predicate * len[i] * len[(i + 1) % 4];
  if (all_right) return ShapeClass::Rectangle;

  const bool kite = (close_rel(len[0], len[1], tol.predicate) && close_rel(len[2], len[3], tol.predicate)) ||
                    (close_rel(len[1], len[2], tol.predicate) && close_rel(len[3], len[0], tol.predicate));
  if (kite) return ShapeClass::Kite;

  auto parallel = [&](int i, int j) {
    return std::abs(cross(e[i], e[j])) < tol.predicate * len[i] * len[j];
  };
  if (parallel(0, 2) != parallel(1, 3)) return ShapeClass::Trapezoid;
  return ShapeClass::Unknown;
}

ShapeClass classify_polygon(std::vector<Point> ring, bool closed, double eps, const Tolerances& tol) {
  if (!closed) {
    if (ring.size() == 2) return ShapeClass::Line;
    for (const auto& p : ring)
      if (line_distance(p, ring.front(), ring.back()) > eps) return ShapeClass::Unknown;
    return ShapeClass::Line;
  }
  // Drop vertices that sit on the segment joining their neighbours.
  bool changed = true;
  while (changed && ring.size() >= 3) {
    changed = false;
    for (std::size_t i = 0; i < ring.size(); ++i) {
      const auto& prev = ring[(i + ring.size() - 1) % ring.size()];
      const auto& next = ring[(i + 1) % ring.size()];
      if (line_distance(ring[i], prev, next) <= eps) {
        ring.erase(ring.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
  switch (ring.size()) {
    case 0:
    case 1:
    case 2: return ShapeClass::Line;
    case 3: return ShapeClass::Triangle;
    case 4: return classify_quad(ring, tol);
    case 5: return ShapeClass::Pentagon;
    case 6: return ShapeClass::Hexagon;
    case 7: return ShapeClass::Heptagon;
    case 8: return ShapeClass::Octagon;
    default: return ShapeClass::Unknown;
  }
}

}  // namespace

PathParseError::PathParseError(std::size_t position, const std::string& message)
    : Error("path parse error at " + std::to_string(position) + ": " + message), position_(position) {}

std::string_view to_string(ShapeClass shape) { return kShapeNames[static_cast<std::size_t>(shape)]; }

std::vector<PathCommand> parse_path(std::string_view d) { return PathParser(d).parse(); }

ShapeClass classify(const std::vector<PathCommand>& commands, const Tolerances& tol) {
  struct Segment {
    Point a, b;
    std::optional<ArcParams> arc;
  };
  std::vector<Segment> segments;
  Point current{}, start{};
  for (const auto& c : commands) {
    switch (c.op) {
      case PathOp::MoveTo: current = start = c.end; break;
      case PathOp::LineTo: segments.push_back({current, c.end, std::nullopt}); current = c.end; break;
      case PathOp::Arc: segments.push_back({current, c.end, c.arc}); current = c.end; break;
      case PathOp::ClosePath: segments.push_back({current, start, std::nullopt}); current = start; break;
    }
  }
  if (segments.empty()) return ShapeClass::Unknown;

  double min_x = segments[0].a.x, max_x = min_x, min_y = segments[0].a.y, max_y = min_y;
  for (const auto& s : segments)
    for (const auto& p : {s.a, s.b}) {
      min_x = std::min(min_x, p.x);
      max_x = std::max(max_x, p.x);
      min_y = std::min(min_y, p.y);
      max_y = std::max(max_y, p.y);
    }
  const double diag = std::hypot(max_x - min_x, max_y - min_y);
  if (diag == 0) return ShapeClass::Unknown;
  const double eps = tol.vertex * diag;

  std::vector<Point> verts;
  auto vertex_id = [&](Point p) {
    for (std::size_t i = 0; i < verts.size(); ++i)
      if (norm(verts[i] - p) <= eps) return static_cast<int>(i);
    verts.push_back(p);
    return static_cast<int>(verts.size() - 1);
  };

  std::vector<ArcParams> arcs;
  std::vector<Edge> edges;
  for (const auto& s : segments) {
    const int u = vertex_id(s.a), v = vertex_id(s.b);
    if (u == v) continue;
    if (s.arc) {
      arcs.push_back(*s.arc);
      edges.push_back({u, v, static_cast<int>(arcs.size() - 1)});
      continue;
    }
    const bool duplicate = std::any_of(edges.begin(), edges.end(), [&](const Edge& e) {
      return e.arc < 0 && ((e.u == u && e.v == v) || (e.u == v && e.v == u));
    });
    if (!duplicate) edges.push_back({u, v, -1});
  }
  if (edges.empty()) return ShapeClass::Unknown;

  std::vector<std::vector<int>> adj(verts.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    adj[edges[i].u].push_back(static_cast<int>(i));
    adj[edges[i].v].push_back(static_cast<int>(i));
  }
  std::vector<int> used;
  for (std::size_t i = 0; i < verts.size(); ++i)
    if (!adj[i].empty()) used.push_back(static_cast<int>(i));

  // Connectivity over vertices that carry edges.
  std::vector<bool> seen(verts.size(), false);
  std::vector<int> stack = {used.front()};
  seen[used.front()] = true;
  std::size_t reached = 0;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    ++reached;
    for (int ei : adj[v]) {
      const int w = edges[ei].u == v ? edges[ei].v : edges[ei].u;
      if (!seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
    }
  }
  if (reached != used.size()) return ShapeClass::Unknown;

  const bool all_degree_two = std::all_of(used.begin(), used.end(), [&](int v) { return adj[v].size() == 2; });
  const auto ends = std::count_if(used.begin(), used.end(), [&](int v) { return adj[v].size() == 1; });
  const bool is_cycle = all_degree_two && edges.size() == used.size();
  const bool is_path = ends == 2 && edges.size() + 1 == used.size() &&
                       std::all_of(used.begin(), used.end(), [&](int v) { return adj[v].size() <= 2; });

  if (!arcs.empty()) {
    const std::size_t lines = edges.size() - arcs.size();
    if (lines == 0) {
      if (!is_cycle) return ShapeClass::Unknown;
      const double r = arcs.front().rx;
      for (const auto& a : arcs)
        if (!close_rel(a.rx, a.ry, tol.predicate) || !close_rel(a.rx, r, tol.predicate))
          return ShapeClass::Unknown;
      return ShapeClass::Circle;
    }
    if (arcs.size() != 1 || lines != 2 || !is_cycle) return ShapeClass::Unknown;
    const auto arc_edge = *std::find_if(edges.begin(), edges.end(), [](const Edge& e) { return e.arc >= 0; });
    int centre = -1;
    for (int v : used)
      if (v != arc_edge.u && v != arc_edge.v) centre = v;
    if (centre < 0) return ShapeClass::Unknown;
    const double r1 = norm(verts[arc_edge.u] - verts[centre]);
    const double r2 = norm(verts[arc_edge.v] - verts[centre]);
    const auto& arc = arcs.front();
    if (!close_rel(r1, r2, tol.predicate) || !close_rel(arc.rx, arc.ry, tol.predicate) ||
        !close_rel(r1, arc.rx, tol.predicate))
      return ShapeClass::Unknown;
    return ShapeClass::Sector;
  }

  if (!is_cycle && !is_path) return ShapeClass::Unknown;

  // Walk the chain from an endpoint (path) or any vertex (cycle).
  int v = used.front();
  if (is_path)
    v = *std::find_if(used.begin(), used.end(), [&](int x) { return adj[x].size() == 1; });
  std::vector<Point> ring;
  std::vector<bool> edge_used(edges.size(), false);
  for (;;) {
    ring.push_back(verts[v]);
    int next_edge = -1;
    for (int ei : adj[v])
      if (!edge_used[ei]) {
        next_edge = ei;
        break;
      }
    if (next_edge < 0) break;
    edge_used[next_edge] = true;
    v = edges[next_edge].u == v ? edges[next_edge].v : edges[next_edge].u;
    if (is_cycle && v == used.front()) break;
  }
  return classify_polygon(std::move(ring), is_cycle, eps, tol);
}

std::string extract_path_data(std::string_view text) {
  static const std::regex kAttr(R"re(\bd\s*=\s*(?:"([^"]*)"|'([^']*)'))re");
  const std::string s(text);
  std::smatch m;
  if (std::regex_search(s, m, kAttr)) return m[1].matched ? m[1].str() : m[2].str();
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  return s.substr(first, s.find_last_not_of(" \t\r\n") - first + 1);
}

std::vector<std::pair<std::string, std::string>> parse_options(std::string_view text) {
  static const std::regex kOption(R"(\(([A-Z])\)\s*([A-Za-z]+))");
  std::vector<std::pair<std::string, std::string>> out;
  const std::string s(text);
  for (auto it = std::sregex_iterator(s.begin(), s.end(), kOption); it != std::sregex_iterator(); ++it) {
    std::string name = (*it)[2].str();
    std::transform(name.begin(), name.end(), name.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    out.emplace_back("(" + (*it)[1].str() + ")", std::move(name));
  }
  return out;
}

std::string option_for(ShapeClass shape,
                       const std::vector<std::pair<std::string, std::string>>& options) {
  const auto name = to_string(shape);
  for (const auto& [letter, option] : options)
    if (option == name) return letter;
  throw NoSuchOption("no option named \"" + std::string(name) + "\"");
}

}  // namespace apet::svg
