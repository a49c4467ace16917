#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "apet/metaprompt.hpp"

namespace testing {

namespace fs = std::filesystem;
using apet::TaskKind;
using apet::UsageBucket;

std::string fixture(const std::string& name) { return std::string(APET_FIXTURE_DIR) + "/" + name; }

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
}

ScratchDir::ScratchDir(const std::string& tag) {
  std::random_device rd;
  path_ = fs::temp_directory_path() / ("apet-" + tag + "-" + std::to_string(rd()));
  fs::create_directories(path_);
}

ScratchDir::~ScratchDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

apet::TrialRecord make_record(TaskKind kind, std::size_t index, UsageBucket bucket, bool standard_correct,
                              bool apet_correct) {
  apet::TrialRecord r;
  r.kind = kind;
  r.index = index;
  r.sample_prompt = "sample " + std::to_string(index);
  r.optimized_prompt = "optimized " + std::to_string(index);
  r.benchmark_answer = "target";
  r.answer_original = standard_correct ? "target" : "other";
  r.answer_optimized = apet_correct ? "target" : "other";
  r.original_messages = {{apet::Role::User, r.sample_prompt}};
  r.optimized_messages = {{apet::Role::User, r.optimized_prompt}};
  r.techniques = apet::set_of(bucket);
  const auto mode = apet::ScoringMode::Exact;
  r.verdict_original = standard_correct ? apet::Verdict::pass(mode) : apet::Verdict::fail(mode, "differs");
  r.verdict_optimized = apet_correct ? apet::Verdict::pass(mode) : apet::Verdict::fail(mode, "differs");
  return r;
}

const std::vector<PublishedCounts>& published_counts() {
  static const std::vector<PublishedCounts> counts = {
      {TaskKind::WordSorting, 250, 209, 220, {45, 1, 0, 204, 0, 0, 0, 0}, {40, 1, 0, 179, 0, 0, 0, 0}},
      {TaskKind::GameOf24, 75, 12, 14, {10, 0, 0, 65, 0, 0, 0, 0}, {1, 0, 0, 13, 0, 0, 0, 0}},
      // 108 rather than 109 CoT-only correct so the buckets add up to 193.
      {TaskKind::GeometricShapes, 250, 176, 193, {1, 148, 3, 97, 0, 1, 0, 0}, {1, 108, 2, 81, 0, 1, 0, 0}},
      // The published columns cover 249 trials and 63 correct; the remaining
      // trial sits in NoneDetected and is correct.
      {TaskKind::CheckmateInOne, 250, 101, 64, {11, 42, 4, 182, 0, 10, 0, 1}, {2, 5, 1, 52, 0, 3, 0, 1}},
  };
  return counts;
}

std::vector<apet::TrialRecord> records_for(const PublishedCounts& c) {
  std::vector<apet::TrialRecord> out;
  std::size_t index = 0;
  for (std::size_t b = 0; b < apet::kAllBuckets.size(); ++b)
    for (int i = 0; i < c.usage[b]; ++i) out.push_back(make_record(c.kind, index++, apet::kAllBuckets[b], false, i < c.correct[b]));
  // Standard-arm correctness is independent of the buckets.
  for (int i = 0; i < c.standard_correct; ++i) {
    auto& r = out[static_cast<std::size_t>(i)];
    r.verdict_original = apet::Verdict::pass(apet::ScoringMode::Exact);
    r.answer_original = "target";
  }
  return out;
}

const std::vector<PublishedCells>& published_cells() {
  static const std::vector<PublishedCells> cells = {
      {"83.60", "88.00", "+4.40",
       {"18.00", "0.40", "0.00", "81.60", "0.00", "0.00"},
       {"16.00", "0.40", "0.00", "71.60", "0.00", "0.00"}},
      {"16.00", "18.67", "+2.67",
       {"13.33", "0.00", "0.00", "86.67", "0.00", "0.00"},
       {"1.33", "0.00", "0.00", "17.33", "0.00", "0.00"}},
      {"70.40", "77.20", "+6.80",
       {"0.40", "59.20", "1.20", "38.80", "0.00", "0.40"},
       {"0.40", "43.60", "0.80", "32.40", "0.00", "0.40"}},
      {"40.40", "25.60", "-14.80",
       {"4.40", "16.80", "1.60", "72.80", "0.00", "4.00"},
       {"0.80", "2.00", "0.40", "20.80", "0.00", "1.20"}},
  };
  return cells;
}

namespace {

std::string wrong_answer(const apet::TaskInstance& inst) {
  switch (inst.kind) {
    case TaskKind::WordSorting: return "zzz aaa";
    case TaskKind::GameOf24: return "Answer: (1 + 1) * 1";
    case TaskKind::GeometricShapes: return inst.target == "(E)" ? "The answer is (A)" : "The answer is (E)";
    case TaskKind::CheckmateInOne: return "I would play Ka1";
  }
  return "?";
}

std::string right_answer(const apet::TaskInstance& inst) {
  switch (inst.kind) {
    case TaskKind::WordSorting: return "Sorted:\n" + inst.target;
    case TaskKind::GameOf24: return "One solution:\n" + inst.target + " = 24";
    case TaskKind::GeometricShapes: return "Following the path, the shape is " + inst.target + ".";
    case TaskKind::CheckmateInOne: return "The mating move is " + inst.target;
  }
  return "?";
}

std::string optimized_prompt(const apet::TaskInstance& inst) {
  switch (inst.index % 4) {
    case 0: return "You are an expert puzzle solver. Let's think step by step.\n\n" + inst.input;
    case 1: return "\"\"\"\nImagine three experts discussing this. " + inst.input + "\n\"\"\"";
    case 2: return "Work through this step-by-step.\n" + inst.input;
    default: return "As a seasoned specialist, answer the following.\n" + inst.input;
  }
}

}  // namespace

std::vector<apet::llm::ScriptEntry> scripted_replies(const std::vector<apet::TaskInstance>& instances,
                                                     const apet::llm::CompletionParams& params,
                                                     const std::vector<std::size_t>& skip) {
  std::vector<apet::llm::ScriptEntry> out;
  for (const auto& inst : instances) {
    const bool skipped = std::find(skip.begin(), skip.end(), inst.index) != skip.end();
    const auto opt_raw = optimized_prompt(inst);
    if (!skipped)
      out.push_back({apet::llm::request_digest(apet::metaprompt::build_optimizer_messages(inst.input), params), opt_raw});
    const std::vector<apet::Message> original{{apet::Role::User, inst.input}};
    out.push_back({apet::llm::request_digest(original, params), inst.index % 3 == 0 ? right_answer(inst) : wrong_answer(inst)});
    const std::vector<apet::Message> optimized{
        {apet::Role::User, apet::metaprompt::postprocess_optimized(opt_raw).text}};
    out.push_back({apet::llm::request_digest(optimized, params), inst.index % 3 == 2 ? wrong_answer(inst) : right_answer(inst)});
  }
  return out;
}

namespace {

using Pt = std::pair<double, double>;

std::vector<Pt> convex_polygon(int k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0, 2 * M_PI);
  std::vector<double> a(static_cast<std::size_t>(k));
  for (;;) {
    for (auto& x : a) x = angle(rng);
    std::sort(a.begin(), a.end());
    double min_gap = 2 * M_PI - (a.back() - a.front());
    for (std::size_t i = 1; i < a.size(); ++i) min_gap = std::min(min_gap, a[i] - a[i - 1]);
    if (min_gap > 0.3) break;
  }
  std::vector<Pt> out;
  for (double t : a) out.emplace_back(20 * std::cos(t), 20 * std::sin(t));
  return out;
}

std::vector<Pt> quad(apet::svg::ShapeClass kind, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> len(8, 30);
  using apet::svg::ShapeClass;
  if (kind == ShapeClass::Rectangle) {
    const double w = len(rng), h = len(rng);
    return {{0, 0}, {w, 0}, {w, h}, {0, h}};
  }
  if (kind == ShapeClass::Kite) {
    // Symmetric about the y axis, tip above the wings, tail below.
    const double wing = len(rng), up = len(rng), down = len(rng);
    return {{0, -down}, {wing, 0}, {0, up}, {-wing, 0}};
  }
  // One pair of parallel sides of different lengths, legs not parallel, no
  // two adjacent sides of equal length.
  for (;;) {
    const double bottom = len(rng) + 10, top = len(rng), h = len(rng);
    std::uniform_real_distribution<double> shift(-10, 10);
    const double x = shift(rng);
    const std::vector<Pt> p = {{0, 0}, {bottom, 0}, {x + top, h}, {x, h}};
    std::array<double, 4> l{};
    for (std::size_t i = 0; i < 4; ++i)
      l[i] = std::hypot(p[(i + 1) % 4].first - p[i].first, p[(i + 1) % 4].second - p[i].second);
    bool distinct = std::abs(bottom - top) > 3;
    for (std::size_t i = 0; i < 4; ++i) distinct &= std::abs(l[i] - l[(i + 1) % 4]) > 0.1 * l[i];
    // The legs' cross product is h * (bottom - top), so they are not parallel.
    if (distinct) return p;
  }
}

}  // namespace

SyntheticShape random_shape(int k, std::mt19937_64& rng) {
  using apet::svg::ShapeClass;
  std::vector<Pt> pts;
  ShapeClass expected = ShapeClass::Unknown;
  if (k == 4) {
    const ShapeClass kinds[] = {ShapeClass::Rectangle, ShapeClass::Kite, ShapeClass::Trapezoid};
    expected = kinds[rng() % 3];
    pts = quad(expected, rng);
  } else {
    pts = convex_polygon(k, rng);
    const ShapeClass by_k[] = {ShapeClass::Unknown, ShapeClass::Unknown, ShapeClass::Unknown, ShapeClass::Triangle,
                               ShapeClass::Unknown, ShapeClass::Pentagon, ShapeClass::Hexagon, ShapeClass::Heptagon,
                               ShapeClass::Octagon};
    expected = by_k[k];
  }
  std::uniform_real_distribution<double> angle(0, 2 * M_PI), scale(0.5, 3.0), shift(-50, 150);
  const double a = angle(rng), s = scale(rng), tx = shift(rng), ty = shift(rng);
  // Start at a random corner, walk in either direction.
  std::rotate(pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(rng() % pts.size()), pts.end());
  if (rng() % 2) std::reverse(pts.begin(), pts.end());
  std::string d;
  char buf[64];
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto [x, y] = pts[i];
    std::snprintf(buf, sizeof buf, "%s %.2f,%.2f ", i ? "L" : "M", tx + s * (x * std::cos(a) - y * std::sin(a)),
                  ty + s * (x * std::sin(a) + y * std::cos(a)));
    d += buf;
  }
  if (rng() % 2) {
    d += "Z";
  } else {
    // Close by returning to the first point, as the benchmark paths do.
    d += "L" + d.substr(1, d.find(' ', 2) - 1);
  }
  return {d, expected};
}

}  // namespace testing
