#pragma once
// Shared test helpers: fixture paths, scratch directories, hand-built trial
// records and scripted replay replies.

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "apet/core.hpp"
#include "apet/llmclient.hpp"
#include "apet/svgshapes.hpp"
#include <random>

namespace testing {

std::string fixture(const std::string& name);
std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

// A fresh directory under the system temp dir, removed on destruction.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag);
  ~ScratchDir();
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

apet::TrialRecord make_record(apet::TaskKind kind, std::size_t index, apet::UsageBucket bucket,
                              bool standard_correct, bool apet_correct);

// Per-kind counts as published: N, standard correct, APET correct, then per
// bucket (kAllBuckets order) usage and APET-correct counts.
struct PublishedCounts {
  apet::TaskKind kind;
  int n;
  int standard_correct;
  int apet_correct;
  std::array<int, 8> usage;
  std::array<int, 8> correct;
};
const std::vector<PublishedCounts>& published_counts();

// Records realising `counts` exactly.
std::vector<apet::TrialRecord> records_for(const PublishedCounts& counts);

// The published cells, as printed, per kind in kAllTaskKinds order.
struct PublishedCells {
  std::string standard, apet, delta;
  std::array<std::string, 6> usage;
  std::array<std::string, 6> correct;
};
const std::vector<PublishedCells>& published_cells();

// Replies for exactly the requests the runner makes on `instances`:
// optimizer call, original-prompt call, optimized-prompt call. Instances
// whose index is in `skip` get no optimizer reply.
std::vector<apet::llm::ScriptEntry> scripted_replies(const std::vector<apet::TaskInstance>& instances,
                                                     const apet::llm::CompletionParams& params,
                                                     const std::vector<std::size_t>& skip = {});

struct SyntheticShape {
  std::string d;
  apet::svg::ShapeClass expected;
};

// A random figure with k corners under random rotation, translation and
// scale, coordinates printed with two decimals. k = 3, 5..8 give convex
// polygons; k = 4 gives a rectangle, kite or trapezoid.
SyntheticShape random_shape(int k, std::mt19937_64& rng);

}  // namespace testing
