#pragma once
// The optimize / answer twice / verify / classify / persist loop over a dataset.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "apet/core.hpp"
#include "apet/datasets.hpp"
#include "apet/llmclient.hpp"
#include "apet/metaprompt.hpp"
#include "apet/verdicts.hpp"

namespace apet::runner {

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Reason prefix for an arm whose provider call failed.
inline constexpr std::string_view kProviderErrorPrefix = "provider error: ";

struct RunConfig {
  TaskKind kind{};
  datasets::DatasetFile dataset;
  llm::CompletionParams params;
  ScoringMode mode = ScoringMode::Exact;
  int concurrency = 1;
  std::string output_path;
  // Empty disables the response cache.
  std::string cache_path;
  std::optional<std::size_t> limit;
  // The baseline arm sends the bare input; a system message here is opt-in.
  std::optional<std::string> baseline_system;
  // nullptr selects the built-in optimizer template.
  const metaprompt::OptimizerTemplate* optimizer = nullptr;
  verdicts::VerifyOptions verify;
};

// Scores under the mode that was not selected, when the task supports it.
struct AltModeSummary {
  ScoringMode mode{};
  std::int64_t standard_correct = 0;
  std::int64_t apet_correct = 0;
  // Arms whose verdict differs between the two modes.
  std::int64_t disagreements = 0;
};

// A pure function of the persisted records (plus dataset digest and
// parameters), so reruns and resumes reproduce it apart from timestamps.
struct RunSummary {
  TaskKind kind{};
  ScoringMode mode{};
  std::int64_t n = 0;
  std::int64_t standard_correct = 0;
  std::int64_t apet_correct = 0;
  std::int64_t failed_arms = 0;
  std::optional<AltModeSummary> alt;
  std::string dataset_digest;
  llm::CompletionParams params;
  std::string started;
  std::string finished;

  std::string standard_accuracy() const;
  std::string apet_accuracy() const;
  std::string delta() const;
};

std::string render_summary(const RunSummary& summary, bool include_timestamps = true);

// Bookkeeping for this invocation only; not part of the summary.
struct RunStats {
  std::size_t new_trials = 0;
  std::size_t resumed = 0;
  std::size_t fences_stripped = 0;
};

struct RunResult {
  RunSummary summary;
  RunStats stats;
};

// Runs one trial; provider failures become failed verdicts. Exposed for tests.
TrialRecord run_trial(const TaskInstance& instance, llm::ChatProvider& provider, const RunConfig& config,
                      bool* fence_stripped = nullptr);

// Throws ConfigError for an invalid configuration and DatasetError when the
// dataset or one of its instances cannot be used.
RunResult run_experiment(const RunConfig& config, std::shared_ptr<llm::ChatProvider> provider);

// The summary of `records` restricted to config.kind and the given indices.
RunSummary summarize(const std::vector<TrialRecord>& records, const RunConfig& config,
                     const std::vector<TaskInstance>& instances, std::string dataset_digest);

}  // namespace apet::runner
