#include "apet/runner.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <map>
#include <mutex>

#include "apet/digest.hpp"
#include "apet/stats.hpp"

namespace apet::runner {

namespace {

using ojson = nlohmann::ordered_json;

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

bool is_provider_failure(const Verdict& v) {
  return !v.correct && std::string_view(v.reason).starts_with(kProviderErrorPrefix);
}

ScoringMode other_mode(ScoringMode m) {
  return m == ScoringMode::Exact ? ScoringMode::Semantic : ScoringMode::Exact;
}

void validate_instance(const TaskInstance& inst, const verdicts::VerifyOptions& opts) {
  try {
    switch (inst.kind) {
      case TaskKind::WordSorting: break;
      case TaskKind::GameOf24: verdicts::numbers_of(inst.input); break;
      case TaskKind::GeometricShapes:
        if (!verdicts::option_letter(inst.target))
          throw verdicts::InstanceParseError("target has no option letter");
        break;
      case TaskKind::CheckmateInOne: verdicts::position_of(inst.input, opts.fen_input); break;
    }
  } catch (const Error& e) {
    throw datasets::DatasetError("instance " + std::to_string(inst.index) + ": " + e.what());
  }
}

bool record_order(const TrialRecord& a, const TrialRecord& b) {
  if (a.kind != b.kind) return a.kind < b.kind;
  return a.index < b.index;
}

void write_all(const std::string& path, const std::vector<TrialRecord>& records) {
  const auto tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp);
    for (const auto& r : records) out << encode_trial(r) << '\n';
    if (!out.flush()) throw Error("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

std::string RunSummary::standard_accuracy() const { return stats::format_percent(standard_correct, n); }
std::string RunSummary::apet_accuracy() const { return stats::format_percent(apet_correct, n); }
std::string RunSummary::delta() const { return stats::format_percent(apet_correct - standard_correct, n, true); }

std::string render_summary(const RunSummary& s, bool include_timestamps) {
  ojson j;
  j["kind"] = to_string(s.kind);
  j["mode"] = to_string(s.mode);
  j["n"] = s.n;
  j["standard_correct"] = s.standard_correct;
  j["apet_correct"] = s.apet_correct;
  j["standard_accuracy"] = s.standard_accuracy();
  j["apet_accuracy"] = s.apet_accuracy();
  j["delta"] = s.delta();
  j["failed_arms"] = s.failed_arms;
  if (s.alt) {
    ojson alt;
    alt["mode"] = to_string(s.alt->mode);
    alt["standard_accuracy"] = stats::format_percent(s.alt->standard_correct, s.n);
    alt["apet_accuracy"] = stats::format_percent(s.alt->apet_correct, s.n);
    alt["disagreements"] = s.alt->disagreements;
    j["alt_mode"] = alt;
  } else {
    j["alt_mode"] = nullptr;
  }
  j["dataset_digest"] = s.dataset_digest;
  ojson params;
  params["model"] = s.params.model;
  params["temperature"] = s.params.temperature;
  params["top_p"] = s.params.top_p;
  params["max_tokens"] = s.params.max_tokens ? ojson(*s.params.max_tokens) : ojson(nullptr);
  j["params"] = params;
  if (include_timestamps) {
    j["started"] = s.started;
    j["finished"] = s.finished;
  }
  return j.dump();
}

TrialRecord run_trial(const TaskInstance& instance, llm::ChatProvider& provider, const RunConfig& config,
                      bool* fence_stripped) {
  const auto& tmpl = config.optimizer ? *config.optimizer : metaprompt::OptimizerTemplate::golden();
  TrialRecord r;
  r.kind = instance.kind;
  r.index = instance.index;
  r.sample_prompt = instance.input;
  r.benchmark_answer = instance.target;
  if (config.baseline_system) r.original_messages.push_back({Role::System, *config.baseline_system});
  r.original_messages.push_back({Role::User, instance.input});

  std::optional<std::string> optimize_error;
  try {
    const auto raw = provider.complete(metaprompt::build_optimizer_messages(tmpl, instance.input), config.params);
    auto post = metaprompt::postprocess_optimized(raw.content);
    if (fence_stripped) *fence_stripped = post.fence_stripped;
    r.optimized_prompt = std::move(post.text);
  } catch (const llm::ProviderError& e) {
    optimize_error = e.what();
  }

  try {
    r.answer_original = provider.complete(r.original_messages, config.params).content;
    r.verdict_original = verdicts::score(instance, r.answer_original, config.mode, config.verify);
  } catch (const llm::ProviderError& e) {
    r.verdict_original = Verdict::fail(config.mode, std::string(kProviderErrorPrefix) + e.what());
  }

  if (optimize_error) {
    r.verdict_optimized = Verdict::fail(config.mode, std::string(kProviderErrorPrefix) + *optimize_error);
  } else {
    r.optimized_messages.push_back({Role::User, r.optimized_prompt});
    try {
      r.answer_optimized = provider.complete(r.optimized_messages, config.params).content;
      r.verdict_optimized = verdicts::score(instance, r.answer_optimized, config.mode, config.verify);
    } catch (const llm::ProviderError& e) {
      r.verdict_optimized = Verdict::fail(config.mode, std::string(kProviderErrorPrefix) + e.what());
    }
  }
  r.techniques = metaprompt::classify_techniques(r.optimized_prompt);
  return r;
}

RunSummary summarize(const std::vector<TrialRecord>& records, const RunConfig& config,
                     const std::vector<TaskInstance>& instances, std::string dataset_digest) {
  std::map<std::size_t, const TrialRecord*> by_index;
  for (const auto& r : records)
    if (r.kind == config.kind) by_index.try_emplace(r.index, &r);

  RunSummary s;
  s.kind = config.kind;
  s.mode = config.mode;
  s.dataset_digest = std::move(dataset_digest);
  s.params = config.params;
  const auto alt_mode = other_mode(config.mode);
  if (verdicts::supports(config.kind, alt_mode)) s.alt = AltModeSummary{alt_mode};

  for (const auto& inst : instances) {
    auto it = by_index.find(inst.index);
    if (it == by_index.end()) throw Error("no record for instance " + std::to_string(inst.index));
    const auto& r = *it->second;
    ++s.n;
    s.standard_correct += r.verdict_original.correct;
    s.apet_correct += r.verdict_optimized.correct;
    for (const auto* v : {&r.verdict_original, &r.verdict_optimized}) s.failed_arms += is_provider_failure(*v);
    if (!s.alt) continue;
    auto alt_verdict = [&](const Verdict& primary, const std::string& answer) {
      if (is_provider_failure(primary)) return false;
      return verdicts::score(inst, answer, alt_mode, config.verify).correct;
    };
    const bool a = alt_verdict(r.verdict_original, r.answer_original);
    const bool b = alt_verdict(r.verdict_optimized, r.answer_optimized);
    s.alt->standard_correct += a;
    s.alt->apet_correct += b;
    s.alt->disagreements += (a != r.verdict_original.correct) + (b != r.verdict_optimized.correct);
  }
  return s;
}

RunResult run_experiment(const RunConfig& config, std::shared_ptr<llm::ChatProvider> provider) {
  if (config.concurrency < 1) throw ConfigError("concurrency must be at least 1");
  if (config.output_path.empty()) throw ConfigError("output path is required");
  if (!provider) throw ConfigError("no provider");
  if (config.dataset.kind != config.kind) throw ConfigError("dataset kind does not match task");
  if (!verdicts::supports(config.kind, config.mode))
    throw ConfigError(std::string(display_name(config.kind)) + " does not support " +
                      std::string(to_string(config.mode)) + " scoring");
  config.params.validate();

  RunResult result;
  result.summary.started = utc_now();

  auto instances = datasets::load_dataset(config.dataset);
  if (config.limit) {
    if (*config.limit == 0 || *config.limit > instances.size())
      throw ConfigError("limit " + std::to_string(*config.limit) + " outside 1.." +
                        std::to_string(instances.size()));
    instances.resize(*config.limit);
  }
  for (const auto& inst : instances) validate_instance(inst, config.verify);
  const auto digest = file_sha256(config.dataset.path);

  if (!config.cache_path.empty())
    provider = std::make_shared<llm::CachedProvider>(std::move(provider), config.cache_path);

  std::vector<TrialRecord> existing;
  if (std::filesystem::exists(config.output_path)) existing = read_trial_file(config.output_path);
  std::map<std::size_t, bool> done;
  for (const auto& r : existing) {
    if (r.kind != config.kind) continue;
    if (r.verdict_original.mode != config.mode || r.verdict_optimized.mode != config.mode)
      throw ConfigError("existing records in " + config.output_path + " were scored in another mode");
    done[r.index] = true;
  }

  std::vector<const TaskInstance*> pending;
  for (const auto& inst : instances) {
    if (done.count(inst.index)) ++result.stats.resumed;
    else pending.push_back(&inst);
  }

  // Records stream to the file in index order; finished trials wait in
  // `slots` until every earlier one has been written.
  std::vector<std::optional<TrialRecord>> slots(pending.size());
  std::size_t next_to_write = 0;
  std::size_t fences = 0;
  std::mutex writer_mu;
  std::exception_ptr failure;
  std::ofstream out;
  if (!pending.empty()) {
    out.open(config.output_path, std::ios::binary | std::ios::app);
    if (!out) throw Error("cannot open " + config.output_path);
  }

  const auto n_pending = static_cast<std::ptrdiff_t>(pending.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(config.concurrency)
  for (std::ptrdiff_t i = 0; i < n_pending; ++i) {
    {
      std::lock_guard lock(writer_mu);
      if (failure) continue;
    }
    try {
      bool stripped = false;
      auto record = run_trial(*pending[static_cast<std::size_t>(i)], *provider, config, &stripped);
      std::lock_guard lock(writer_mu);
      fences += stripped;
      slots[static_cast<std::size_t>(i)] = std::move(record);
      while (next_to_write < slots.size() && slots[next_to_write]) {
        out << encode_trial(*slots[next_to_write]) << '\n';
        out.flush();
        ++next_to_write;
      }
      if (!out) throw Error("write failed: " + config.output_path);
    } catch (...) {
      std::lock_guard lock(writer_mu);
      if (!failure) failure = std::current_exception();
    }
  }
  if (out.is_open()) out.close();
  if (failure) std::rethrow_exception(failure);

  result.stats.new_trials = pending.size();
  result.stats.fences_stripped = fences;

  std::vector<TrialRecord> all;
  std::map<std::pair<TaskKind, std::size_t>, bool> seen;
  for (auto& r : existing)
    if (seen.try_emplace({r.kind, r.index}, true).second) all.push_back(std::move(r));
  for (auto& slot : slots)
    if (seen.try_emplace({slot->kind, slot->index}, true).second) all.push_back(std::move(*slot));
  std::stable_sort(all.begin(), all.end(), record_order);
  write_all(config.output_path, all);

  auto started = std::move(result.summary.started);
  result.summary = summarize(all, config, instances, digest);
  result.summary.started = std::move(started);
  result.summary.finished = utc_now();
  return result;
}

}  // namespace apet::runner
