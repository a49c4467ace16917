// Command-line entry point. Exit codes: 0 success, 1 operational error,
// 2 usage error. Errors go to stderr as one JSON object per line.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "apet/chess.hpp"
#include "apet/datasets.hpp"
#include "apet/expr24.hpp"
#include "apet/llmclient.hpp"
#include "apet/metaprompt.hpp"
#include "apet/runner.hpp"
#include "apet/stats.hpp"
#include "apet/verdicts.hpp"

namespace {

using ojson = nlohmann::ordered_json;

class UsageError : public apet::Error {
 public:
  using apet::Error::Error;
};

void report_error(std::string_view kind, std::string_view message) {
  ojson j;
  j["error"] = kind;
  j["message"] = message;
  std::cerr << j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
}

// Stable error category names for scripts reading stderr.
std::string_view category_of(const std::exception& e) {
  if (dynamic_cast<const apet::datasets::DatasetError*>(&e)) return "dataset";
  if (dynamic_cast<const apet::llm::ProviderError*>(&e)) return "provider";
  if (dynamic_cast<const apet::MalformedRecord*>(&e)) return "malformed_record";
  if (dynamic_cast<const apet::stats::EmptyInput*>(&e)) return "empty_input";
  if (dynamic_cast<const apet::chess::ChessError*>(&e)) return "chess";
  if (dynamic_cast<const apet::expr24::ParseError*>(&e)) return "expression";
  if (dynamic_cast<const apet::metaprompt::TemplateError*>(&e)) return "template";
  return "operational";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw apet::Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

apet::TaskKind task_of(const std::string& text) {
  if (auto k = apet::parse_task_kind(text)) return *k;
  throw UsageError("unknown task: " + text);
}

apet::ScoringMode mode_of(const std::string& text, apet::TaskKind kind) {
  if (text.empty()) return apet::verdicts::default_mode(kind);
  if (auto m = apet::parse_scoring_mode(text)) return *m;
  throw UsageError("unknown mode: " + text);
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text)) throw apet::Error("cannot write " + path);
}

struct RunArgs {
  std::string task, dataset, provider, model = "gpt-4", mode, out, cache, replay, template_dir, summary,
      baseline_system;
  int concurrency = 1;
  std::optional<std::size_t> limit, expected_n;
  double temperature = 0.0, top_p = 1.0;
  std::optional<int> max_tokens;
  bool fen_input = false;
};

int cmd_run(const RunArgs& a) {
  apet::runner::RunConfig cfg;
  cfg.kind = task_of(a.task);
  cfg.dataset = {cfg.kind, a.dataset, a.expected_n};
  cfg.params.model = a.model;
  cfg.params.temperature = a.temperature;
  cfg.params.top_p = a.top_p;
  cfg.params.max_tokens = a.max_tokens;
  cfg.mode = mode_of(a.mode, cfg.kind);
  cfg.concurrency = a.concurrency;
  cfg.output_path = a.out;
  cfg.cache_path = a.cache;
  cfg.limit = a.limit;
  if (!a.baseline_system.empty()) cfg.baseline_system = a.baseline_system;
  cfg.verify.fen_input = a.fen_input;
  std::optional<apet::metaprompt::OptimizerTemplate> tmpl;
  if (!a.template_dir.empty()) {
    tmpl = apet::metaprompt::OptimizerTemplate::load(a.template_dir);
    cfg.optimizer = &*tmpl;
  }

  std::shared_ptr<apet::llm::ChatProvider> provider;
  if (a.provider == "live") {
    provider = std::make_shared<apet::llm::HttpProvider>(apet::llm::HttpConfig::from_environment());
  } else {
    const auto script = a.replay.empty() ? a.cache : a.replay;
    if (script.empty()) throw UsageError("replay provider needs --replay or --cache");
    provider = std::make_shared<apet::llm::ReplayProvider>(
        std::filesystem::exists(script) ? apet::llm::ReplayProvider::from_file(script)
                                        : apet::llm::ReplayProvider());
  }

  const auto result = apet::runner::run_experiment(cfg, provider);
  const auto summary = apet::runner::render_summary(result.summary) + "\n";
  std::cout << summary;
  if (!a.summary.empty()) write_output(summary, a.summary);
  ojson log;
  log["event"] = "run_stats";
  log["new_trials"] = result.stats.new_trials;
  log["resumed"] = result.stats.resumed;
  log["fences_stripped"] = result.stats.fences_stripped;
  std::cerr << log.dump() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Prompt-optimization evaluation harness"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run both prompt arms over a dataset");
  run_cmd->add_option("--task", run.task, "word_sorting | game_of_24 | geometric_shapes | checkmate_in_one")->required();
  run_cmd->add_option("--dataset", run.dataset, "Instance file (one JSON object per line)")->required();
  run_cmd->add_option("--provider", run.provider, "live | replay")->required()->check(CLI::IsMember({"live", "replay"}));
  run_cmd->add_option("--model", run.model, "Model id")->capture_default_str();
  run_cmd->add_option("--mode", run.mode, "exact | semantic (default depends on task)");
  run_cmd->add_option("--concurrency", run.concurrency, "Trials in flight")->check(CLI::PositiveNumber)->capture_default_str();
  run_cmd->add_option("--out", run.out, "Trial record file")->required();
  run_cmd->add_option("--cache", run.cache, "Response cache file");
  run_cmd->add_option("--replay", run.replay, "Replay script (defaults to the cache file)");
  run_cmd->add_option("--limit", run.limit, "Only the first n instances")->check(CLI::PositiveNumber);
  run_cmd->add_option("--expected-n", run.expected_n, "Fail unless the dataset has exactly n instances");
  run_cmd->add_option("--temperature", run.temperature)->capture_default_str();
  run_cmd->add_option("--top-p", run.top_p)->capture_default_str();
  run_cmd->add_option("--max-tokens", run.max_tokens)->check(CLI::PositiveNumber);
  run_cmd->add_option("--template-dir", run.template_dir, "Directory with optimizer_system.txt and optimizer_user.txt");
  run_cmd->add_option("--baseline-system", run.baseline_system, "System message for the original-prompt arm");
  run_cmd->add_option("--summary", run.summary, "Also write the summary here");
  run_cmd->add_flag("--fen-input", run.fen_input, "Checkmate inputs are FEN strings");

  std::string v_task, v_input, v_answer, v_target, v_mode;
  bool v_fen = false;
  auto* verify_cmd = app.add_subcommand("verify", "Score one answer");
  verify_cmd->add_option("--task", v_task)->required();
  verify_cmd->add_option("--input", v_input, "Task input text, or a file holding it")->required();
  verify_cmd->add_option("--answer", v_answer, "Model output")->required();
  verify_cmd->add_option("--target", v_target, "Benchmark answer (needed for exact scoring)");
  verify_cmd->add_option("--mode", v_mode);
  verify_cmd->add_flag("--fen", v_fen, "Input is a FEN string");

  std::vector<std::string> s_files;
  std::string s_format = "plain", s_out;
  bool s_published = false;
  auto* stats_cmd = app.add_subcommand("stats", "Result tables from trial records");
  stats_cmd->add_option("records", s_files)->required();
  stats_cmd->add_option("--format", s_format)->check(CLI::IsMember({"plain", "csv", "structured"}))->capture_default_str();
  stats_cmd->add_flag("--paper-columns", s_published, "Six published columns plus a footnote");
  stats_cmd->add_option("--out", s_out, "Write the report here instead of stdout");

  std::string i_task, i_from, i_to;
  auto* import_cmd = app.add_subcommand("import", "Convert a benchmark file to the instance format");
  import_cmd->add_option("--task", i_task)->required();
  import_cmd->add_option("--from", i_from, "Directory holding the benchmark file")->required();
  import_cmd->add_option("--to", i_to)->required();

  std::vector<std::int64_t> numbers;
  auto* solve_cmd = app.add_subcommand("solve24", "Find an expression reaching 24");
  solve_cmd->add_option("numbers", numbers)->required()->expected(4);

  std::string p_fen;
  int p_depth = 1;
  bool p_serial = false;
  auto* perft_cmd = app.add_subcommand("perft", "Count leaf nodes of the legal move tree");
  perft_cmd->add_option("--fen", p_fen);
  perft_cmd->add_option("--depth", p_depth)->required()->check(CLI::Range(0, 10));
  perft_cmd->add_flag("--serial", p_serial, "Use the single-threaded counter");

  std::string c_file;
  auto* classify_cmd = app.add_subcommand("classify", "Detect prompting techniques in a prompt file");
  classify_cmd->add_option("file", c_file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    report_error("usage", e.what());
    return 2;
  }

  try {
    if (*run_cmd) return cmd_run(run);

    if (*verify_cmd) {
      apet::TaskInstance inst;
      inst.kind = task_of(v_task);
      inst.input = std::filesystem::is_regular_file(v_input) ? read_file(v_input) : v_input;
      inst.target = v_target;
      const auto mode = mode_of(v_mode, inst.kind);
      if (!apet::verdicts::supports(inst.kind, mode)) throw UsageError("mode not supported for this task");
      if (mode == apet::ScoringMode::Exact && v_target.empty()) throw UsageError("exact scoring needs --target");
      const auto extracted = apet::verdicts::extract_answer(v_answer, inst.kind);
      const auto v = apet::verdicts::verify(inst, extracted, mode, {v_fen});
      ojson j;
      j["extracted"] = extracted ? ojson(*extracted) : ojson(nullptr);
      j["correct"] = v.correct;
      j["mode"] = apet::to_string(v.mode);
      j["reason"] = v.reason;
      std::cout << j.dump() << '\n';
      return 0;
    }

    if (*stats_cmd) {
      std::vector<apet::TrialRecord> records;
      for (const auto& f : s_files) {
        auto part = apet::read_trial_file(f);
        records.insert(records.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
      }
      const auto report = apet::stats::render_report(
          apet::stats::accuracy_table(records), apet::stats::technique_tables(records),
          *apet::stats::parse_report_format(s_format), {s_published});
      write_output(report, s_out);
      return 0;
    }

    if (*import_cmd) {
      const auto r = apet::datasets::import_directory(task_of(i_task), i_from, i_to);
      ojson j;
      j["source"] = r.source_path;
      j["source_sha256"] = r.source_digest;
      j["source_records"] = r.source_records;
      j["written"] = r.written;
      std::cout << j.dump() << '\n';
      return 0;
    }

    if (*solve_cmd) {
      const apet::expr24::Numbers n{numbers[0], numbers[1], numbers[2], numbers[3]};
      const auto s = apet::expr24::solve_24(n);
      std::cout << (s ? *s : "no solution") << '\n';
      return 0;
    }

    if (*perft_cmd) {
      const auto pos = p_fen.empty() ? apet::chess::Position::initial() : apet::chess::Position::from_fen(p_fen);
      std::cout << (p_serial ? apet::chess::perft(pos, p_depth) : apet::chess::perft_parallel(pos, p_depth)) << '\n';
      return 0;
    }

    if (*classify_cmd) {
      const auto set = apet::metaprompt::classify_techniques(read_file(c_file));
      ojson j;
      j["expert"] = set.expert;
      j["cot"] = set.cot;
      j["tot"] = set.tot;
      j["bucket"] = apet::display_name(apet::bucket_of(set));
      j["rules"] = apet::metaprompt::kRulesVersion;
      std::cout << j.dump() << '\n';
      return 0;
    }
  } catch (const UsageError& e) {
    report_error("usage", e.what());
    return 2;
  } catch (const apet::runner::ConfigError& e) {
    report_error("usage", e.what());
    return 2;
  } catch (const std::exception& e) {
    report_error(category_of(e), e.what());
    return 1;
  }
  return 2;
}
