#include "apet/stats.hpp"

#include <json.hpp>
#include <sstream>

namespace apet::stats {

namespace {

using ojson = nlohmann::ordered_json;

std::size_t slot(UsageBucket b) { return static_cast<std::size_t>(b); }

// Kinds in canonical order with their records' positions.
template <typename Fn>
void for_each_kind(const std::vector<TrialRecord>& records, Fn fn) {
  if (records.empty()) throw EmptyInput();
  for (auto kind : kAllTaskKinds) {
    std::vector<const TrialRecord*> group;
    for (const auto& r : records)
      if (r.kind == kind) group.push_back(&r);
    if (!group.empty()) fn(kind, group);
  }
}

std::string pad_left(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string pad_right(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  return out + "\"";
}

std::vector<UsageBucket> columns(const ReportOptions& options) {
  std::vector<UsageBucket> cols(kAllBuckets.begin(), kAllBuckets.end());
  if (options.published_columns) cols.resize(6);
  return cols;
}

constexpr std::size_t kTaskWidth = 18;

void plain_accuracy(std::ostream& out, const std::vector<AccuracyRow>& rows) {
  out << pad_right("Task", kTaskWidth) << pad_left("N", 5) << pad_left("Standard", 10)
      << pad_left("APET", 10) << pad_left("Delta", 10) << '\n';
  out << std::string(kTaskWidth + 35, '-') << '\n';
  for (const auto& r : rows)
    out << pad_right(std::string(display_name(r.kind)), kTaskWidth) << pad_left(std::to_string(r.n), 5)
        << pad_left(r.standard().render(), 10) << pad_left(r.apet().render(), 10)
        << pad_left(r.delta().render(true), 10) << '\n';
}

void plain_techniques(std::ostream& out, const std::vector<TechniqueRow>& tables,
                      const ReportOptions& options, bool correct) {
  const auto cols = columns(options);
  out << (correct ? "Correct by technique (% of N)" : "Technique usage (% of N)") << '\n';
  out << pad_right("Task", kTaskWidth);
  std::size_t width = kTaskWidth;
  for (auto b : cols) {
    const std::string name(display_name(b));
    out << pad_left(name, name.size() + 2);
    width += name.size() + 2;
  }
  out << '\n' << std::string(width, '-') << '\n';
  for (const auto& t : tables) {
    out << pad_right(std::string(display_name(t.kind)), kTaskWidth);
    for (auto b : cols) {
      const auto share = correct ? t.correct_share(b) : t.usage_share(b);
      out << pad_left(share.render(), display_name(b).size() + 2);
    }
    out << '\n';
  }
  if (options.published_columns) {
    for (const auto& t : tables) {
      out << "  * " << display_name(t.kind) << ": ";
      for (std::size_t i = 6; i < kAllBuckets.size(); ++i) {
        const auto b = kAllBuckets[i];
        if (i > 6) out << ", ";
        out << display_name(b) << ' ' << (correct ? t.correct_share(b) : t.usage_share(b)).render();
      }
      out << '\n';
    }
  }
}

}  // namespace

std::string format_percent(std::int64_t num, std::int64_t den, bool explicit_sign) {
  if (den <= 0) return "n/a";
  const bool negative = num < 0;
  const auto mag = static_cast<unsigned __int128>(negative ? -num : num);
  // Hundredths of a percent, rounded half away from zero.
  const auto scaled = static_cast<std::uint64_t>((mag * 20000 + static_cast<unsigned __int128>(den)) /
                                                 (2 * static_cast<unsigned __int128>(den)));
  std::string frac = std::to_string(scaled % 100);
  if (frac.size() < 2) frac.insert(0, "0");
  std::string out = std::to_string(scaled / 100) + "." + frac;
  if (scaled == 0) return out;
  if (negative) return "-" + out;
  return explicit_sign ? "+" + out : out;
}

std::string Share::render(bool explicit_sign) const { return format_percent(count, total, explicit_sign); }

std::vector<AccuracyRow> accuracy_table(const std::vector<TrialRecord>& records) {
  std::vector<AccuracyRow> rows;
  for_each_kind(records, [&](TaskKind kind, const std::vector<const TrialRecord*>& group) {
    AccuracyRow row{kind, static_cast<std::int64_t>(group.size()), 0, 0};
    for (const auto* r : group) {
      row.standard_correct += r->verdict_original.correct;
      row.apet_correct += r->verdict_optimized.correct;
    }
    rows.push_back(row);
  });
  return rows;
}

std::vector<TechniqueRow> technique_tables(const std::vector<TrialRecord>& records) {
  std::vector<TechniqueRow> rows;
  for_each_kind(records, [&](TaskKind kind, const std::vector<const TrialRecord*>& group) {
    TechniqueRow row{kind, static_cast<std::int64_t>(group.size()), {}, {}};
    for (const auto* r : group) {
      const auto b = slot(bucket_of(r->techniques));
      ++row.usage[b];
      row.correct[b] += r->verdict_optimized.correct;
    }
    rows.push_back(row);
  });
  return rows;
}

std::optional<ReportFormat> parse_report_format(std::string_view text) {
  if (text == "plain") return ReportFormat::Plain;
  if (text == "csv") return ReportFormat::Csv;
  if (text == "structured") return ReportFormat::Structured;
  return std::nullopt;
}

std::string render_report(const std::vector<AccuracyRow>& rows, const std::vector<TechniqueRow>& tables,
                          ReportFormat format, const ReportOptions& options) {
  std::ostringstream out;
  const auto cols = columns(options);
  switch (format) {
    case ReportFormat::Plain:
      plain_accuracy(out, rows);
      if (!tables.empty()) {
        out << '\n';
        plain_techniques(out, tables, options, false);
        out << '\n';
        plain_techniques(out, tables, options, true);
      }
      break;
    case ReportFormat::Csv:
      out << "task,n,standard_pct,apet_pct,delta_pct\r\n";
      for (const auto& r : rows)
        out << csv_field(display_name(r.kind)) << ',' << r.n << ',' << r.standard().render() << ','
            << r.apet().render() << ',' << r.delta().render(true) << "\r\n";
      if (!tables.empty()) {
        out << "\r\ntask,n,metric";
        for (auto b : cols) out << ',' << csv_field(display_name(b));
        out << "\r\n";
        for (const auto& t : tables) {
          for (bool correct : {false, true}) {
            out << csv_field(display_name(t.kind)) << ',' << t.n << ',' << (correct ? "correct_pct" : "usage_pct");
            for (auto b : cols) out << ',' << (correct ? t.correct_share(b) : t.usage_share(b)).render();
            out << "\r\n";
          }
        }
      }
      break;
    case ReportFormat::Structured:
      for (const auto& r : rows) {
        ojson j;
        j["table"] = "accuracy";
        j["task"] = to_string(r.kind);
        j["n"] = r.n;
        j["standard_correct"] = r.standard_correct;
        j["apet_correct"] = r.apet_correct;
        j["standard_pct"] = r.standard().render();
        j["apet_pct"] = r.apet().render();
        j["delta_pct"] = r.delta().render(true);
        out << j.dump() << '\n';
      }
      for (const auto& t : tables) {
        for (auto b : cols) {
          ojson j;
          j["table"] = "techniques";
          j["task"] = to_string(t.kind);
          j["bucket"] = display_name(b);
          j["n"] = t.n;
          j["usage_count"] = t.usage[slot(b)];
          j["correct_count"] = t.correct[slot(b)];
          j["usage_pct"] = t.usage_share(b).render();
          j["correct_pct"] = t.correct_share(b).render();
          out << j.dump() << '\n';
        }
      }
      break;
  }
  return out.str();
}

}  // namespace apet::stats
