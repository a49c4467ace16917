#pragma once
// Result tables from trial records. Counts stay integral; percentages are
// rounded to two decimals (half away from zero) only when rendered.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "apet/core.hpp"

namespace apet::stats {

class EmptyInput : public Error {
 public:
  EmptyInput() : Error("no trial records") {}
};

// count/total as a percentage. `count` may be negative for deltas.
struct Share {
  std::int64_t count = 0;
  std::int64_t total = 0;

  double value() const { return total ? 100.0 * static_cast<double>(count) / static_cast<double>(total) : 0.0; }
  std::string render(bool explicit_sign = false) const;
  bool operator==(const Share&) const = default;
};

// 100*num/den at two decimals, exact. "+4.40", "-14.80", "0.00" with explicit_sign.
std::string format_percent(std::int64_t num, std::int64_t den, bool explicit_sign = false);

struct AccuracyRow {
  TaskKind kind{};
  std::int64_t n = 0;
  std::int64_t standard_correct = 0;
  std::int64_t apet_correct = 0;

  Share standard() const { return {standard_correct, n}; }
  Share apet() const { return {apet_correct, n}; }
  Share delta() const { return {apet_correct - standard_correct, n}; }
};

struct TechniqueRow {
  TaskKind kind{};
  std::int64_t n = 0;
  std::array<std::int64_t, 8> usage{};    // indexed like kAllBuckets
  std::array<std::int64_t, 8> correct{};  // optimized arm correct within the bucket

  Share usage_share(UsageBucket b) const { return {usage[static_cast<std::size_t>(b)], n}; }
  Share correct_share(UsageBucket b) const { return {correct[static_cast<std::size_t>(b)], n}; }
};

// One row per task kind present, in canonical kind order. Throw EmptyInput.
std::vector<AccuracyRow> accuracy_table(const std::vector<TrialRecord>& records);
std::vector<TechniqueRow> technique_tables(const std::vector<TrialRecord>& records);

enum class ReportFormat : std::uint8_t { Plain, Csv, Structured };
std::optional<ReportFormat> parse_report_format(std::string_view text);

struct ReportOptions {
  // Show only the six combination columns of the published usage tables and
  // mention the other two buckets in a footnote.
  bool published_columns = false;
};

std::string render_report(const std::vector<AccuracyRow>& rows, const std::vector<TechniqueRow>& tables,
                          ReportFormat format, const ReportOptions& options = {});

}  // namespace apet::stats
