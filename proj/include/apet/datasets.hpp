#pragma once
// Canonical benchmark files: one {"input", "target"} record per line.

#include <optional>
#include <string>
#include <vector>

#include "apet/core.hpp"

namespace apet::datasets {

class DatasetError : public Error {
 public:
  using Error::Error;
};

class FormatError : public DatasetError {
 public:
  using DatasetError::DatasetError;
};

class MissingField : public DatasetError {
 public:
  using DatasetError::DatasetError;
};

class CountMismatch : public DatasetError {
 public:
  CountMismatch(std::size_t expected, std::size_t actual);
  std::size_t expected() const { return expected_; }
  std::size_t actual() const { return actual_; }

 private:
  std::size_t expected_;
  std::size_t actual_;
};

struct DatasetFile {
  TaskKind kind{};
  std::string path;
  std::optional<std::size_t> expected_n;
};

// Sample sizes of the original experiment per task.
std::size_t reference_size(TaskKind kind);

std::vector<TaskInstance> load_dataset(const DatasetFile& file);
std::vector<TaskInstance> parse_dataset(TaskKind kind, const std::string& text,
                                        const std::string& origin = "<memory>");

std::string encode_instance(const TaskInstance& instance);

struct ImportResult {
  std::string source_path;
  std::string source_digest;
  std::size_t source_records = 0;
  std::size_t written = 0;
};

// Finds the file for `kind` under `directory` (JSONL with input/target,
// BIG-Bench style {"examples": [...]}, or a bare JSON array) and writes the
// canonical form to `to_path`. Game of 24 keeps the first reference_size()
// records.
ImportResult import_directory(TaskKind kind, const std::string& directory,
                              const std::string& to_path);

}  // namespace apet::datasets
