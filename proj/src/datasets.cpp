#include "apet/datasets.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "apet/digest.hpp"

namespace apet::datasets {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError("cannot open dataset file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string normalized_stem(const fs::path& p) {
  std::string out;
  for (char c : p.stem().string())
    if (std::isalnum(static_cast<unsigned char>(c)))
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return out;
}

std::string kind_key(TaskKind kind) {
  std::string out;
  for (char c : to_string(kind))
    if (c != '_') out.push_back(c);
  return out;
}

std::string target_of(const json& item) {
  auto stringify = [](const json& v) -> std::string {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number()) return v.dump();
    throw FormatError("target is neither text nor a number");
  };
  if (auto it = item.find("target"); it != item.end()) {
    if (it->is_array()) {
      if (it->empty()) throw MissingField("empty target list");
      return stringify(it->front());
    }
    return stringify(*it);
  }
  if (auto it = item.find("targets"); it != item.end() && it->is_array() && !it->empty())
    return stringify(it->front());
  if (auto it = item.find("target_scores"); it != item.end() && it->is_object() && !it->empty()) {
    auto best = it->begin();
    for (auto jt = it->begin(); jt != it->end(); ++jt)
      if (jt->get<double>() > best->get<double>()) best = jt;
    return best.key();
  }
  throw MissingField("record has no target");
}

std::vector<json> foreign_records(const fs::path& path) {
  const auto text = slurp(path.string());
  std::vector<json> out;
  const auto ext = path.extension().string();
  if (ext == ".jsonl" || ext == ".ndjson") {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
      if (line.find_first_not_of(" \t\r") != std::string::npos) out.push_back(json::parse(line));
    return out;
  }
  const auto doc = json::parse(text);
  if (doc.is_array()) return {doc.begin(), doc.end()};
  if (doc.is_object() && doc.contains("examples") && doc["examples"].is_array())
    return {doc["examples"].begin(), doc["examples"].end()};
  throw FormatError(path.string() + ": unrecognized dataset layout");
}

}  // namespace

CountMismatch::CountMismatch(std::size_t expected, std::size_t actual)
    : DatasetError("expected " + std::to_string(expected) + " records, found " +
                   std::to_string(actual)),
      expected_(expected),
      actual_(actual) {}

std::size_t reference_size(TaskKind kind) { return kind == TaskKind::GameOf24 ? 75 : 250; }

std::vector<TaskInstance> parse_dataset(TaskKind kind, const std::string& text,
                                        const std::string& origin) {
  std::vector<TaskInstance> out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto where = origin + ":" + std::to_string(lineno) + ": ";
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw FormatError(where + e.what());
    }
    if (!j.is_object()) throw FormatError(where + "record is not an object");
    TaskInstance inst;
    inst.kind = kind;
    inst.index = out.size();
    for (const char* name : {"input", "target"}) {
      const auto it = j.find(name);
      if (it == j.end() || (it->is_string() && it->get<std::string>().empty()))
        throw MissingField(where + "missing or empty \"" + name + "\"");
      if (!it->is_string()) throw FormatError(where + "\"" + name + "\" is not text");
    }
    inst.input = j["input"].get<std::string>();
    inst.target = j["target"].get<std::string>();
    out.push_back(std::move(inst));
  }
  return out;
}

std::vector<TaskInstance> load_dataset(const DatasetFile& file) {
  auto instances = parse_dataset(file.kind, slurp(file.path), file.path);
  if (file.expected_n && *file.expected_n != instances.size())
    throw CountMismatch(*file.expected_n, instances.size());
  return instances;
}

std::string encode_instance(const TaskInstance& instance) {
  nlohmann::ordered_json j;
  j["input"] = instance.input;
  j["target"] = instance.target;
  return j.dump(-1, ' ', false, json::error_handler_t::strict);
}

ImportResult import_directory(TaskKind kind, const std::string& directory,
                              const std::string& to_path) {
  if (!fs::is_directory(directory)) throw DatasetError("not a directory: " + directory);
  const auto key = kind_key(kind);
  std::vector<fs::path> candidates;
  for (const auto& entry : fs::recursive_directory_iterator(directory)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension().string();
    if (ext != ".json" && ext != ".jsonl" && ext != ".ndjson") continue;
    if (normalized_stem(entry.path()).find(key) != std::string::npos)
      candidates.push_back(entry.path());
  }
  std::sort(candidates.begin(), candidates.end());
  if (candidates.empty())
    throw DatasetError("no file matching \"" + std::string(to_string(kind)) + "\" in " + directory);
  if (candidates.size() > 1)
    throw DatasetError("ambiguous: " + std::to_string(candidates.size()) + " files match \"" +
                       std::string(to_string(kind)) + "\" in " + directory);

  const auto& source = candidates.front();
  std::vector<json> records;
  try {
    records = foreign_records(source);
  } catch (const json::exception& e) {
    throw FormatError(source.string() + ": " + e.what());
  }

  ImportResult result;
  result.source_path = source.string();
  result.source_digest = file_sha256(source.string());
  result.source_records = records.size();
  std::size_t keep = records.size();
  if (kind == TaskKind::GameOf24) keep = std::min(keep, reference_size(kind));

  std::ostringstream out;
  for (std::size_t i = 0; i < keep; ++i) {
    const auto& item = records[i];
    const auto where = source.string() + " record " + std::to_string(i) + ": ";
    if (!item.is_object()) throw FormatError(where + "not an object");
    const auto input = item.find("input");
    if (input == item.end() || !input->is_string() || input->get<std::string>().empty())
      throw MissingField(where + "missing input");
    TaskInstance inst{kind, i, input->get<std::string>(), {}};
    try {
      inst.target = target_of(item);
    } catch (const DatasetError& e) {
      throw DatasetError(where + e.what());
    }
    if (inst.target.empty()) throw MissingField(where + "empty target");
    out << encode_instance(inst) << '\n';
  }

  std::ofstream file(to_path, std::ios::binary | std::ios::trunc);
  if (!file) throw DatasetError("cannot write " + to_path);
  file << out.str();
  result.written = keep;
  return result;
}

}  // namespace apet::datasets
