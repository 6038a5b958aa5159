#include "sistk/io.hpp"

#include <fstream>
#include <stdexcept>

namespace sistk {

namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  return out;
}

}  // namespace

nlohmann::json load_json(const std::string& path) {
  std::ifstream in = open_in(path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("invalid JSON in " + path + ": " + e.what());
  }
}

void save_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<nlohmann::json> load_jsonl(const std::string& path) {
  std::ifstream in = open_in(path);
  std::vector<nlohmann::json> lines;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      lines.push_back(nlohmann::json::parse(line));
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error("invalid JSON on line " +
                               std::to_string(lineno) + " of " + path + ": " +
                               e.what());
    }
  }
  return lines;
}

void save_jsonl(const std::string& path,
                const std::vector<nlohmann::json>& lines) {
  std::ofstream out = open_out(path);
  for (const auto& j : lines) out << j.dump() << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<FeatureInput> load_dataset(const std::string& path) {
  std::vector<FeatureInput> inputs;
  for (const auto& j : load_jsonl(path)) inputs.push_back(j.get<FeatureInput>());
  if (inputs.empty()) throw std::runtime_error("empty dataset: " + path);
  return inputs;
}

void save_dataset(const std::string& path,
                  const std::vector<FeatureInput>& inputs) {
  std::vector<nlohmann::json> lines;
  lines.reserve(inputs.size());
  for (const auto& x : inputs) lines.push_back(x);
  save_jsonl(path, lines);
}

}  // namespace sistk
