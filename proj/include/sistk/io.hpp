#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sistk/types.hpp"

namespace sistk {

nlohmann::json load_json(const std::string& path);
void save_json(const std::string& path, const nlohmann::json& j);

/// One JSON value per line.
std::vector<nlohmann::json> load_jsonl(const std::string& path);
void save_jsonl(const std::string& path,
                const std::vector<nlohmann::json>& lines);

std::vector<FeatureInput> load_dataset(const std::string& path);
void save_dataset(const std::string& path,
                  const std::vector<FeatureInput>& inputs);

}  // namespace sistk
