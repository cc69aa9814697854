#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "polar/dataset.hpp"
#include "polar/train.hpp"

namespace polarprobe {

// Typed view over the JSON config. Every getter reports failures as
// ValidationError("<dotted.path>: <problem>").
class ConfigNode {
 public:
  ConfigNode(const nlohmann::json* node, std::string path) : node_(node), path_(std::move(path)) {}

  bool has(const std::string& key) const;
  ConfigNode child(const std::string& key) const;  // missing child -> empty node

  double number(const std::string& key, double fallback) const;
  int integer(const std::string& key, int fallback) const;
  bool boolean(const std::string& key, bool fallback) const;
  std::string string(const std::string& key, const std::string& fallback) const;
  std::optional<std::string> optional_string(const std::string& key) const;
  std::vector<double> numbers(const std::string& key) const;
  std::vector<int> integers(const std::string& key) const;
  std::vector<std::string> strings(const std::string& key) const;

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  const nlohmann::json* get(const std::string& key) const;

  const nlohmann::json* node_;
  std::string path_;
};

struct EmbedSettings {
  std::string kind = "planted";  // planted | random
  std::string mixing = "random";  // random | identity
  int d = 64;
  double noise = 0.0;
  int layer = 0;
};

struct RunConfig {
  nlohmann::json raw;
  std::uint64_t seed = 0;
  polar::DatasetSpec dataset;
  std::optional<std::string> vocabulary;
  EmbedSettings embed;
  polar::TrainConfig train;
  polar::Split eval_split = polar::Split::kTest;

  ConfigNode root() const { return {&raw, ""}; }
};

// Reads the config file (if any), applies --seed, and validates every section
// the commands share. A seed is mandatory.
RunConfig load_config(const std::optional<std::string>& path, const std::optional<std::uint64_t>& seed_override);

// Training section as stored in probe checkpoints.
nlohmann::ordered_json train_config_json(const polar::TrainConfig& c);

}  // namespace polarprobe
