#pragma once

#include <string>

#include "arsq/trainer.hpp"

namespace arsq {

std::string run_config_to_json(const RunConfig& config);
RunConfig run_config_from_json(const std::string& text);

void save_run_config(const std::string& path, const RunConfig& config);
RunConfig load_run_config(const std::string& path);

// Trained policy plus the frozen normalizer it was trained with.
struct PolicyFile {
  PolicyMatrix policy;
  FrozenNormalizer stats;
};

void save_policy(const std::string& path, const PolicyFile& file);
// Throws std::runtime_error on missing or malformed files.
PolicyFile load_policy(const std::string& path);

}  // namespace arsq
