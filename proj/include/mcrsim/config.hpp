#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mcrsim/energy.hpp"
#include "mcrsim/scenario.hpp"

namespace mcrsim {

// Flat "key = value" text. '#' starts a comment. Keys carry their unit as a
// suffix (lambda_e_per_km2, p_s_dbm, buffer_omega_mb, ...); later entries win.
class ConfigDocument {
 public:
  static ConfigDocument parse(std::string_view text);
  static ConfigDocument load_file(const std::string& path);

  void set(std::string key, std::string value);
  // Accepts "key=value".
  void set_assignment(std::string_view assignment);

  const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

struct SystemModel {
  NetworkScenario network;
  ContentPlan content;
  EnergyModel energy;
  // Fields still holding a default the source model never specified.
  std::vector<std::string> assumed_defaults;
  // Unknown keys and similar non-fatal findings.
  std::vector<std::string> warnings;
};

SystemModel load_config(const ConfigDocument& doc);
SystemModel load_config(std::string_view text);

NetworkScenario load_scenario(std::string_view text);

// Re-emits every field under its SI-unit key with 17 significant digits, so
// load_config(emit_config(m)) reproduces m bit for bit.
std::string emit_config(const SystemModel& model);

// FNV-1a over the canonical emission.
std::uint64_t scenario_hash(const SystemModel& model);

bool is_known_key(std::string_view key);
std::vector<std::string> known_keys();

}  // namespace mcrsim
