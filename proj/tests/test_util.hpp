// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "firesafe/config.hpp"

namespace fstest {

/// The spec defaults bound to the bundled owner / fire-service numbers.
inline firesafe::config default_config() {
  firesafe::config cfg;
  cfg.site_name = "Market Circle Warehouse";
  cfg.location = "Market Circle, Takoradi";
  cfg.owner = firesafe::validate_phone("+233244000001");
  cfg.fire_service = firesafe::validate_phone("+233302000001");
  return cfg;
}

inline firesafe::config config_without_debounce() {
  firesafe::config cfg = default_config();
  cfg.timing.debounce = 0;
  return cfg;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string data_path(const std::string& rel) {
  return std::string(FIRESAFE_DATA_DIR) + "/" + rel;
}

}  // namespace fstest
