// SPDX-License-Identifier: Apache-2.0
#include "firesafe/plant.hpp"

namespace firesafe {

const char* sensor_level_name(sensor_level s) {
  return s == sensor_level::high ? "HIGH" : "LOW";
}

bool controller_powered(const plant_state& p) { return p.controller_powered(); }

sensor_level sensor_update(sensor_level prev, double level, const config& cfg) {
  if (prev == sensor_level::low)
    return level > cfg.smoke_threshold ? sensor_level::high : sensor_level::low;
  // Release strictly below the trigger point keeps the output from
  // chattering around the threshold; ratio 1 disables the band.
  return level <= cfg.smoke_threshold * cfg.hysteresis_ratio
             ? sensor_level::low
             : sensor_level::high;
}

plant_state apply_action(plant_state p, const action& a) {
  if (std::holds_alternative<de_energize_contactor>(a))
    p.contactor_energized = false;
  else if (std::holds_alternative<energize_contactor>(a))
    p.contactor_energized = true;
  else if (std::holds_alternative<siren_on>(a))
    p.siren_commanded = true;
  else if (std::holds_alternative<siren_off>(a))
    p.siren_commanded = false;
  else if (std::holds_alternative<emergency_light_on>(a))
    p.light_commanded = true;
  else if (std::holds_alternative<emergency_light_off>(a))
    p.light_commanded = false;
  return p;
}

}  // namespace firesafe
