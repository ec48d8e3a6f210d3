// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "firesafe/config.hpp"
#include "firesafe/controller.hpp"

namespace firesafe {

enum class sensor_level { low, high };
const char* sensor_level_name(sensor_level s);

/// The simulated facility outside the controller: smoke sensor with
/// hysteresis, contactor, siren, emergency light, mains and backup power.
///
/// siren and emergency light are modeled as a commanded flag (what the
/// controller drives) and an effective output: the 12 V rail feeds both, so
/// they can only burn while the controller itself is powered.
struct plant_state {
  double smoke_level = 0.0;
  sensor_level sensor_output = sensor_level::low;  // raw comparator output
  bool contactor_energized = true;
  bool mains_present = true;
  bool backup_ok = true;  // true unless a scenario scripts a backup fault
  bool siren_commanded = false;
  bool light_commanded = false;
  bool relay2_closed = false;  // second relay contact, modeled but unassigned

  bool operator==(const plant_state&) const = default;

  bool loads_powered() const { return mains_present && contactor_energized; }
  bool controller_powered() const { return mains_present || backup_ok; }
  bool siren_on() const { return siren_commanded && controller_powered(); }
  bool emergency_light_on() const {
    return light_commanded && controller_powered();
  }
};

/// True iff the controller, siren and emergency light have a supply: mains
/// or the inbuilt backup.
bool controller_powered(const plant_state& p);

/// Hysteresis comparator. low->high strictly above the threshold; high->low
/// at or below threshold * hysteresis_ratio; otherwise unchanged.
sensor_level sensor_update(sensor_level prev, double level, const config& cfg);

/// Applies one controller action to the plant. Notification and timer
/// actions leave the plant unchanged.
plant_state apply_action(plant_state p, const action& a);

}  // namespace firesafe
