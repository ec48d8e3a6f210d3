// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "firesafe/plant.hpp"
#include "test_util.hpp"

using namespace firesafe;

namespace {
const config kCfg = fstest::default_config();  // threshold .5, ratio .8
}

TEST_CASE("sensor trigger is strictly above the threshold") {
  CHECK(sensor_update(sensor_level::low, 0.60, kCfg) == sensor_level::high);
  CHECK(sensor_update(sensor_level::low, 0.50, kCfg) == sensor_level::low);
  CHECK(sensor_update(sensor_level::low, 0.51, kCfg) == sensor_level::high);
}

TEST_CASE("sensor release point is threshold * hysteresis_ratio") {
  CHECK(sensor_update(sensor_level::high, 0.45, kCfg) == sensor_level::high);
  CHECK(sensor_update(sensor_level::high, 0.39, kCfg) == sensor_level::low);
  CHECK(sensor_update(sensor_level::high, 0.40, kCfg) == sensor_level::low);
}

TEST_CASE("sensor sweep matches the closed-form rule") {
  for (int i = 0; i < 1000; ++i) {
    const double level = i / 999.0;
    const auto from_low = sensor_update(sensor_level::low, level, kCfg);
    CHECK(from_low == (level > kCfg.smoke_threshold ? sensor_level::high
                                                    : sensor_level::low));
    const auto from_high = sensor_update(sensor_level::high, level, kCfg);
    CHECK(from_high ==
          (level <= kCfg.smoke_threshold * kCfg.hysteresis_ratio
               ? sensor_level::low
               : sensor_level::high));
  }
}

TEST_CASE("ratio 1 disables the hysteresis band") {
  config cfg = kCfg;
  cfg.hysteresis_ratio = 1.0;
  CHECK(sensor_update(sensor_level::high, 0.50, cfg) == sensor_level::low);
  CHECK(sensor_update(sensor_level::high, 0.5001, cfg) == sensor_level::high);
}

TEST_CASE("de-energizing the contactor cuts the loads") {
  plant_state p;  // mains on, energized
  CHECK(p.loads_powered());
  p = apply_action(p, de_energize_contactor{});
  CHECK_FALSE(p.contactor_energized);
  CHECK_FALSE(p.loads_powered());
}

TEST_CASE("non-plant actions leave the plant unchanged") {
  plant_state p;
  p.contactor_energized = false;
  const plant_state q = apply_action(
      p, send_sms{recipient::owner, phone_number{"+233244000001"}, "x"});
  CHECK(q == p);
  const plant_state r = apply_action(p, start_timer{timer_kind::resend, 1});
  CHECK(r == p);
}

TEST_CASE("energizing without mains leaves loads dark") {
  plant_state p;
  p.mains_present = false;
  p.contactor_energized = false;
  p = apply_action(p, energize_contactor{});
  CHECK(p.contactor_energized);
  CHECK_FALSE(p.loads_powered());
}

TEST_CASE("controller power survives either rail") {
  plant_state p;
  p.mains_present = false;
  CHECK(controller_powered(p));  // backup ok
  p.mains_present = true;
  p.backup_ok = true;
  CHECK(controller_powered(p));
  p.mains_present = false;
  p.backup_ok = false;
  CHECK_FALSE(controller_powered(p));
}

TEST_CASE("siren and emergency light need the 12 V rail") {
  plant_state p;
  p = apply_action(p, siren_on{});
  p = apply_action(p, emergency_light_on{});
  CHECK(p.siren_on());
  CHECK(p.emergency_light_on());

  p.mains_present = false;
  CHECK(p.siren_on());  // backup carries them
  p.backup_ok = false;
  CHECK_FALSE(p.siren_on());
  CHECK_FALSE(p.emergency_light_on());
  CHECK(p.siren_commanded);  // the drive intent is retained
}

TEST_CASE("loads are never powered with the contactor open") {
  plant_state p;
  p = apply_action(p, de_energize_contactor{});
  for (const action& a : {action{siren_on{}}, action{emergency_light_on{}},
                          action{siren_off{}}, action{emergency_light_off{}}}) {
    p = apply_action(p, a);
    CHECK_FALSE(p.loads_powered());
  }
}
