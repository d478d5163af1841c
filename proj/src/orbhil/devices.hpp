#pragma once

#include <cstdint>
#include <deque>
#include <random>

#include "orbhil/arm_model.hpp"
#include "orbhil/regulators.hpp"

namespace orbhil {

// First-order joint servo with a command latency queue and per-joint rate
// clipping; the lab arms' tracking model.
struct ServoModel {
  double time_constant = 0.08;  // s; 0 means ideal tracking
  double latency = 0.0;         // s, commands queue for this long
  double noise_sigma = 0.0;     // additive position noise per step
  double rate_limit = 3.0;      // rad/s per joint

  void validate() const;
};

struct ServoState {
  ArmJoints joints = ArmJoints::Zero();
  ArmJoints target = ArmJoints::Zero();
  std::deque<std::pair<double, ArmJoints>> pending;  // (release time, command)
  double time = 0.0;
};

// Queues `commanded` (release after the latency), pops due commands, then
// applies the exponential lag with rate clipping. Deterministic when
// noise_sigma = 0; `rng` may be null in that case.
ServoState servo_step(const ServoState& state, const ServoModel& servo,
                      const ArmJoints& commanded, double dt, std::mt19937_64* rng);

// 7th-axis linear rail: 6 m travel, 1 m/s speed clamp, 0.1 mm reporting grid.
struct RailState {
  double position = 0.0;  // m, true position in [0, 6]
  double velocity = 0.0;  // m/s
};

inline constexpr double kRailLengthM = 6.0;
inline constexpr double kRailMaxSpeedMs = 1.0;
inline constexpr double kRailGridM = 1e-4;

RailState rail_step(const RailState& rail, double commanded_velocity, double dt);
double rail_reported_position(const RailState& rail);

// RG2-class gripper stroke and Hex-E force/torque saturation.
inline constexpr double kGripperStrokeMm = 110.0;
inline constexpr double kFtForceLimitN = 220.0;
inline constexpr double kFtTorqueLimitNm = 10.0;

struct FtReading {
  Vec3 force = Vec3::Zero();
  Vec3 torque = Vec3::Zero();
  std::uint64_t sequence = 0;
};

struct FtContactState {
  bool in_contact = false;
  Vec6 wrench = Vec6::Zero();      // raw contact wrench before saturation
  double object_width_mm = 0.0;    // jaw travel stops here when in contact
};

struct PeripheralResult {
  GripperState gripper;
  FtReading ft;
};

// Slews the gripper aperture toward its mode target at a fixed speed and
// saturates the contact wrench into an F/T reading with a fresh sequence
// number (monotonic via `last_sequence`).
PeripheralResult peripheral_step(const GripperState& gripper, const FtContactState& contact,
                                 double dt, std::uint64_t last_sequence,
                                 double jaw_speed_mm_s = 55.0);

}  // namespace orbhil
