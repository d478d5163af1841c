#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include "orbhil/arm_model.hpp"
#include "orbhil/devices.hpp"
#include "orbhil/protocol.hpp"

namespace orbhil {

struct ArmEndpointConfig {
  ArmModel arm;
  ServoModel servo;
  double tick_period = 0.1;     // s per simulation step
  std::uint64_t seed = 0;
  bool rail_enabled = false;
  double rail_initial = 0.0;    // m
  double object_width_mm = 0.0; // 0 disables the grasp contact model
  double grip_force_n = 5.0;    // synthetic squeeze force while holding
  ArmJoints initial_joints = ArmJoints::Zero();
};

struct ArmFeedback {
  std::uint64_t sequence = 0;   // increments once per simulation step
  std::uint64_t command_sequence = 0;  // last MOVE/SERVOJ applied
  double time = 0.0;
  Pose tool_pose;               // arm base frame
  ArmJoints joints = ArmJoints::Zero();
  double gripper_aperture_mm = kGripperStrokeMm;
  GripperMode gripper_mode = GripperMode::Open;
  double rail_position = 0.0;   // reported (quantized) position
};

// Deterministic single-threaded simulation of one laboratory endpoint: 6-DOF
// arm servo, gripper, F/T sensor, optional 7th-axis rail. The wire server and
// the in-process loopback both drive this object.
class ArmEndpointSim {
 public:
  explicit ArmEndpointSim(const ArmEndpointConfig& config);

  // Cartesian command; runs IK from the current joints. Throws Unreachable.
  void command_move(const Pose& target, std::uint64_t seq, std::optional<double> rail_velocity);
  void command_joints(const ArmJoints& target, std::uint64_t seq);
  void command_grip(GripperMode mode);

  void step(double dt);
  void step() { step(config_.tick_period); }

  ArmFeedback feedback() const;
  FtReading ft_reading() const { return ft_; }
  const ArmEndpointConfig& config() const { return config_; }

 private:
  ArmEndpointConfig config_;
  ServoState servo_;
  ArmJoints commanded_joints_ = ArmJoints::Zero();
  bool has_command_ = false;
  RailState rail_;
  double rail_velocity_cmd_ = 0.0;
  GripperState gripper_;
  FtReading ft_;
  std::uint64_t sequence_ = 0;
  std::uint64_t command_sequence_ = 0;
  std::mt19937_64 rng_;
};

}  // namespace orbhil
