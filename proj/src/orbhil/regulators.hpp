#pragma once

#include <cstdint>
#include <string>

#include "orbhil/robot_model.hpp"

namespace orbhil {

struct PdGains {
  VecX kp;
  VecX kd;

  void validate() const;
};

// Joint-rate command bringing the arm back to `home`: Kp (home - th) - Kd th_d,
// clipped to +-rate_limit per joint.
VecX pd_return(const SystemState& state, const VecX& home_joint_angles, const PdGains& gains,
               double rate_limit);

enum class GripperMode : std::uint8_t { Open, Closed, Holding };

const char* gripper_mode_name(GripperMode m);
bool parse_gripper_mode(const std::string& s, GripperMode& out);

struct GripperState {
  double aperture_mm = 110.0;  // RG2 stroke
  GripperMode mode = GripperMode::Open;
};

// On-off gripper logic with hysteresis: close below close_threshold, open
// above open_threshold, hold the previous mode in between.
GripperState gripper_on_off(double distance_to_grasp_m, const GripperState& previous,
                            double close_threshold_m, double open_threshold_m);

struct ImpedanceParams {
  Vec6 stiffness = Vec6::Constant(200.0);
  Vec6 damping = Vec6::Constant(60.0);
  Vec6 virtual_mass = Vec6::Constant(2.0);

  void validate() const;
};

struct ImpedanceState {
  Vec6 offset = Vec6::Zero();
  Vec6 velocity = Vec6::Zero();

  double energy(const ImpedanceParams& p) const;  // 1/2 (M v^2 + K x^2)
};

// One step of the virtual mass-spring-damper M x_dd + D x_d + K x = F.
// Returns the pose offset to add to the commanded end-effector pose.
Vec6 impedance_correction(const Vec6& measured_wrench, const ImpedanceParams& params, double dt,
                          ImpedanceState& state);

// Torque on each wheel rotor realizing `base_torque_demand` (base frame) as
// the reaction on the base, clipped to the per-wheel torque limit.
Vec3 allocate_reaction_wheels(const Vec3& base_torque_demand, const SpaceRobotModel& model);

}  // namespace orbhil
