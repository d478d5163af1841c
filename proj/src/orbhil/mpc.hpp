#pragma once

#include <vector>

#include "orbhil/dynamics.hpp"
#include "orbhil/robot_model.hpp"

namespace orbhil {

// Two-layer receding-horizon controller: layer 1 regulates base attitude
// through the reaction wheels, layer 2 drives the end-effector to the target
// trajectory through joint rates using the generalized Jacobian prediction
// xe_dot = J* th_dot.
struct MpcParams {
  int horizon = 10;
  double period = 0.1;                      // s
  Vec6 pose_weights = (Vec6() << 1, 1, 1, 0.5, 0.5, 0.5).finished();
  double rate_weight = 1e-2;                // per joint-rate component
  Vec3 attitude_weights = Vec3::Ones();     // layer-1 attitude error
  double attitude_rate_weight = 0.5;        // layer-1 body rate
  double wheel_effort_weight = 1e-2;        // layer-1 torque regularization
  double terminal_scale = 5.0;
  double rate_limit = 0.5;                  // rad/s, per joint
  double wheel_torque_limit = 1.0;          // N m, per axis
  Quat attitude_reference = Quat::Identity();
  double capture_tolerance_m = 0.005;
  double capture_tolerance_rad = 0.017453292519943295;  // 1 degree
  double qp_tolerance = 1e-8;
  int qp_max_iterations = 20000;

  void validate() const;
};

struct MpcPlan {
  MatX joint_rates;     // n x N; caller applies column 0
  MatX wheel_torques;   // 3 x N, base-frame axis demands after allocation
};

// `measured_ee` overrides the model end-effector pose in the tracking error
// (hardware-in-the-loop feedback injection); the kinematic prediction itself
// always uses the model state.
MpcPlan mpc_plan(const SpaceRobotModel& model, const SystemState& state,
                 const std::vector<Pose>& target_trajectory, const MpcParams& params,
                 const Pose* measured_ee = nullptr);

}  // namespace orbhil
