#pragma once

#include <utility>

#include "orbhil/robot_model.hpp"

namespace orbhil {

// All inertial/kinematic blocks of the coupled base-manipulator equation at
// one state, inertial frame, base twist about the base CoM:
//
//   [H_b   H_bm] [xb_dd ]   [c_b]   [F_b  ]   [J_b^T]
//   [H_bm^T H_m] [th_dd ] + [c_m] = [tau_m] + [J_m^T] F_e
//
// with the end-effector map  xe_d = J_b xb_d + J_m th_d  and the generalized
// Jacobian  J* = J_m - J_b H_b^{-1} H_bm.
struct DynamicsTerms {
  Mat6 H_b;
  MatX H_bm;      // 6 x n
  MatX H_m;       // n x n
  Vec6 c_b;
  VecX c_m;       // n
  Mat6 J_b;
  MatX J_m;       // 6 x n
  MatX J_star;    // 6 x n

  MatX full_inertia() const;  // (6+n) x (6+n), symmetric positive definite
};

struct EndEffectorState {
  Pose pose;
  Vec6 twist = Vec6::Zero();
};

struct Accelerations {
  Vec6 base = Vec6::Zero();
  VecX joints;
  Vec3 wheels = Vec3::Zero();
};

enum class Integrator { SemiImplicit, RK4 };

DynamicsTerms compute_dynamics_terms(const SpaceRobotModel& model, const SystemState& state);

// Total system momentum (linear, angular about the base CoM). Equals
// H_b xb_d + H_bm th_d plus the wheel spin momentum in the angular part.
std::pair<Vec3, Vec3> system_momentum(const SpaceRobotModel& model, const SystemState& state);

// Base twist that makes the total momentum zero for the given joint rates
// (free-floating condition). Base twist present in `state` is ignored.
Vec6 base_velocity_from_momentum(const SpaceRobotModel& model, const SystemState& state,
                                 const VecX& joint_rates);

MatX generalized_jacobian(const SpaceRobotModel& model, const SystemState& state);

// Motor torque after the wheel limit clamps: |tau| <= max_torque, and no
// torque that would push a saturated wheel further past max_speed.
Vec3 clip_wheel_torques(const SpaceRobotModel& model, const Vec3& wheel_speeds,
                        const Vec3& commanded);

Accelerations forward_dynamics(const SpaceRobotModel& model, const SystemState& state,
                               const InputWrenches& inputs);

SystemState integrate_step(const SpaceRobotModel& model, const SystemState& state,
                           const InputWrenches& inputs, double dt,
                           Integrator scheme = Integrator::RK4);

EndEffectorState end_effector_state(const SpaceRobotModel& model, const SystemState& state);

}  // namespace orbhil
