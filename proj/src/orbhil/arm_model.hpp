#pragma once

#include <array>

#include "orbhil/math.hpp"

namespace orbhil {

// Fixed-base 6-DOF arm used by the laboratory endpoint simulators. Each joint
// rotates about `axis` after the fixed `offset` transform from its parent.
struct ArmJoint {
  Vec3 axis = Vec3::UnitZ();
  Pose offset = Pose::identity();
  double min_angle = -6.283185307179586;
  double max_angle = 6.283185307179586;
  double rate_limit = 3.0;  // rad/s
};

struct ArmModel {
  std::array<ArmJoint, 6> joints;
  Pose base_mount = Pose::identity();
  Pose tool = Pose::identity();
  double reach = 1.0;  // workspace radius from the shoulder, m

  void validate() const;
};

using ArmJoints = Eigen::Matrix<double, 6, 1>;

// Generic elbow geometries echoing the UR5/UR10 class reaches.
ArmModel default_chaser_arm();   // reach 0.85 m
ArmModel default_target_arm();   // reach 1.30 m

// Tool pose in the arm base frame.
Pose arm_forward_kinematics(const ArmModel& arm, const ArmJoints& joints);

// Geometric Jacobian (linear over angular) of the tool in the base frame.
Eigen::Matrix<double, 6, 6> arm_jacobian(const ArmModel& arm, const ArmJoints& joints);

struct IkOptions {
  int max_iterations = 200;
  double position_tolerance = 1e-9;  // m
  double angle_tolerance = 1e-8;     // rad
  double damping = 1e-3;
};

// Damped least squares from `seed`. Throws Unreachable when the target cannot
// be met within tolerance, LimitViolation when the seed is outside limits.
ArmJoints solve_ik(const ArmModel& arm, const Pose& target, const ArmJoints& seed,
                   const IkOptions& options = {});

}  // namespace orbhil
