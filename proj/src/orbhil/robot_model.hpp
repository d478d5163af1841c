#pragma once

#include <vector>

#include "orbhil/math.hpp"

namespace orbhil {

// One revolute link of the serial chain. `mount` is the fixed transform from
// the parent frame (base for the first link) to the joint frame; the joint
// rotates about `axis` (unit vector in the joint frame); `com` and `inertia`
// are expressed in the link frame that results after the joint rotation.
struct LinkModel {
  double mass = 0.0;
  Mat3 inertia = Mat3::Identity();
  Vec3 axis = Vec3::UnitZ();
  Pose mount = Pose::identity();
  Vec3 com = Vec3::Zero();
};

struct ReactionWheelModel {
  Vec3 axis = Vec3::UnitX();     // base frame, unit norm
  double inertia = 0.01;         // spin inertia, kg m^2
  double max_torque = 1.0;       // N m
  double max_speed = 600.0;      // rad/s, torque is cut beyond this
};

// Base + n-link free-floating robot. Wheel rotors are carried as part of the
// base mass/inertia (locked-rotor convention); only their spin relative to
// the base is tracked as extra state.
struct SpaceRobotModel {
  double base_mass = 1.0;
  Mat3 base_inertia = Mat3::Identity();
  std::vector<LinkModel> links;
  std::vector<ReactionWheelModel> reaction_wheels;  // 0 or 3 entries
  Pose end_effector = Pose::identity();  // on the last link (base if n = 0)

  int num_links() const { return static_cast<int>(links.size()); }

  // Throws Error(Validation) describing the first violated invariant.
  void validate() const;
};

struct SystemState {
  Vec3 base_position = Vec3::Zero();       // base CoM, inertial frame
  Quat base_orientation = Quat::Identity();
  Vec6 base_twist = Vec6::Zero();          // [v; omega], inertial frame
  VecX joint_angles;
  VecX joint_rates;
  Vec3 wheel_speeds = Vec3::Zero();        // relative to base, rad/s
  double time = 0.0;

  static SystemState zero(int n);
  void validate_against(const SpaceRobotModel& model) const;
};

struct InputWrenches {
  Vec6 base_wrench = Vec6::Zero();   // F_b at base CoM, inertial frame
  VecX joint_torques;                // tau_m
  Vec6 ee_wrench = Vec6::Zero();     // F_e at the end-effector, inertial frame
  Vec3 wheel_torques = Vec3::Zero(); // motor torque on each rotor

  static InputWrenches zero(int n);
  void validate_against(const SpaceRobotModel& model) const;
};

// World-frame chain quantities at one state, shared by the dynamics and
// kinematics routines.
struct ChainKinematics {
  Vec3 base_com;
  Mat3 base_rot;
  std::vector<Vec3> joint_pos;   // joint origin, world
  std::vector<Vec3> joint_axis;  // unit, world
  std::vector<Mat3> link_rot;
  std::vector<Vec3> link_com;
  Pose ee_pose;
};

ChainKinematics chain_kinematics(const SpaceRobotModel& model, const SystemState& state);

}  // namespace orbhil
