#include "orbhil/arm_endpoint.hpp"

#include "orbhil/errors.hpp"

namespace orbhil {

ArmEndpointSim::ArmEndpointSim(const ArmEndpointConfig& config)
    : config_(config), rng_(config.seed) {
  config_.arm.validate();
  config_.servo.validate();
  servo_.joints = config_.initial_joints;
  servo_.target = config_.initial_joints;
  commanded_joints_ = config_.initial_joints;
  rail_.position = config_.rail_initial;
}

void ArmEndpointSim::command_move(const Pose& target, std::uint64_t seq,
                                  std::optional<double> rail_velocity) {
  commanded_joints_ = solve_ik(config_.arm, target, servo_.joints);
  has_command_ = true;
  command_sequence_ = seq;
  if (rail_velocity) rail_velocity_cmd_ = *rail_velocity;
}

void ArmEndpointSim::command_joints(const ArmJoints& target, std::uint64_t seq) {
  for (int i = 0; i < 6; ++i)
    if (target[i] < config_.arm.joints[i].min_angle || target[i] > config_.arm.joints[i].max_angle)
      raise(ErrorCode::LimitViolation, "joint target outside limits");
  commanded_joints_ = target;
  has_command_ = true;
  command_sequence_ = seq;
}

void ArmEndpointSim::command_grip(GripperMode mode) {
  gripper_.mode = mode;
}

void ArmEndpointSim::step(double dt) {
  servo_ = servo_step(servo_, config_.servo, commanded_joints_, dt,
                      config_.servo.noise_sigma > 0.0 ? &rng_ : nullptr);
  if (config_.rail_enabled) rail_ = rail_step(rail_, rail_velocity_cmd_, dt);

  // The grasp object sits between the jaws whenever the gripper is closing;
  // the squeeze wrench appears once the jaws seat on it.
  FtContactState contact;
  if (config_.object_width_mm > 0.0 && gripper_.mode != GripperMode::Open) {
    contact.in_contact = true;
    contact.object_width_mm = config_.object_width_mm;
    if (gripper_.aperture_mm <= config_.object_width_mm + 1e-6)
      contact.wrench.head<3>() = Vec3(0, 0, config_.grip_force_n);
  }
  const PeripheralResult p = peripheral_step(gripper_, contact, dt, ft_.sequence);
  gripper_ = p.gripper;
  ft_ = p.ft;
  ++sequence_;
}

ArmFeedback ArmEndpointSim::feedback() const {
  ArmFeedback fb;
  fb.sequence = sequence_;
  fb.command_sequence = command_sequence_;
  fb.time = servo_.time;
  fb.tool_pose = arm_forward_kinematics(config_.arm, servo_.joints);
  fb.joints = servo_.joints;
  fb.gripper_aperture_mm = gripper_.aperture_mm;
  fb.gripper_mode = gripper_.mode;
  fb.rail_position = rail_reported_position(rail_);
  return fb;
}

}  // namespace orbhil
