#include "orbhil/robot_model.hpp"

#include <cmath>
#include <string>

#include "orbhil/errors.hpp"

namespace orbhil {

namespace {

bool symmetric_positive_definite(const Mat3& m) {
  if ((m - m.transpose()).norm() > 1e-9 * (1.0 + m.norm())) return false;
  Eigen::SelfAdjointEigenSolver<Mat3> es(m);
  return es.eigenvalues().minCoeff() > 0.0;
}

}  // namespace

void SpaceRobotModel::validate() const {
  if (!(base_mass > 0.0)) raise(ErrorCode::Validation, "base_mass must be > 0");
  if (!symmetric_positive_definite(base_inertia))
    raise(ErrorCode::Validation, "base_inertia must be symmetric positive definite");
  for (size_t i = 0; i < links.size(); ++i) {
    const auto& l = links[i];
    const std::string at = "links[" + std::to_string(i) + "].";
    if (!(l.mass > 0.0)) raise(ErrorCode::Validation, at + "mass must be > 0");
    if (!symmetric_positive_definite(l.inertia))
      raise(ErrorCode::Validation, at + "inertia must be symmetric positive definite");
    if (std::abs(l.axis.norm() - 1.0) > 1e-9)
      raise(ErrorCode::Validation, at + "axis must be unit norm");
  }
  if (!reaction_wheels.empty()) {
    if (reaction_wheels.size() != 3)
      raise(ErrorCode::Validation, "reaction_wheels must have exactly 3 entries (or none)");
    for (size_t i = 0; i < 3; ++i) {
      const auto& w = reaction_wheels[i];
      const std::string at = "reaction_wheels[" + std::to_string(i) + "].";
      if (std::abs(w.axis.norm() - 1.0) > 1e-9)
        raise(ErrorCode::Validation, at + "axis must be unit norm");
      if (!(w.inertia > 0.0)) raise(ErrorCode::Validation, at + "inertia must be > 0");
      if (!(w.max_torque > 0.0)) raise(ErrorCode::Validation, at + "max_torque must be > 0");
      if (!(w.max_speed > 0.0)) raise(ErrorCode::Validation, at + "max_speed must be > 0");
    }
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b)
        if (std::abs(reaction_wheels[a].axis.dot(reaction_wheels[b].axis)) > 1e-9)
          raise(ErrorCode::Validation, "reaction wheel axes must be mutually orthogonal");
  }
}

SystemState SystemState::zero(int n) {
  SystemState s;
  s.joint_angles = VecX::Zero(n);
  s.joint_rates = VecX::Zero(n);
  return s;
}

void SystemState::validate_against(const SpaceRobotModel& model) const {
  const int n = model.num_links();
  if (joint_angles.size() != n || joint_rates.size() != n)
    raise(ErrorCode::Validation,
          "state has " + std::to_string(joint_angles.size()) + " joints, model has " +
              std::to_string(n));
  if (std::abs(base_orientation.norm() - 1.0) > 1e-9)
    raise(ErrorCode::Validation, "base_orientation quaternion must be unit norm");
}

InputWrenches InputWrenches::zero(int n) {
  InputWrenches in;
  in.joint_torques = VecX::Zero(n);
  return in;
}

void InputWrenches::validate_against(const SpaceRobotModel& model) const {
  if (joint_torques.size() != model.num_links())
    raise(ErrorCode::Validation, "joint_torques size does not match model");
  if (!base_wrench.allFinite() || !joint_torques.allFinite() || !ee_wrench.allFinite() ||
      !wheel_torques.allFinite())
    raise(ErrorCode::Validation, "input wrenches must be finite");
}

ChainKinematics chain_kinematics(const SpaceRobotModel& model, const SystemState& state) {
  state.validate_against(model);
  const int n = model.num_links();

  ChainKinematics k;
  k.base_com = state.base_position;
  k.base_rot = state.base_orientation.toRotationMatrix();
  k.joint_pos.resize(n);
  k.joint_axis.resize(n);
  k.link_rot.resize(n);
  k.link_com.resize(n);

  Pose parent{state.base_position, state.base_orientation};
  for (int i = 0; i < n; ++i) {
    const auto& link = model.links[i];
    Pose joint = parent.compose(link.mount);
    Pose frame = joint.compose(
        Pose{Vec3::Zero(), Quat(Eigen::AngleAxisd(state.joint_angles[i], link.axis))});
    k.joint_pos[i] = joint.position;
    k.joint_axis[i] = (joint.orientation * link.axis).normalized();
    k.link_rot[i] = frame.orientation.toRotationMatrix();
    k.link_com[i] = frame.apply(link.com);
    parent = frame;
  }
  k.ee_pose = parent.compose(model.end_effector);
  return k;
}

}  // namespace orbhil
