#include "orbhil/arm_model.hpp"

#include <cmath>
#include <string>

#include "orbhil/errors.hpp"

namespace orbhil {

void ArmModel::validate() const {
  for (size_t i = 0; i < joints.size(); ++i) {
    const auto& j = joints[i];
    if (std::abs(j.axis.norm() - 1.0) > 1e-9)
      raise(ErrorCode::Validation, "arm joint " + std::to_string(i) + " axis must be unit norm");
    if (!(j.min_angle < j.max_angle))
      raise(ErrorCode::Validation, "arm joint " + std::to_string(i) + " limits must be ordered");
    if (!(j.rate_limit > 0.0))
      raise(ErrorCode::Validation, "arm joint " + std::to_string(i) + " rate limit must be > 0");
  }
  if (!(reach > 0.0)) raise(ErrorCode::Validation, "arm reach must be > 0");
}

namespace {

Pose translate(double x, double y, double z) {
  return Pose{Vec3(x, y, z), Quat::Identity()};
}

ArmModel elbow_arm(double scale) {
  // Shoulder pan / shoulder lift / elbow / three wrist joints, z-up.
  ArmModel arm;
  arm.joints[0] = {Vec3::UnitZ(), translate(0, 0, 0.0892 * scale)};
  arm.joints[1] = {Vec3::UnitY(), translate(0, 0.1359 * scale, 0)};
  arm.joints[2] = {Vec3::UnitY(), translate(0.425 * scale, -0.1197 * scale, 0)};
  arm.joints[3] = {Vec3::UnitY(), translate(0.3922 * scale, 0, 0)};
  arm.joints[4] = {Vec3::UnitZ(), translate(0, 0.093 * scale, 0)};
  arm.joints[5] = {Vec3::UnitY(), translate(0, 0, -0.0946 * scale)};
  arm.tool = translate(0, 0.0823 * scale, 0);
  for (auto& j : arm.joints) {
    j.min_angle = -2.0 * M_PI;
    j.max_angle = 2.0 * M_PI;
    j.rate_limit = 3.0;
  }
  return arm;
}

}  // namespace

ArmModel default_chaser_arm() {
  ArmModel arm = elbow_arm(1.0);
  arm.reach = 0.85;
  return arm;
}

ArmModel default_target_arm() {
  ArmModel arm = elbow_arm(1.53);
  arm.reach = 1.30;
  return arm;
}

Pose arm_forward_kinematics(const ArmModel& arm, const ArmJoints& joints) {
  Pose pose = arm.base_mount;
  for (int i = 0; i < 6; ++i) {
    pose = pose.compose(arm.joints[i].offset);
    pose = pose.compose(Pose{Vec3::Zero(), Quat(Eigen::AngleAxisd(joints[i], arm.joints[i].axis))});
  }
  return pose.compose(arm.tool);
}

Eigen::Matrix<double, 6, 6> arm_jacobian(const ArmModel& arm, const ArmJoints& joints) {
  std::array<Vec3, 6> origins;
  std::array<Vec3, 6> axes;
  Pose pose = arm.base_mount;
  for (int i = 0; i < 6; ++i) {
    pose = pose.compose(arm.joints[i].offset);
    origins[i] = pose.position;
    axes[i] = (pose.orientation * arm.joints[i].axis).normalized();
    pose = pose.compose(Pose{Vec3::Zero(), Quat(Eigen::AngleAxisd(joints[i], arm.joints[i].axis))});
  }
  const Vec3 tool = pose.compose(arm.tool).position;

  Eigen::Matrix<double, 6, 6> jac;
  for (int i = 0; i < 6; ++i) {
    jac.block<3, 1>(0, i) = axes[i].cross(tool - origins[i]);
    jac.block<3, 1>(3, i) = axes[i];
  }
  return jac;
}

ArmJoints solve_ik(const ArmModel& arm, const Pose& target, const ArmJoints& seed,
                   const IkOptions& options) {
  for (int i = 0; i < 6; ++i)
    if (seed[i] < arm.joints[i].min_angle - 1e-9 || seed[i] > arm.joints[i].max_angle + 1e-9)
      raise(ErrorCode::LimitViolation, "ik seed outside joint " + std::to_string(i) + " limits");

  // Cheap workspace rejection before iterating.
  const Vec3 shoulder = arm.base_mount.compose(arm.joints[0].offset).position;
  if ((target.position - shoulder).norm() > 1.5 * arm.reach)
    raise(ErrorCode::Unreachable, "ik target beyond arm workspace");

  ArmJoints q = seed;
  for (int it = 0; it < options.max_iterations; ++it) {
    const Pose fk = arm_forward_kinematics(arm, q);
    const Vec6 err = pose_error(target, fk);
    if (err.head<3>().norm() < options.position_tolerance &&
        err.tail<3>().norm() < options.angle_tolerance) {
      for (int i = 0; i < 6; ++i)
        if (q[i] < arm.joints[i].min_angle || q[i] > arm.joints[i].max_angle)
          raise(ErrorCode::LimitViolation,
                "ik solution outside joint " + std::to_string(i) + " limits");
      return q;
    }

    const Eigen::Matrix<double, 6, 6> jac = arm_jacobian(arm, q);
    // Damping scaled with the residual keeps steps stable far from the target
    // and lets the solve converge to machine precision near it.
    const double lambda = options.damping * (1.0 + err.norm());
    Eigen::Matrix<double, 6, 6> jjt = jac * jac.transpose();
    jjt.diagonal().array() += lambda * lambda;
    const ArmJoints dq = jac.transpose() * jjt.ldlt().solve(err);
    const double step = std::min(1.0, 0.5 / std::max(1e-9, dq.lpNorm<Eigen::Infinity>()));
    q += step * dq;
  }
  raise(ErrorCode::Unreachable, "ik did not converge within iteration budget");
}

}  // namespace orbhil
