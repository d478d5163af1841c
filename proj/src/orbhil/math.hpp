#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <string>

namespace orbhil {

using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using VecX = Eigen::VectorXd;
using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using MatX = Eigen::MatrixXd;
using Quat = Eigen::Quaterniond;

Mat3 skew(const Vec3& v);

// Quaternion exponential of a rotation vector (axis * angle).
Quat quat_exp(const Vec3& rotvec);

// Rotation vector of q (inverse of quat_exp), shortest representation.
Vec3 quat_log(const Quat& q);

// Angle of the rotation taking a to b, in [0, pi].
double quat_angle(const Quat& a, const Quat& b);

// Rigid transform: position of the frame origin plus frame orientation.
struct Pose {
  Vec3 position = Vec3::Zero();
  Quat orientation = Quat::Identity();

  static Pose identity() { return Pose{}; }

  Vec3 apply(const Vec3& p) const { return position + orientation * p; }
  Vec3 rotate(const Vec3& v) const { return orientation * v; }

  // this ∘ other: apply `other` in this frame.
  Pose compose(const Pose& other) const {
    return Pose{apply(other.position), (orientation * other.orientation).normalized()};
  }

  Pose inverse() const {
    Quat qi = orientation.conjugate();
    return Pose{qi * (-position), qi};
  }
};

// Position distance plus rotation angle between two poses.
double pose_position_error(const Pose& a, const Pose& b);
double pose_angle_error(const Pose& a, const Pose& b);

// 6-vector error (position difference, small-angle rotation vector) taking
// `from` to `to`, both expressed in the same frame.
Vec6 pose_error(const Pose& to, const Pose& from);

Quat normalized_or_identity(const Quat& q);

// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);
bool parse_double(const std::string& s, double& out);

// FNV-1a 64-bit, used for scenario fingerprints in log headers.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace orbhil
