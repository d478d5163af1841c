#include "orbhil/math.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>

namespace orbhil {

Mat3 skew(const Vec3& v) {
  Mat3 m;
  m << 0, -v.z(), v.y(),
       v.z(), 0, -v.x(),
       -v.y(), v.x(), 0;
  return m;
}

Quat quat_exp(const Vec3& rotvec) {
  const double angle = rotvec.norm();
  if (angle < 1e-12) {
    // Second-order series keeps the map smooth through zero.
    Quat q(1.0, 0.5 * rotvec.x(), 0.5 * rotvec.y(), 0.5 * rotvec.z());
    q.normalize();
    return q;
  }
  const Vec3 axis = rotvec / angle;
  return Quat(Eigen::AngleAxisd(angle, axis));
}

Vec3 quat_log(const Quat& q_in) {
  Quat q = q_in.normalized();
  if (q.w() < 0) q.coeffs() *= -1.0;
  const double vn = q.vec().norm();
  if (vn < 1e-12) return 2.0 * q.vec();
  const double angle = 2.0 * std::atan2(vn, q.w());
  return (angle / vn) * q.vec();
}

double quat_angle(const Quat& a, const Quat& b) {
  return quat_log(a.conjugate() * b).norm();
}

double pose_position_error(const Pose& a, const Pose& b) {
  return (a.position - b.position).norm();
}

double pose_angle_error(const Pose& a, const Pose& b) {
  return quat_angle(a.orientation, b.orientation);
}

Vec6 pose_error(const Pose& to, const Pose& from) {
  Vec6 e;
  e.head<3>() = to.position - from.position;
  e.tail<3>() = quat_log(to.orientation * from.orientation.conjugate());
  return e;
}

Quat normalized_or_identity(const Quat& q) {
  const double n = q.norm();
  if (!(n > 0.0) || !std::isfinite(n)) return Quat::Identity();
  return Quat(q.coeffs() / n);
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  auto res = std::from_chars(begin, end, out);
  return res.ec == std::errc() && res.ptr == end;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace orbhil
