#include "orbhil/devices.hpp"

#include <algorithm>
#include <cmath>

#include "orbhil/errors.hpp"

namespace orbhil {

void ServoModel::validate() const {
  if (time_constant < 0.0) raise(ErrorCode::Validation, "servo time constant must be >= 0");
  if (latency < 0.0) raise(ErrorCode::Validation, "servo latency must be >= 0");
  if (noise_sigma < 0.0) raise(ErrorCode::Validation, "servo noise sigma must be >= 0");
  if (!(rate_limit > 0.0)) raise(ErrorCode::Validation, "servo rate limit must be > 0");
}

ServoState servo_step(const ServoState& state, const ServoModel& servo,
                      const ArmJoints& commanded, double dt, std::mt19937_64* rng) {
  servo.validate();
  if (!(dt > 0.0)) raise(ErrorCode::InvalidArgument, "dt must be > 0");

  ServoState next = state;
  next.time = state.time + dt;
  next.pending.emplace_back(state.time + servo.latency, commanded);
  while (!next.pending.empty() && next.pending.front().first <= state.time) {
    next.target = next.pending.front().second;
    next.pending.pop_front();
  }

  // Exact ZOH discretization of the first-order lag.
  const double alpha =
      servo.time_constant > 0.0 ? 1.0 - std::exp(-dt / servo.time_constant) : 1.0;
  ArmJoints delta = alpha * (next.target - state.joints);
  const double max_step = servo.rate_limit * dt;
  delta = delta.cwiseMax(-max_step).cwiseMin(max_step);
  next.joints = state.joints + delta;

  if (servo.noise_sigma > 0.0) {
    if (rng == nullptr)
      raise(ErrorCode::InvalidArgument, "servo noise requires a seeded generator");
    std::normal_distribution<double> dist(0.0, servo.noise_sigma);
    for (int i = 0; i < 6; ++i) next.joints[i] += dist(*rng);
  }
  return next;
}

RailState rail_step(const RailState& rail, double commanded_velocity, double dt) {
  if (!(dt > 0.0)) raise(ErrorCode::InvalidArgument, "dt must be > 0");
  RailState next;
  next.velocity = std::clamp(commanded_velocity, -kRailMaxSpeedMs, kRailMaxSpeedMs);
  next.position = std::clamp(rail.position + next.velocity * dt, 0.0, kRailLengthM);
  return next;
}

double rail_reported_position(const RailState& rail) {
  return std::round(rail.position / kRailGridM) * kRailGridM;
}

PeripheralResult peripheral_step(const GripperState& gripper, const FtContactState& contact,
                                 double dt, std::uint64_t last_sequence, double jaw_speed_mm_s) {
  if (!(dt > 0.0)) raise(ErrorCode::InvalidArgument, "dt must be > 0");

  PeripheralResult out;
  out.gripper = gripper;

  double target = gripper.mode == GripperMode::Open ? kGripperStrokeMm : 0.0;
  if (gripper.mode != GripperMode::Open && contact.in_contact)
    target = std::clamp(contact.object_width_mm, 0.0, kGripperStrokeMm);

  const double max_travel = jaw_speed_mm_s * dt;
  const double delta = std::clamp(target - gripper.aperture_mm, -max_travel, max_travel);
  out.gripper.aperture_mm = std::clamp(gripper.aperture_mm + delta, 0.0, kGripperStrokeMm);

  // Jaws seated on the object: the gripper is holding.
  if (gripper.mode != GripperMode::Open) {
    if (contact.in_contact && std::abs(out.gripper.aperture_mm - target) < 1e-9)
      out.gripper.mode = GripperMode::Holding;
    else
      out.gripper.mode = GripperMode::Closed;
  }

  out.ft.force = contact.wrench.head<3>().cwiseMax(-kFtForceLimitN).cwiseMin(kFtForceLimitN);
  out.ft.torque = contact.wrench.tail<3>().cwiseMax(-kFtTorqueLimitNm).cwiseMin(kFtTorqueLimitNm);
  out.ft.sequence = last_sequence + 1;
  return out;
}

}  // namespace orbhil
