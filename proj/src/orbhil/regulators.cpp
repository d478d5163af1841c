#include "orbhil/regulators.hpp"

#include <algorithm>
#include <cmath>

#include "orbhil/errors.hpp"

namespace orbhil {

void PdGains::validate() const {
  if (kp.size() != kd.size()) raise(ErrorCode::Validation, "pd gains size mismatch");
  if (kp.size() > 0 && (kp.minCoeff() < 0.0 || kd.minCoeff() < 0.0))
    raise(ErrorCode::Validation, "pd gains must be >= 0");
}

VecX pd_return(const SystemState& state, const VecX& home_joint_angles, const PdGains& gains,
               double rate_limit) {
  gains.validate();
  const int n = static_cast<int>(state.joint_angles.size());
  if (home_joint_angles.size() != n || gains.kp.size() != n)
    raise(ErrorCode::Validation, "pd_return dimension mismatch");
  VecX cmd = gains.kp.cwiseProduct(home_joint_angles - state.joint_angles) -
             gains.kd.cwiseProduct(state.joint_rates);
  return cmd.cwiseMax(-rate_limit).cwiseMin(rate_limit);
}

const char* gripper_mode_name(GripperMode m) {
  switch (m) {
    case GripperMode::Open: return "open";
    case GripperMode::Closed: return "closed";
    case GripperMode::Holding: return "holding";
  }
  return "open";
}

bool parse_gripper_mode(const std::string& s, GripperMode& out) {
  if (s == "open") { out = GripperMode::Open; return true; }
  if (s == "closed") { out = GripperMode::Closed; return true; }
  if (s == "holding") { out = GripperMode::Holding; return true; }
  return false;
}

GripperState gripper_on_off(double distance_to_grasp_m, const GripperState& previous,
                            double close_threshold_m, double open_threshold_m) {
  if (!(close_threshold_m > 0.0) || !(open_threshold_m > close_threshold_m))
    raise(ErrorCode::Validation, "gripper thresholds must satisfy open > close > 0");
  GripperState next = previous;
  if (distance_to_grasp_m < close_threshold_m) {
    if (previous.mode == GripperMode::Open) next.mode = GripperMode::Closed;
  } else if (distance_to_grasp_m > open_threshold_m) {
    next.mode = GripperMode::Open;
  }
  return next;
}

void ImpedanceParams::validate() const {
  if (stiffness.minCoeff() <= 0.0 || damping.minCoeff() <= 0.0 || virtual_mass.minCoeff() <= 0.0)
    raise(ErrorCode::Validation, "impedance parameters must be > 0");
}

double ImpedanceState::energy(const ImpedanceParams& p) const {
  return 0.5 * (velocity.cwiseProduct(p.virtual_mass).dot(velocity) +
                offset.cwiseProduct(p.stiffness).dot(offset));
}

Vec6 impedance_correction(const Vec6& measured_wrench, const ImpedanceParams& params, double dt,
                          ImpedanceState& state) {
  params.validate();
  if (!(dt > 0.0)) raise(ErrorCode::InvalidArgument, "dt must be > 0");

  // Substep below the fastest virtual period so the semi-implicit update
  // stays stable and dissipative for any control-rate dt.
  double h_max = 1e-3;
  for (int i = 0; i < 6; ++i)
    h_max = std::min(h_max, 0.2 * std::sqrt(params.virtual_mass[i] / params.stiffness[i]));
  const int substeps = std::max(1, static_cast<int>(std::ceil(dt / h_max)));
  const double h = dt / substeps;

  for (int s = 0; s < substeps; ++s) {
    const Vec6 accel = (measured_wrench - params.damping.cwiseProduct(state.velocity) -
                        params.stiffness.cwiseProduct(state.offset))
                           .cwiseQuotient(params.virtual_mass);
    state.velocity += h * accel;
    state.offset += h * state.velocity;
  }
  return state.offset;
}

Vec3 allocate_reaction_wheels(const Vec3& base_torque_demand, const SpaceRobotModel& model) {
  Vec3 torques = Vec3::Zero();
  for (size_t i = 0; i < model.reaction_wheels.size() && i < 3; ++i) {
    const auto& w = model.reaction_wheels[i];
    const double projected = -w.axis.dot(base_torque_demand);
    torques[static_cast<int>(i)] = std::clamp(projected, -w.max_torque, w.max_torque);
  }
  return torques;
}

}  // namespace orbhil
