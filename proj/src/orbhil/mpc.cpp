#include "orbhil/mpc.hpp"

#include <algorithm>
#include <string>

#include "orbhil/errors.hpp"
#include "orbhil/qp.hpp"
#include "orbhil/regulators.hpp"

namespace orbhil {

void MpcParams::validate() const {
  if (horizon < 1) raise(ErrorCode::Validation, "mpc horizon must be >= 1");
  if (!(period > 0.0)) raise(ErrorCode::Validation, "mpc period must be > 0");
  if (pose_weights.minCoeff() < 0.0 || rate_weight < 0.0 || attitude_weights.minCoeff() < 0.0 ||
      attitude_rate_weight < 0.0 || wheel_effort_weight < 0.0 || terminal_scale < 0.0)
    raise(ErrorCode::Validation, "mpc weights must be >= 0");
  if (!(rate_limit > 0.0))
    raise(ErrorCode::PlannerInfeasible, "joint rate limit must be > 0 (constraint: rate_limit)");
  if (!(wheel_torque_limit > 0.0))
    raise(ErrorCode::PlannerInfeasible,
          "wheel torque limit must be > 0 (constraint: wheel_torque_limit)");
}

namespace {

// Layer 2: joint rates minimizing predicted end-effector pose error along the
// target trajectory. The error evolves as e(k+1) = e(k) + g(k) - dt J* z(k).
MatX plan_joint_rates(const SpaceRobotModel& model, const SystemState& state,
                      const std::vector<Pose>& targets, const MpcParams& p,
                      const Pose* measured_ee) {
  const int n = model.num_links();
  const int N = p.horizon;
  if (n == 0) return MatX::Zero(0, N);

  const DynamicsTerms terms = compute_dynamics_terms(model, state);
  const Pose ee_model = end_effector_state(model, state).pose;
  const Pose ee = measured_ee ? *measured_ee : ee_model;

  auto target_at = [&](int k) -> const Pose& {
    return targets[std::min<size_t>(k, targets.size() - 1)];
  };

  const Vec6 e0 = pose_error(target_at(0), ee);
  std::vector<Vec6> increments(N);
  for (int k = 0; k < N; ++k) increments[k] = pose_error(target_at(k + 1), target_at(k));

  // Stacked affine error E = A + B z over steps 1..N.
  const int m = n * N;
  MatX B = MatX::Zero(6 * N, m);
  VecX A = VecX::Zero(6 * N);
  Vec6 drift = e0;
  for (int k = 1; k <= N; ++k) {
    drift += increments[k - 1];
    A.segment<6>(6 * (k - 1)) = drift;
    for (int j = 0; j < k; ++j)
      B.block(6 * (k - 1), n * j, 6, n) = -p.period * terms.J_star;
  }

  VecX w = VecX::Zero(6 * N);
  for (int k = 1; k <= N; ++k) {
    Vec6 stage = p.pose_weights;
    if (k == N) stage *= p.terminal_scale;
    w.segment<6>(6 * (k - 1)) = stage;
  }

  MatX P = B.transpose() * w.asDiagonal() * B;
  P.diagonal().array() += p.rate_weight;
  const VecX q = B.transpose() * (w.asDiagonal() * A);

  const VecX ub = VecX::Constant(m, p.rate_limit);
  BoxQpOptions opt;
  opt.tolerance = p.qp_tolerance;
  opt.max_iterations = p.qp_max_iterations;
  const BoxQpResult sol = solve_box_qp(P, q, -ub, ub, opt);

  MatX plan(n, N);
  for (int k = 0; k < N; ++k) plan.col(k) = sol.z.segment(n * k, n);
  return plan;
}

// Layer 1: base-frame torque schedule regulating attitude to the reference,
// then allocated to the orthogonal wheel set.
MatX plan_wheel_torques(const SpaceRobotModel& model, const SystemState& state,
                        const MpcParams& p) {
  const int N = p.horizon;
  if (model.reaction_wheels.empty()) return MatX::Zero(3, N);

  const Mat3 R = state.base_orientation.toRotationMatrix();
  // Attitude error and rate in the base frame; small-angle double integrator.
  const Vec3 a0 = R.transpose() *
                  quat_log(state.base_orientation * p.attitude_reference.conjugate());
  const Vec3 w0 = R.transpose() * state.base_twist.tail<3>();

  const Mat3 I_inv = model.base_inertia.inverse();
  const double dt = p.period;

  Eigen::Matrix<double, 6, 6> Ad = Eigen::Matrix<double, 6, 6>::Identity();
  Ad.block<3, 3>(0, 3) = dt * Mat3::Identity();
  Eigen::Matrix<double, 6, 3> Bd = Eigen::Matrix<double, 6, 3>::Zero();
  Bd.block<3, 3>(3, 0) = dt * I_inv;

  Vec6 x0;
  x0 << a0, w0;

  const int m = 3 * N;
  MatX Gamma = MatX::Zero(6 * N, m);
  VecX Phi = VecX::Zero(6 * N);
  MatX Apow = MatX::Identity(6, 6);
  for (int k = 1; k <= N; ++k) {
    Apow = Ad * Apow;
    Phi.segment<6>(6 * (k - 1)) = Apow * x0;
    for (int j = 0; j < k; ++j) {
      MatX Aj = MatX::Identity(6, 6);
      for (int c = 0; c < k - 1 - j; ++c) Aj = Ad * Aj;
      Gamma.block(6 * (k - 1), 3 * j, 6, 3) = Aj * Bd;
    }
  }

  VecX w = VecX::Zero(6 * N);
  for (int k = 1; k <= N; ++k) {
    Vec6 stage;
    stage << p.attitude_weights, Vec3::Constant(p.attitude_rate_weight);
    if (k == N) stage *= p.terminal_scale;
    w.segment<6>(6 * (k - 1)) = stage;
  }

  MatX P = Gamma.transpose() * w.asDiagonal() * Gamma;
  P.diagonal().array() += p.wheel_effort_weight;
  const VecX q = Gamma.transpose() * (w.asDiagonal() * Phi);

  double limit = p.wheel_torque_limit;
  for (const auto& wheel : model.reaction_wheels) limit = std::min(limit, wheel.max_torque);
  const VecX ub = VecX::Constant(m, limit);
  BoxQpOptions opt;
  opt.tolerance = p.qp_tolerance;
  opt.max_iterations = p.qp_max_iterations;
  const BoxQpResult sol = solve_box_qp(P, q, -ub, ub, opt);

  MatX plan(3, N);
  for (int k = 0; k < N; ++k) {
    // z is the planned torque ON the base; the wheel allocation reacts it.
    plan.col(k) = allocate_reaction_wheels(sol.z.segment<3>(3 * k), model);
  }
  return plan;
}

}  // namespace

MpcPlan mpc_plan(const SpaceRobotModel& model, const SystemState& state,
                 const std::vector<Pose>& target_trajectory, const MpcParams& params,
                 const Pose* measured_ee) {
  params.validate();
  state.validate_against(model);
  if (target_trajectory.size() < static_cast<size_t>(params.horizon))
    raise(ErrorCode::Validation, "target trajectory shorter than the horizon");

  MpcPlan plan;
  plan.joint_rates = plan_joint_rates(model, state, target_trajectory, params, measured_ee);
  plan.wheel_torques = plan_wheel_torques(model, state, params);
  return plan;
}

}  // namespace orbhil
