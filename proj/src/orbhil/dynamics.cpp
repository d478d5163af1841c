#include "orbhil/dynamics.hpp"

#include <cmath>
#include <string>

#include "orbhil/errors.hpp"

namespace orbhil {

namespace {

// Per-body world Jacobians of CoM velocity and angular velocity w.r.t. the
// generalized velocity u = [v_b; w_b; th_d].
struct BodyJacobians {
  MatX lin;  // 3 x (6+n)
  MatX ang;  // 3 x (6+n)
};

BodyJacobians link_jacobians(const ChainKinematics& k, int link, int n) {
  BodyJacobians j;
  j.lin = MatX::Zero(3, 6 + n);
  j.ang = MatX::Zero(3, 6 + n);
  j.lin.block<3, 3>(0, 0) = Mat3::Identity();
  j.lin.block<3, 3>(0, 3) = -skew(k.link_com[link] - k.base_com);
  j.ang.block<3, 3>(0, 3) = Mat3::Identity();
  for (int p = 0; p <= link; ++p) {
    j.lin.col(6 + p) = k.joint_axis[p].cross(k.link_com[link] - k.joint_pos[p]);
    j.ang.col(6 + p) = k.joint_axis[p];
  }
  return j;
}

// Velocities of every body CoM and joint frame, and their bias accelerations
// (the u_dot = 0 parts), used for the velocity-dependent term c.
struct ChainRates {
  std::vector<Vec3> link_vel;    // CoM linear velocity
  std::vector<Vec3> link_omega;
  std::vector<Vec3> axis_dot;
  std::vector<Vec3> joint_vel;   // velocity of the joint-origin material point
};

ChainRates chain_rates(const ChainKinematics& k, const SystemState& state) {
  const int n = static_cast<int>(k.joint_pos.size());
  const Vec3 v_b = state.base_twist.head<3>();
  const Vec3 w_b = state.base_twist.tail<3>();

  ChainRates r;
  r.link_vel.resize(n);
  r.link_omega.resize(n);
  r.axis_dot.resize(n);
  r.joint_vel.resize(n);

  Vec3 w_parent = w_b;
  for (int i = 0; i < n; ++i) {
    // The joint axis and origin ride on the parent body.
    r.axis_dot[i] = w_parent.cross(k.joint_axis[i]);
    if (i == 0) {
      r.joint_vel[i] = v_b + w_b.cross(k.joint_pos[i] - k.base_com);
    } else {
      r.joint_vel[i] = r.link_vel[i - 1] + r.link_omega[i - 1].cross(k.joint_pos[i] - k.link_com[i - 1]);
    }
    Vec3 w = w_b;
    Vec3 v = v_b + w_b.cross(k.link_com[i] - k.base_com);
    for (int p = 0; p <= i; ++p) {
      w += state.joint_rates[p] * k.joint_axis[p];
      v += state.joint_rates[p] * k.joint_axis[p].cross(k.link_com[i] - k.joint_pos[p]);
    }
    r.link_vel[i] = v;
    r.link_omega[i] = w;
    w_parent = w;
  }
  return r;
}

Vec3 wheel_momentum_world(const SpaceRobotModel& model, const SystemState& state) {
  Vec3 h = Vec3::Zero();
  const Mat3 R = state.base_orientation.toRotationMatrix();
  for (size_t i = 0; i < model.reaction_wheels.size(); ++i) {
    const auto& w = model.reaction_wheels[i];
    h += w.inertia * state.wheel_speeds[static_cast<int>(i)] * (R * w.axis);
  }
  return h;
}

struct GeneralizedDynamics {
  MatX H;   // (6+n) x (6+n)
  VecX c;   // 6+n
  Mat6 J_b;
  MatX J_m;
};

GeneralizedDynamics assemble(const SpaceRobotModel& model, const SystemState& state,
                             const ChainKinematics& k) {
  const int n = model.num_links();
  const int nv = 6 + n;
  const Vec3 w_b = state.base_twist.tail<3>();

  GeneralizedDynamics d;
  d.H = MatX::Zero(nv, nv);
  d.c = VecX::Zero(nv);

  // Base contribution.
  const Mat3 I_base_w = k.base_rot * model.base_inertia * k.base_rot.transpose();
  d.H.block<3, 3>(0, 0) = model.base_mass * Mat3::Identity();
  d.H.block<3, 3>(3, 3) = I_base_w;
  d.c.segment<3>(3) += w_b.cross(I_base_w * w_b);

  if (n > 0) {
    const ChainRates rates = chain_rates(k, state);
    const Vec3 v_b = state.base_twist.head<3>();
    for (int i = 0; i < n; ++i) {
      const auto& link = model.links[i];
      const BodyJacobians j = link_jacobians(k, i, n);
      const Mat3 I_w = k.link_rot[i] * link.inertia * k.link_rot[i].transpose();

      d.H += link.mass * j.lin.transpose() * j.lin + j.ang.transpose() * I_w * j.ang;

      // Bias accelerations with u_dot = 0.
      Vec3 a_lin = w_b.cross(rates.link_vel[i] - v_b);
      Vec3 a_ang = Vec3::Zero();
      for (int p = 0; p <= i; ++p) {
        const double qd = state.joint_rates[p];
        a_lin += qd * (rates.axis_dot[p].cross(k.link_com[i] - k.joint_pos[p]) +
                       k.joint_axis[p].cross(rates.link_vel[i] - rates.joint_vel[p]));
        a_ang += qd * rates.axis_dot[p];
      }
      const Vec3 gyro = rates.link_omega[i].cross(I_w * rates.link_omega[i]);
      d.c += link.mass * j.lin.transpose() * a_lin + j.ang.transpose() * (I_w * a_ang + gyro);
    }
  }

  // End-effector Jacobians.
  d.J_b.setIdentity();
  d.J_b.block<3, 3>(0, 3) = -skew(k.ee_pose.position - k.base_com);
  d.J_m = MatX::Zero(6, n);
  for (int p = 0; p < n; ++p) {
    d.J_m.block<3, 1>(0, p) = k.joint_axis[p].cross(k.ee_pose.position - k.joint_pos[p]);
    d.J_m.block<3, 1>(3, p) = k.joint_axis[p];
  }
  return d;
}

VecX generalized_velocity(const SystemState& state) {
  VecX u(6 + state.joint_rates.size());
  u.head<6>() = state.base_twist;
  u.tail(state.joint_rates.size()) = state.joint_rates;
  return u;
}

}  // namespace

MatX DynamicsTerms::full_inertia() const {
  const int n = static_cast<int>(H_m.rows());
  MatX H(6 + n, 6 + n);
  H.block<6, 6>(0, 0) = H_b;
  H.block(0, 6, 6, n) = H_bm;
  H.block(6, 0, n, 6) = H_bm.transpose();
  H.block(6, 6, n, n) = H_m;
  return H;
}

DynamicsTerms compute_dynamics_terms(const SpaceRobotModel& model, const SystemState& state) {
  const ChainKinematics k = chain_kinematics(model, state);
  const GeneralizedDynamics d = assemble(model, state, k);
  const int n = model.num_links();

  DynamicsTerms t;
  t.H_b = d.H.block<6, 6>(0, 0);
  t.H_bm = d.H.block(0, 6, 6, n);
  t.H_m = d.H.block(6, 6, n, n);
  t.c_b = d.c.head<6>();
  t.c_m = d.c.tail(n);
  t.J_b = d.J_b;
  t.J_m = d.J_m;
  t.J_star = d.J_m - d.J_b * t.H_b.ldlt().solve(t.H_bm);
  return t;
}

std::pair<Vec3, Vec3> system_momentum(const SpaceRobotModel& model, const SystemState& state) {
  const ChainKinematics k = chain_kinematics(model, state);
  const GeneralizedDynamics d = assemble(model, state, k);
  const VecX p = d.H * generalized_velocity(state);
  Vec3 linear = p.head<3>();
  Vec3 angular = p.segment<3>(3) + wheel_momentum_world(model, state);
  return {linear, angular};
}

Vec6 base_velocity_from_momentum(const SpaceRobotModel& model, const SystemState& state,
                                 const VecX& joint_rates) {
  if (joint_rates.size() != model.num_links())
    raise(ErrorCode::Validation, "joint_rates size does not match model");
  SystemState s = state;
  s.base_twist.setZero();
  s.joint_rates = joint_rates;
  const ChainKinematics k = chain_kinematics(model, s);
  const GeneralizedDynamics d = assemble(model, s, k);

  Vec6 coupling = d.H.block(0, 6, 6, model.num_links()) * joint_rates;
  coupling.tail<3>() += wheel_momentum_world(model, s);
  const Eigen::LDLT<Mat6> hb(d.H.block<6, 6>(0, 0));
  if (hb.info() != Eigen::Success)
    raise(ErrorCode::Internal, "H_b factorization failed (should be SPD)");
  return -hb.solve(coupling);
}

MatX generalized_jacobian(const SpaceRobotModel& model, const SystemState& state) {
  return compute_dynamics_terms(model, state).J_star;
}

Vec3 clip_wheel_torques(const SpaceRobotModel& model, const Vec3& wheel_speeds,
                        const Vec3& commanded) {
  Vec3 out = Vec3::Zero();
  for (size_t i = 0; i < model.reaction_wheels.size() && i < 3; ++i) {
    const auto& w = model.reaction_wheels[i];
    const int idx = static_cast<int>(i);
    double tau = std::clamp(commanded[idx], -w.max_torque, w.max_torque);
    if ((wheel_speeds[idx] >= w.max_speed && tau > 0.0) ||
        (wheel_speeds[idx] <= -w.max_speed && tau < 0.0))
      tau = 0.0;
    out[idx] = tau;
  }
  return out;
}

Accelerations forward_dynamics(const SpaceRobotModel& model, const SystemState& state,
                               const InputWrenches& inputs) {
  inputs.validate_against(model);
  const int n = model.num_links();
  const int nv = 6 + n;
  const ChainKinematics k = chain_kinematics(model, state);
  const GeneralizedDynamics d = assemble(model, state, k);

  VecX q_force = VecX::Zero(nv);
  q_force.head<6>() = inputs.base_wrench;
  q_force.tail(n) = inputs.joint_torques;

  // End-effector wrench through the stacked Jacobian transpose.
  MatX j_ee(6, nv);
  j_ee.block<6, 6>(0, 0) = d.J_b;
  j_ee.block(0, 6, 6, n) = d.J_m;
  q_force += j_ee.transpose() * inputs.ee_wrench;

  // Reaction wheels: the motor torque on each rotor reacts equal and opposite
  // on the base, and the spinning rotor adds its gyroscopic reaction. With
  // wheel momentum h_w this exactly cancels d/dt(R h_w) in the total angular
  // momentum, so purely internal wheel action conserves momentum.
  const Vec3 tau_w = clip_wheel_torques(model, state.wheel_speeds, inputs.wheel_torques);
  Accelerations acc;
  if (!model.reaction_wheels.empty()) {
    const Mat3 R = state.base_orientation.toRotationMatrix();
    const Vec3 w_b = state.base_twist.tail<3>();
    Vec3 reaction = Vec3::Zero();
    for (int i = 0; i < 3; ++i) {
      const auto& w = model.reaction_wheels[i];
      reaction -= tau_w[i] * (R * w.axis);
      acc.wheels[i] = tau_w[i] / w.inertia;
    }
    reaction -= w_b.cross(wheel_momentum_world(model, state));
    q_force.segment<3>(3) += reaction;
  }

  const VecX rhs = q_force - d.c;
  Eigen::LDLT<MatX> ldlt(d.H);
  if (ldlt.info() != Eigen::Success)
    raise(ErrorCode::Internal, "inertia matrix factorization failed (should be SPD)");
  const VecX u_dot = ldlt.solve(rhs);

  acc.base = u_dot.head<6>();
  acc.joints = u_dot.tail(n);
  return acc;
}

namespace {

struct Derivative {
  Vec3 dp;
  Eigen::Vector4d dq;  // quaternion coefficients (x, y, z, w) order of Eigen
  Vec6 dtwist;
  VecX dtheta;
  VecX dtheta_d;
  Vec3 dwheel;
};

Derivative evaluate(const SpaceRobotModel& model, const SystemState& s,
                    const InputWrenches& inputs) {
  Derivative d;
  d.dp = s.base_twist.head<3>();
  const Vec3 w = s.base_twist.tail<3>();
  // World-frame angular velocity: q_dot = 0.5 * [0, w] * q.
  const Quat wq(0.0, w.x(), w.y(), w.z());
  d.dq = 0.5 * (wq * s.base_orientation).coeffs();
  const Accelerations acc = forward_dynamics(model, s, inputs);
  d.dtwist = acc.base;
  d.dtheta = s.joint_rates;
  d.dtheta_d = acc.joints;
  d.dwheel = acc.wheels;
  return d;
}

SystemState advance(const SystemState& s, const Derivative& d, double h) {
  SystemState out = s;
  out.base_position += h * d.dp;
  out.base_orientation = Quat(s.base_orientation.coeffs() + h * d.dq);
  out.base_twist += h * d.dtwist;
  out.joint_angles += h * d.dtheta;
  out.joint_rates += h * d.dtheta_d;
  out.wheel_speeds += h * d.dwheel;
  return out;
}

void check_finite(const SystemState& s) {
  auto fail = [](const char* what) {
    raise(ErrorCode::IntegrationFailure, std::string("non-finite ") + what + " after step");
  };
  if (!s.base_position.allFinite()) fail("base_position");
  if (!s.base_orientation.coeffs().allFinite()) fail("base_orientation");
  if (!s.base_twist.allFinite()) fail("base_twist");
  if (!s.joint_angles.allFinite()) fail("joint_angles");
  if (!s.joint_rates.allFinite()) fail("joint_rates");
  if (!s.wheel_speeds.allFinite()) fail("wheel_speeds");
}

}  // namespace

SystemState integrate_step(const SpaceRobotModel& model, const SystemState& state,
                           const InputWrenches& inputs, double dt, Integrator scheme) {
  if (!(dt > 0.0)) raise(ErrorCode::InvalidArgument, "dt must be > 0");
  state.validate_against(model);

  SystemState next = state;
  if (scheme == Integrator::SemiImplicit) {
    const Accelerations acc = forward_dynamics(model, state, inputs);
    next.base_twist += dt * acc.base;
    next.joint_rates += dt * acc.joints;
    next.wheel_speeds += dt * acc.wheels;
    next.base_position += dt * next.base_twist.head<3>();
    next.base_orientation =
        (quat_exp(next.base_twist.tail<3>() * dt) * state.base_orientation).normalized();
    next.joint_angles += dt * next.joint_rates;
  } else {
    const Derivative k1 = evaluate(model, state, inputs);
    const Derivative k2 = evaluate(model, advance(state, k1, 0.5 * dt), inputs);
    const Derivative k3 = evaluate(model, advance(state, k2, 0.5 * dt), inputs);
    const Derivative k4 = evaluate(model, advance(state, k3, dt), inputs);

    auto blend = [&](auto k1v, auto k2v, auto k3v, auto k4v) {
      return (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    };
    next.base_position += blend(k1.dp, k2.dp, k3.dp, k4.dp);
    next.base_orientation =
        Quat(state.base_orientation.coeffs() + blend(k1.dq, k2.dq, k3.dq, k4.dq)).normalized();
    next.base_twist += blend(k1.dtwist, k2.dtwist, k3.dtwist, k4.dtwist);
    next.joint_angles += blend(k1.dtheta, k2.dtheta, k3.dtheta, k4.dtheta);
    next.joint_rates += blend(k1.dtheta_d, k2.dtheta_d, k3.dtheta_d, k4.dtheta_d);
    next.wheel_speeds += blend(k1.dwheel, k2.dwheel, k3.dwheel, k4.dwheel);
  }
  next.base_orientation.normalize();
  next.time = state.time + dt;
  check_finite(next);
  return next;
}

EndEffectorState end_effector_state(const SpaceRobotModel& model, const SystemState& state) {
  const ChainKinematics k = chain_kinematics(model, state);
  const GeneralizedDynamics d = assemble(model, state, k);
  EndEffectorState ee;
  ee.pose = k.ee_pose;
  ee.twist = d.J_b * state.base_twist;
  if (model.num_links() > 0) ee.twist += d.J_m * state.joint_rates;
  return ee;
}

}  // namespace orbhil
