#pragma once

#include "orbhil/math.hpp"

namespace orbhil {

// Box-constrained convex QP:  min 0.5 z'Pz + q'z  s.t. lb <= z <= ub.
// Solved by accelerated projected gradient descent with adaptive restart.
// P must be symmetric positive definite (rate/torque regularization in the
// MPC costs guarantees this).
struct BoxQpOptions {
  double tolerance = 1e-8;  // infinity norm of the projected-gradient step
  int max_iterations = 20000;
};

struct BoxQpResult {
  VecX z;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

BoxQpResult solve_box_qp(const MatX& P, const VecX& q, const VecX& lb, const VecX& ub,
                         const BoxQpOptions& options = {});

}  // namespace orbhil
