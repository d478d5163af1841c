#include "orbhil/qp.hpp"

#include <cmath>

#include "orbhil/errors.hpp"

namespace orbhil {

namespace {

VecX clamp(const VecX& z, const VecX& lb, const VecX& ub) {
  return z.cwiseMax(lb).cwiseMin(ub);
}

// Largest eigenvalue upper bound via a few power iterations; a slight
// overestimate only shortens the step, never breaks convergence.
double lipschitz_bound(const MatX& P) {
  const int m = static_cast<int>(P.rows());
  VecX v = VecX::Ones(m).normalized();
  double lambda = 1.0;
  for (int it = 0; it < 30; ++it) {
    VecX w = P * v;
    const double norm = w.norm();
    if (norm < 1e-300) return 1.0;
    lambda = norm;
    v = w / norm;
  }
  return lambda * 1.1;
}

}  // namespace

BoxQpResult solve_box_qp(const MatX& P, const VecX& q, const VecX& lb, const VecX& ub,
                         const BoxQpOptions& options) {
  const int m = static_cast<int>(P.rows());
  if (P.cols() != m || q.size() != m || lb.size() != m || ub.size() != m)
    raise(ErrorCode::InvalidArgument, "box QP dimension mismatch");
  if ((ub - lb).minCoeff() < 0.0)
    raise(ErrorCode::InvalidArgument, "box QP bounds are inverted");

  const double L = lipschitz_bound(P);
  const double step = 1.0 / L;

  BoxQpResult res;
  VecX x = clamp(VecX::Zero(m), lb, ub);
  VecX y = x;
  double t = 1.0;
  double prev_obj = 0.5 * x.dot(P * x) + q.dot(x);

  for (int it = 0; it < options.max_iterations; ++it) {
    const VecX grad_y = P * y + q;
    VecX x_next = clamp(y - step * grad_y, lb, ub);

    // Convergence measured at x_next itself.
    const VecX grad_x = P * x_next + q;
    const VecX fixed_point = clamp(x_next - step * grad_x, lb, ub);
    res.residual = (x_next - fixed_point).lpNorm<Eigen::Infinity>();
    if (res.residual < options.tolerance) {
      res.z = x_next;
      res.iterations = it + 1;
      res.converged = true;
      return res;
    }

    const double obj = 0.5 * x_next.dot(P * x_next) + q.dot(x_next);
    if (obj > prev_obj) {
      // Adaptive restart keeps FISTA monotone on hard constraint activations.
      y = x_next;
      t = 1.0;
    } else {
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      y = x_next + ((t - 1.0) / t_next) * (x_next - x);
      t = t_next;
    }
    prev_obj = obj;
    x = x_next;
  }

  res.z = x;
  res.iterations = options.max_iterations;
  res.converged = false;
  return res;
}

}  // namespace orbhil
