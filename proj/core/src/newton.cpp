#include <cmath>
#include <cstdio>
#include <limits>

#include <Eigen/SVD>

#include "fiberorient/solvers.hpp"
#include "fiberorient/validation.hpp"

namespace fo {
namespace {

Vec5 residual(const ModelSpec& spec, const FlowKinematics& flow, const Vec5& v) {
  return contract(model_rate(spec, unpack(v), flow));
}

// Counts fallbacks; only the first reason is kept.
struct FallbackLog {
  int count = 0;
  std::string first;
};

Mat5 jacobian(const ModelSpec& spec, const FlowKinematics& flow, const Vec5& v, bool fd_fallback,
              int iter, FallbackLog& log) {
  try {
    return model_jacobian(spec, unpack(v), flow).J;
  } catch (const DegenerateEigenvalues& e) {
    if (!fd_fallback) throw;
    if (log.count++ == 0) log.first = "iteration " + std::to_string(iter) + ": " + e.what();
    return fd_jacobian([&](const Vec5& x) { return residual(spec, flow, x); }, v, FdScheme{});
  }
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

// Newton step, least squares on the system augmented with the residual-norm
// gradient row when J is rank deficient.
Vec5 newton_step(const Mat5& J, const Vec5& R, bool augment, bool& augmented) {
  Eigen::JacobiSVD<Mat5> svd(J);
  const auto& sv = svd.singularValues();
  augmented = false;
  if (sv(0) == 0.0) throw SingularJacobian("Jacobian is identically zero");
  int rank = 0;
  for (int i = 0; i < 5; ++i)
    if (sv(i) > 1e-10 * sv(0)) ++rank;
  if (rank == 5) return J.partialPivLu().solve(R);
  if (!augment) throw SingularJacobian("Jacobian has rank " + std::to_string(rank));

  const double rn = R.norm();
  Eigen::Matrix<double, 6, 5> A;
  Eigen::Matrix<double, 6, 1> b;
  A.row(0) = R.transpose() * J / rn;
  A.bottomRows<5>() = J;
  b(0) = rn;
  b.tail<5>() = R;
  Eigen::CompleteOrthogonalDecomposition<Eigen::Matrix<double, 6, 5>> cod(A);
  cod.setThreshold(1e-12);
  if (cod.rank() == 0) throw SingularJacobian("augmented Newton system is singular");
  augmented = true;
  return cod.solve(b);
}

Vec5 seeded(const Vec5& guess, double perturb) {
  Vec5 v = guess;
  for (int i : {1, 2, 4})
    if (v(i) == 0.0) v(i) = perturb;
  return v;
}

}  // namespace

void NewtonOptions::validate() const {
  if (!(tol_residual > 0.0)) throw ConfigError("Newton tolerance must be positive");
  if (max_iter < 1) throw ConfigError("Newton max_iter must be at least 1");
  if (!(damping > 0.0 && damping <= 1.0)) throw ConfigError("Newton damping must lie in (0, 1]");
}

SolveReport newton_steady(const ModelSpec& spec, const FlowKinematics& flow, const Vec5& guess,
                          const NewtonOptions& opts) {
  opts.validate();
  SolveReport rep;
  if (flow.L.isZero(0.0)) {
    rep.state = OrientationState(guess);
    rep.residual_history.push_back(0.0);
    rep.converged = true;
    rep.zero_flow = true;
    rep.physical = rep.state.is_physical();
    rep.warnings.push_back("ZeroFlow: velocity gradient is zero, guess returned unchanged");
    return rep;
  }

  Vec5 v = seeded(guess, opts.perturb_guess);
  Vec5 best = v;
  double best_norm = std::numeric_limits<double>::infinity();
  bool warned_aug = false;
  FallbackLog fallback;

  for (int it = 0;; ++it) {
    const Vec5 R = residual(spec, flow, v);
    const double rn = R.norm();
    if (!std::isfinite(rn)) {
      rep.warnings.push_back("non-finite residual at iteration " + std::to_string(it));
      break;
    }
    rep.residual_history.push_back(rn);
    rep.iterations = it;
    if (rn < best_norm) {
      best_norm = rn;
      best = v;
    }
    if (rn <= opts.tol_residual) {
      rep.converged = true;
      break;
    }
    if (it == opts.max_iter) break;

    const Mat5 J = jacobian(spec, flow, v, opts.fd_fallback, it, fallback);
    bool augmented = false;
    const Vec5 dv = newton_step(J, R, opts.rank_augmentation, augmented);
    if (augmented && !warned_aug) {
      rep.warnings.push_back("rank-deficient Jacobian: augmented least-squares steps used");
      warned_aug = true;
    }
    v -= opts.damping * dv;
  }

  if (fallback.count > 0)
    rep.warnings.push_back("central-difference Jacobian used in " +
                           std::to_string(fallback.count) + " iteration(s), first at " +
                           fallback.first);
  rep.state = OrientationState(rep.converged ? v : best);
  rep.physical = rep.state.is_physical();
  if (!rep.converged)
    rep.warnings.push_back("MaxIterationsExceeded: best iterate returned (residual " +
                           sci(best_norm) + ")");
  if (!rep.physical) rep.warnings.push_back("non-physical solution");
  return rep;
}

}  // namespace fo
