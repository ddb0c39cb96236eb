#pragma once

#include <string>
#include <vector>

#include "fiberorient/models.hpp"
#include "fiberorient/tensor.hpp"

namespace fo {

struct NewtonOptions {
  double tol_residual = 1e-10;
  int max_iter = 200;
  double damping = 1.0;
  bool rank_augmentation = true;
  // Added to exactly-zero off-diagonal guess components.
  double perturb_guess = 1e-4;
  // On DegenerateEigenvalues, fall back to a central-difference Jacobian for
  // that iteration instead of propagating the error.
  bool fd_fallback = false;

  void validate() const;
};

struct SolveReport {
  OrientationState state;
  int iterations = 0;
  std::vector<double> residual_history;
  bool converged = false;
  bool physical = false;
  bool zero_flow = false;
  std::vector<std::string> warnings;

  Vec5 v() const { return state.packed(); }
  double residual() const { return residual_history.empty() ? 0.0 : residual_history.back(); }
};

SolveReport newton_steady(const ModelSpec& spec, const FlowKinematics& flow, const Vec5& guess,
                          const NewtonOptions& opts = {});

struct Rk4Options {
  double dt = 0.01;
  double t_end = 500.0;
  double steady_tol = 1e-8;
  int steady_steps = 10;   // consecutive steps below steady_tol
  int record_every = 100;  // 0 keeps only the first and last states

  void validate() const;
};

// Times are physical (1/gmag per unit strain); for unit shear rate they equal
// the strain gmag*t.
struct Trajectory {
  std::vector<double> times;
  std::vector<Vec5> states;
  bool steady_reached = false;
  double final_residual = 0.0;

  const Vec5& final_state() const { return states.back(); }
};

Trajectory rk4_transient(const ModelSpec& spec, const FlowKinematics& flow, const Vec5& a0,
                         const Rk4Options& opts = {});

// (nr - rk)/rk * 100 after rounding both to six decimals; 0 when both round to 0.
double relative_error_percent(double nr, double rk);

struct SteadyComparison {
  SolveReport newton;
  Trajectory rk4;
  Vec5 error_percent = Vec5::Zero();  // per packed component
};

SteadyComparison steady_compare(const ModelSpec& spec, const FlowKinematics& flow,
                                 const Vec5& guess, const Vec5& rk_start,
                                 const Rk4Options& rk_opts = {},
                                 const NewtonOptions& nr_opts = {});

}  // namespace fo
