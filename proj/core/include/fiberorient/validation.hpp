#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "fiberorient/flows.hpp"
#include "fiberorient/models.hpp"
#include "fiberorient/solvers.hpp"

namespace fo {

enum class FdKind { Forward, Backward, Central2, Central4, OneSided3 };

struct FdScheme {
  FdKind kind = FdKind::Central2;
  double step = 1e-6;  // relative to |v_r| when |v_r| > 2^-52, absolute otherwise
};

std::string_view to_string(FdKind k);
FdKind fd_kind_from_string(std::string_view name);

using RateFn = std::function<Vec5(const Vec5&)>;
Mat5 fd_jacobian(const RateFn& f, const Vec5& v, const FdScheme& scheme = {});
// Largest singular value of J1 - J2.
double jac_error(const Mat5& J1, const Mat5& J2);
// jac_error between model_jacobian and fd_jacobian of the contracted rate.
double jacobian_fd_error(const ModelSpec& spec, const FlowKinematics& flow, const Vec5& state,
                         const FdScheme& scheme = {});

// ---- case catalog -------------------------------------------------------

// The off-axis state used for Jacobian validation.
Vec5 reference_state();
// L11 = -2, L22 = L33 = 1, L23 = 1.
Mat3 jacobian_grid_velocity_gradient();
// Model parameters used for the Jacobian grid.
ModelSpec jacobian_grid_spec(ModelKind model, ClosureKind closure);
// Closure columns of table4 / table5 / table6; "jacobian" gives all twenty.
std::vector<ClosureKind> jacobian_table_closures(std::string_view table);

struct ComponentRef {
  std::string label;  // "a11"
  int i, j;           // zero-based
};
// a11, a22, a33, a12 in the flow frame (1 flow, 2 gradient, 3 neutral).
const std::vector<ComponentRef>& reported_components();

struct SteadyCase {
  std::string label;
  ModelSpec spec;
  FlowPreset flow;
  Vec5 guess;
  Vec5 rk_start;
  Rk4Options rk;
  NewtonOptions nr;
};

// Steady-state comparison cases of table8, table10, table13, table14,
// table15 and table17.
std::vector<SteadyCase> steady_table_cases(std::string_view table);

// Parameter sets (a), (b), (c) of the third case study.
struct MaterialSet {
  std::string label;
  double CI, CM, Omega, kappa;
  std::array<double, 5> b;
};
const std::vector<MaterialSet>& material_sets();

// ---- sweeps -------------------------------------------------------------

struct SweepOptions {
  FdScheme fd;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct SweepRow {
  std::string label;
  std::vector<double> values;
  std::string warning;
};

struct SweepResult {
  std::string table;
  std::vector<std::string> columns;  // value columns, excluding the label
  std::vector<SweepRow> rows;
  std::string config_json;           // canonical description of the grid
};

const std::vector<std::string>& sweep_table_names();
SweepResult run_sweep(std::string_view table, const SweepOptions& opts = {});
// Runs the given steady cases; columns are the errors of reported_components()
// followed by Newton iterations and the converged and physical flags.
SweepResult run_steady_cases(std::string table, const std::vector<SteadyCase>& cases,
                             unsigned threads = 0);

std::uint64_t fnv1a64(std::string_view data);
// '#' metadata lines, header, then rows; values in %.4e.
std::string to_csv(const SweepResult& r);

// Runs fn(i) for i in [0, n) on up to `threads` workers.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace fo
