#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fiberorient/closures.hpp"
#include "fiberorient/types.hpp"

namespace fo {

struct FlowKinematics {
  Mat3 L = Mat3::Zero();
  Mat3 gammadot = Mat3::Zero();  // symmetric part
  Mat3 omega = Mat3::Zero();     // antisymmetric part, (L - L^T)/2
  double gmag = 0.0;             // sqrt(2 gammadot_ij gammadot_ji)
};

FlowKinematics decompose(const Mat3& L);

enum class Regime { Dilute, SemiConcentrated, Concentrated };
Regime regime(double phi_f, double r_e);
std::string_view to_string(Regime r);

struct JefferyResult {
  Vec3 pdot;
  Eigen::Matrix2d J;        // in the tangent chart (t1, t2)
  Eigen::Matrix<double, 3, 2> tangent;
};
JefferyResult jeffery_p(const Vec3& p, const FlowKinematics& flow, double xi);
// Deterministic orthonormal tangent pair at unit p.
Eigen::Matrix<double, 3, 2> tangent_basis(const Vec3& p);

enum class ModelKind {
  FT, SRF, RSC, PT, MRD, iARD, pARD, WPT, Dz, NEM,
  pARD_RSC, ARD_RSC, iARD_RPR, pARD_RPR, FT_RPR
};

std::string_view to_string(ModelKind k);
// Case-insensitive; "iARD-RSC" is accepted for ARD-RSC.
ModelKind model_from_string(std::string_view name);
const std::vector<ModelKind>& all_models();
// The nine models of the Jacobian-validation grid, in row order.
const std::vector<ModelKind>& jacobian_grid_models();

// iARD diffusion built from the strain-rate tensor, C_I (I - 4 C_M D.D / gmag^2), or
// from the raw velocity gradient, C_I (I - C_M L.L^T / L:L).
enum class IardForm { StrainRate, VelocityGradient };

double shape_factor(double aspect_ratio);

struct ModelParams {
  double CI = 0.01;
  double kappa = 1.0;
  double xi = shape_factor(1000.0);
  int alpha_dim = 3;
  std::array<double, 5> b{};           // PT
  double CM = 0.0;                     // iARD
  Vec3 D = Vec3(1.0, 0.7946, 0.012);   // pARD / MRD principal diffusivities
  double w = 0.0;                      // WPT
  double Dz = 1.0;                     // Dz
  Vec3 n = Vec3::UnitZ();              // Dz thickness direction
  double U0 = 0.0;                     // NEM
  double alpha = 0.0, beta = 0.0;      // RPR
  IardForm iard_form = IardForm::StrainRate;

  // pARD parameterization D = (1, Omega, 1 - Omega).
  void set_omega(double omega) { D = Vec3(1.0, omega, 1.0 - omega); }
};

struct ModelSpec {
  ModelKind model = ModelKind::FT;
  ModelParams params;
  ClosureKind closure = ClosureKind::IBOF;

  // Throws ConfigError on invalid parameters.
  void validate() const;
  // Non-fatal remarks (e.g. NEM stability bound).
  std::vector<std::string> warnings() const;
};

std::string to_json(const ModelSpec& spec);
// Accepts the keys model, closure, CI, kappa, xi, re, alpha_dim, b, CM, Omega,
// D, w, Dz, n, U0, alpha, beta, iard_form. Unknown keys raise ConfigError.
ModelSpec model_spec_from_json(std::string_view text);

enum class DiffusionKind { PT, iARD, pARD, WPT, Dz, MRD_D };

struct DiffusionTensor {
  Mat3 C = Mat3::Zero();
  std::array<Mat3, 5> dC{};
};
DiffusionTensor spatial_diffusion(DiffusionKind kind, const Mat3& a, const FlowKinematics& flow,
                                  const ModelParams& params, bool with_derivatives = true);

Mat3 model_rate(const ModelSpec& spec, const Mat3& a, const FlowKinematics& flow);

struct RateAndJacobian {
  Vec5 R = Vec5::Zero();
  Mat5 J = Mat5::Zero();
  Mat3 rate = Mat3::Zero();
};
RateAndJacobian model_jacobian(const ModelSpec& spec, const Mat3& a, const FlowKinematics& flow);

struct RscTensors {
  Tensor4 L4, M4;
  Grad5<Tensor4> dL4{}, dM4{};
  bool has_derivatives = false;
};
RscTensors rsc_tensors(const Mat3& a, bool with_derivatives = true);

struct RprCorrection {
  Mat3 corr = Mat3::Zero();
  std::array<Mat3, 5> dCorr{};
};
RprCorrection rpr_correction(const Mat3& rateX, const std::array<Mat3, 5>* dRateX, const Mat3& a,
                             double alpha, double beta);

}  // namespace fo
