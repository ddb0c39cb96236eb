#pragma once

#include "fiberorient/types.hpp"

namespace fo {

struct EigenSystem {
  Vec3 lambda;  // descending
  Mat3 Phi;     // column k pairs with lambda(k)
};

// Closed-form cubic roots with one Newton polish per root; eigenvectors from
// the rank-2 system, polished with the augmented normalization row. Sign
// convention: the largest-magnitude entry of each eigenvector is positive.
EigenSystem eig_desc(const Mat3& a);

enum class SensitivityMethod { DirectAugmented, Nelson };

struct Normalization {
  enum class Kind { Mass, Component, Norm };
  Kind kind = Kind::Mass;
  int m = 0;  // zero-based component index for Kind::Component

  static Normalization mass() { return {}; }
  static Normalization component(int m) { return {Kind::Component, m}; }
  static Normalization norm() { return {Kind::Norm, 0}; }
};

struct EigenSensitivities {
  EigenSystem eig;
  Eigen::Matrix<double, 3, 5> dLambda;  // dLambda(k, r)
  std::array<Mat3, 5> dPhi;              // dPhi[r].col(k)
  bool has_vectors = false;
};

constexpr double kDefaultGapTol = 1e-8;

// Eigenvalue sensitivities are always filled. Eigenvector sensitivities are
// computed when with_vectors is set and throw DegenerateEigenvalues if any
// pair of eigenvalues is closer than gap_tol.
EigenSensitivities eig_sensitivities(const Mat3& a,
                                     SensitivityMethod method = SensitivityMethod::Nelson,
                                     Normalization norm = Normalization::mass(),
                                     bool with_vectors = true,
                                     double gap_tol = kDefaultGapTol);

// Same, reusing an existing decomposition.
EigenSensitivities eig_sensitivities(const EigenSystem& eig,
                                     SensitivityMethod method = SensitivityMethod::Nelson,
                                     Normalization norm = Normalization::mass(),
                                     bool with_vectors = true,
                                     double gap_tol = kDefaultGapTol);

// Generalized pair (K - lambda M) phi = 0, derivative along a design
// perturbation (dK, dM). Returns dlambda and dphi for one eigenpair.
struct EigenpairDerivative {
  double dlambda = 0.0;
  Vec3 dphi = Vec3::Zero();
};

EigenpairDerivative eigenpair_derivative(const Mat3& K, const Mat3& M, const Mat3& dK,
                                         const Mat3& dM, double lambda, const Vec3& phi,
                                         SensitivityMethod method, Normalization norm);

// Newton iteration on the augmented system [(K - lambda M) phi; G(phi)] = 0
// with lambda held fixed. Used to polish eigenvectors.
Vec3 eigvec_newton(const Mat3& K, const Mat3& M, double lambda, Vec3 phi, Normalization norm,
                   int max_iter = 2);

}  // namespace fo
