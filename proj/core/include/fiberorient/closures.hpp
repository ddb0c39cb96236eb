#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fiberorient/spectral.hpp"
#include "fiberorient/types.hpp"

namespace fo {

enum class ClosureKind {
  QDR, LIN, HYB1, HYB2, ISO, SF2, HL1, HL2,
  ORS, ORT, ORW, ORW2, ORW3, NAT_MID, NAT_EXT,
  WTZ, LAR32, VST, FFLAR4, LAR4,
  IBOF
};

std::string_view to_string(ClosureKind k);
// Case-insensitive; accepts the NAT1/NAT2 aliases and '_' or '-' separators.
ClosureKind closure_from_string(std::string_view name);
const std::vector<ClosureKind>& all_closures();
// The twenty closures of the Jacobian-validation grid, in column order.
const std::vector<ClosureKind>& jacobian_grid_closures();

bool is_ebof(ClosureKind k);
bool is_hinch_leal(ClosureKind k);  // ISO, LIN, QDR, SF2, HL1, HL2
// Closures whose output satisfies A_ijkk = a_ij exactly.
bool satisfies_normalization(ClosureKind k);

struct ClosureOutput {
  Tensor4 A4;
  Grad5<Tensor4> dA4{};
  bool has_derivatives = false;
};

ClosureOutput eval_closure(ClosureKind kind, const Mat3& a, bool with_derivatives = true);

struct HybridFactor {
  double f = 0.0;
  std::array<double, 5> df{};
};
HybridFactor hybrid_factor(int variant, const Mat3& a);

// Eight-term composite family:
//   b1 d_ij d_kl + b2 (d_ik d_jl + d_il d_jk) + b3 (d_ij a_kl + a_ij d_kl)
//   + b4 (a_ik d_jl + a_jl d_ik + a_il d_jk + a_jk d_il) + b5 a_ij a_kl
//   + b6 (a_ik a_jl + a_il a_jk) + b7 (d_ij a2_kl + a2_ij d_kl) + b8 a2_ij a2_kl
struct HlBetas {
  std::array<double, 8> beta{};
  std::array<std::array<double, 5>, 8> dbeta{};
};
HlBetas hl_betas(ClosureKind kind, const Mat3& a);
ClosureOutput hl_composite(const HlBetas& b, const Mat3& a, bool with_derivatives);

struct EbofCoefficients {
  std::string name;
  int order = 0;
  bool rational = false;
  Eigen::MatrixXd num;  // 3 x (order+1)(order+2)/2, canonical term order
  Eigen::MatrixXd den;  // 3 x order(order+1)/2 for rational closures
};
const EbofCoefficients& ebof_coefficients(ClosureKind kind);

// Canonical binomial basis lambda1^(i-j) lambda2^j, k = j + i(i+1)/2, and its
// partials with respect to (lambda1, lambda2).
void binomial_terms(int order, double l1, double l2, Eigen::VectorXd& t, Eigen::VectorXd& dt1,
                    Eigen::VectorXd& dt2);

struct EbofPrincipal {
  std::array<double, 6> Abar{};
  std::array<std::array<double, 2>, 6> dAbar{};  // d/d(lambda1, lambda2)
};
EbofPrincipal ebof_principal(ClosureKind kind, double lambda1, double lambda2);

// Rotates the orthotropic principal tensor into the lab frame. When sens is
// given (with eigenvector sensitivities), fills dA4 by the product rule.
ClosureOutput ebof_reconstruct(const EbofPrincipal& p, const EigenSystem& eig,
                               const EigenSensitivities* sens);

struct IbofBetas {
  std::array<double, 6> beta{};
  std::array<std::array<double, 5>, 6> dbeta{};
};
IbofBetas ibof_betas(const Mat3& a);
// 21 x 3 table: columns are beta3, beta4, beta6.
const Eigen::Matrix<double, 21, 3>& ibof_coefficients();

}  // namespace fo
