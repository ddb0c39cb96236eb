#pragma once

#include "fiberorient/types.hpp"

namespace fo {

// Second-order orientation tensor. Symmetry and unit trace are enforced on
// construction; physicality (eigenvalues in [0,1]) is only reported.
class OrientationState {
 public:
  OrientationState() : a_(Mat3::Identity() / 3.0) {}
  explicit OrientationState(const Vec5& v);
  // Symmetrizes m and replaces a33 so the trace is exactly one.
  static OrientationState from_matrix(const Mat3& m);

  const Mat3& matrix() const { return a_; }
  Vec5 packed() const;
  bool is_physical(double tol = 1e-9) const;

 private:
  Mat3 a_;
};

// v = (a11, a12, a13, a22, a23).
Vec5 pack(const Mat3& a);
// Inverse of pack with a33 = 1 - a11 - a22.
Mat3 unpack(const Vec5& v);
// Contraction of a symmetric tensor that need not have unit trace (used for rates).
Vec5 contract(const Mat3& m);

// Trace-free derivative basis E_r, r in 1..5. Throws std::out_of_range.
Mat3 basis(int r);
// Zero-based variant used internally: E[0..4].
const std::array<Mat3, 5>& basis_tensors();

// 6x6 contracted index, 1-based: r = i if i == j, else 9 - i - j.
int contracted_index(int i, int j);

Tensor4 sym24(const Tensor4& t);
// (A:B)_ij = sum_kl A_ijkl B_kl
Mat3 ddot42(const Tensor4& a, const Mat3& b);
// (A:B)_ijkl = sum_mn A_ijmn B_mnkl
Tensor4 ddot44(const Tensor4& a, const Tensor4& b);
// (A (x) B)_ijkl = A_ij B_kl
Tensor4 dyad(const Mat3& a, const Mat3& b);
// Phi_i (x) Phi_i (x) Phi_i (x) Phi_i for a column vector.
Tensor4 quad(const Vec3& p);

bool is_fully_symmetric(const Tensor4& t, double tol);
bool is_minor_symmetric(const Tensor4& t, double tol);

struct Invariants3 {
  double I = 0.0;
  double II = 0.0;
  double III = 0.0;
  std::array<double, 5> dII{};
  std::array<double, 5> dIII{};
};

// I = trace, II = sum of pairwise eigenvalue products, III = product; the
// derivatives chain eigenvalue sensitivities.
Invariants3 invariants(const Mat3& a);

// Cofactor matrix (d det / d a).
Mat3 cofactor(const Mat3& a);

}  // namespace fo
