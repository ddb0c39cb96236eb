#include "fiberorient/tensor.hpp"

#include <algorithm>
#include <numeric>

#include "fiberorient/spectral.hpp"

namespace fo {

OrientationState::OrientationState(const Vec5& v) : a_(unpack(v)) {}

OrientationState OrientationState::from_matrix(const Mat3& m) {
  Mat3 s = 0.5 * (m + m.transpose());
  s(2, 2) = 1.0 - s(0, 0) - s(1, 1);
  return OrientationState(pack(s));
}

Vec5 OrientationState::packed() const { return pack(a_); }

bool OrientationState::is_physical(double tol) const {
  const Vec3 lam = eig_desc(a_).lambda;
  return lam(2) >= -tol && lam(0) <= 1.0 + tol;
}

Vec5 pack(const Mat3& a) {
  Vec5 v;
  v << a(0, 0), a(0, 1), a(0, 2), a(1, 1), a(1, 2);
  return v;
}

Vec5 contract(const Mat3& m) { return pack(m); }

Mat3 unpack(const Vec5& v) {
  Mat3 a;
  a << v(0), v(1), v(2),
       v(1), v(3), v(4),
       v(2), v(4), 1.0 - v(0) - v(3);
  return a;
}

const std::array<Mat3, 5>& basis_tensors() {
  static const std::array<Mat3, 5> e = [] {
    std::array<Mat3, 5> b;
    for (auto& m : b) m.setZero();
    b[0](0, 0) = 1.0;
    b[0](2, 2) = -1.0;
    b[1](0, 1) = b[1](1, 0) = 1.0;
    b[2](0, 2) = b[2](2, 0) = 1.0;
    b[3](1, 1) = 1.0;
    b[3](2, 2) = -1.0;
    b[4](1, 2) = b[4](2, 1) = 1.0;
    return b;
  }();
  return e;
}

Mat3 basis(int r) {
  if (r < 1 || r > 5) throw std::out_of_range("basis index must be in 1..5");
  return basis_tensors()[r - 1];
}

int contracted_index(int i, int j) {
  if (i < 1 || i > 3 || j < 1 || j > 3) throw std::out_of_range("index must be in 1..3");
  return i == j ? i : 9 - i - j;
}

Tensor4 sym24(const Tensor4& t) {
  Tensor4 s;
  std::array<int, 4> p{0, 1, 2, 3};
  std::array<int, 4> idx{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          idx = {i, j, k, l};
          p = {0, 1, 2, 3};
          double sum = 0.0;
          do {
            sum += t(idx[p[0]], idx[p[1]], idx[p[2]], idx[p[3]]);
          } while (std::next_permutation(p.begin(), p.end()));
          s(i, j, k, l) = sum / 24.0;
        }
  return s;
}

Mat3 ddot42(const Tensor4& a, const Mat3& b) {
  Mat3 r = Mat3::Zero();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) s += a(i, j, k, l) * b(k, l);
      r(i, j) = s;
    }
  return r;
}

Tensor4 ddot44(const Tensor4& a, const Tensor4& b) {
  Tensor4 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          double s = 0.0;
          for (int m = 0; m < 3; ++m)
            for (int n = 0; n < 3; ++n) s += a(i, j, m, n) * b(m, n, k, l);
          r(i, j, k, l) = s;
        }
  return r;
}

Tensor4 dyad(const Mat3& a, const Mat3& b) {
  Tensor4 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) r(i, j, k, l) = a(i, j) * b(k, l);
  return r;
}

Tensor4 quad(const Vec3& p) {
  Tensor4 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) r(i, j, k, l) = p(i) * p(j) * p(k) * p(l);
  return r;
}

bool is_fully_symmetric(const Tensor4& t, double tol) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          std::array<int, 4> idx{i, j, k, l};
          std::array<int, 4> p{0, 1, 2, 3};
          const double ref = t(i, j, k, l);
          do {
            if (std::abs(t(idx[p[0]], idx[p[1]], idx[p[2]], idx[p[3]]) - ref) > tol) return false;
          } while (std::next_permutation(p.begin(), p.end()));
        }
  return true;
}

bool is_minor_symmetric(const Tensor4& t, double tol) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          const double ref = t(i, j, k, l);
          if (std::abs(t(j, i, k, l) - ref) > tol || std::abs(t(i, j, l, k) - ref) > tol)
            return false;
        }
  return true;
}

Mat3 cofactor(const Mat3& a) {
  Mat3 c;
  c(0, 0) = a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1);
  c(0, 1) = a(1, 2) * a(2, 0) - a(1, 0) * a(2, 2);
  c(0, 2) = a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0);
  c(1, 0) = a(0, 2) * a(2, 1) - a(0, 1) * a(2, 2);
  c(1, 1) = a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0);
  c(1, 2) = a(0, 1) * a(2, 0) - a(0, 0) * a(2, 1);
  c(2, 0) = a(0, 1) * a(1, 2) - a(0, 2) * a(1, 1);
  c(2, 1) = a(0, 2) * a(1, 0) - a(0, 0) * a(1, 2);
  c(2, 2) = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  return c;
}

Invariants3 invariants(const Mat3& a) {
  const EigenSensitivities s = eig_sensitivities(a, SensitivityMethod::Nelson,
                                                 Normalization::mass(), false);
  const Vec3& l = s.eig.lambda;
  Invariants3 out;
  out.I = l.sum();
  out.II = l(0) * l(1) + l(1) * l(2) + l(2) * l(0);
  out.III = l(0) * l(1) * l(2);
  for (int r = 0; r < 5; ++r) {
    const auto d = s.dLambda.col(r);
    out.dII[r] = (l(1) + l(2)) * d(0) + (l(0) + l(2)) * d(1) + (l(0) + l(1)) * d(2);
    out.dIII[r] = l(1) * l(2) * d(0) + l(0) * l(2) * d(1) + l(0) * l(1) * d(2);
  }
  return out;
}

}  // namespace fo
