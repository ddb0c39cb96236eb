#pragma once

#include <random>

#include "fiberorient/validation.hpp"

namespace fo::test {

inline std::mt19937_64& rng() {
  static std::mt19937_64 g(20240611);
  return g;
}

inline double uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline Mat3 random_rotation() {
  Eigen::Quaterniond q(uniform(-1, 1), uniform(-1, 1), uniform(-1, 1), uniform(-1, 1));
  q.normalize();
  return q.toRotationMatrix();
}

// Physical state with eigenvalues pairwise separated by at least `gap`.
inline Mat3 random_state(double gap = 0.02) {
  for (;;) {
    double x = uniform(0, 1), y = uniform(0, 1);
    if (x > y) std::swap(x, y);
    Vec3 l(x, y - x, 1.0 - y);
    std::sort(l.data(), l.data() + 3, std::greater<>());
    if (l(0) - l(1) < gap || l(1) - l(2) < gap) continue;
    const Mat3 Q = random_rotation();
    Mat3 a = Q * l.asDiagonal() * Q.transpose();
    a = 0.5 * (a + a.transpose()).eval();
    return unpack(pack(a));
  }
}

inline Mat3 random_matrix(double scale = 1.0) {
  Mat3 m;
  for (int i = 0; i < 9; ++i) m.data()[i] = uniform(-scale, scale);
  return m;
}

inline Mat3 a0() { return unpack(reference_state()); }

inline Mat3 simple_shear_L(double g = 1.0) {
  Mat3 L = Mat3::Zero();
  L(0, 1) = g;
  return L;
}

// Largest absolute entry of a 4th-order tensor difference.
inline double max_diff(const Tensor4& a, const Tensor4& b) { return (a - b).max_abs(); }

// Central difference of a tensor-valued function along basis direction r.
template <class F>
auto central(F&& f, const Mat3& a, int r, double h = 1e-6) {
  const Mat3 E = basis_tensors()[r];
  auto fp = f(Mat3(a + h * E));
  auto fm = f(Mat3(a - h * E));
  fp -= fm;
  fp *= 1.0 / (2.0 * h);
  return fp;
}

inline ModelSpec spec_of(ModelKind m, ClosureKind c, double CI = 0.01) {
  ModelSpec s;
  s.model = m;
  s.closure = c;
  s.params.CI = CI;
  return s;
}

}  // namespace fo::test
