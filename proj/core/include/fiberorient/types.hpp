#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace fo {

using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;
using Vec5 = Eigen::Matrix<double, 5, 1>;
using Mat5 = Eigen::Matrix<double, 5, 5>;

// Dense 3x3x3x3 tensor, row-major in (i,j,k,l), zero-based indices.
struct Tensor4 {
  std::array<double, 81> v{};

  double& operator()(int i, int j, int k, int l) { return v[27 * i + 9 * j + 3 * k + l]; }
  double operator()(int i, int j, int k, int l) const { return v[27 * i + 9 * j + 3 * k + l]; }

  Tensor4& operator+=(const Tensor4& o) {
    for (int n = 0; n < 81; ++n) v[n] += o.v[n];
    return *this;
  }
  Tensor4& operator-=(const Tensor4& o) {
    for (int n = 0; n < 81; ++n) v[n] -= o.v[n];
    return *this;
  }
  Tensor4& operator*=(double s) {
    for (double& x : v) x *= s;
    return *this;
  }
  // this += s * o
  void axpy(double s, const Tensor4& o) {
    for (int n = 0; n < 81; ++n) v[n] += s * o.v[n];
  }
  double max_abs() const {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  }
};

inline Tensor4 operator+(Tensor4 a, const Tensor4& b) { return a += b; }
inline Tensor4 operator-(Tensor4 a, const Tensor4& b) { return a -= b; }
inline Tensor4 operator*(double s, Tensor4 a) { return a *= s; }

// Directional derivatives along the five basis tensors E_1..E_5.
template <class T>
using Grad5 = std::array<T, 5>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateEigenvalues : public Error {
 public:
  using Error::Error;
};

class Singularity : public Error {
 public:
  using Error::Error;
};

class ZeroShearRate : public Error {
 public:
  using Error::Error;
};

class UnknownKind : public Error {
 public:
  using Error::Error;
};

class NonFiniteState : public Error {
 public:
  NonFiniteState(const std::string& what, double time) : Error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

class SingularJacobian : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace fo
