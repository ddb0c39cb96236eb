#include "fiberorient/spectral.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "fiberorient/tensor.hpp"

namespace fo {
namespace {

int argmax_abs(const Vec3& v) {
  int k = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(v(i)) > std::abs(v(k)) + 1e-14) k = i;
  return k;
}

void fix_sign(Vec3& v) {
  if (v(argmax_abs(v)) < 0.0) v = -v;
}

// Unit null vector of a rank-2 symmetric matrix from the best-conditioned
// cross product of its rows.
bool null_vector(const Mat3& m, Vec3& out) {
  const Vec3 r0 = m.row(0), r1 = m.row(1), r2 = m.row(2);
  const Vec3 c[3] = {r0.cross(r1), r0.cross(r2), r1.cross(r2)};
  int best = 0;
  for (int i = 1; i < 3; ++i)
    if (c[i].squaredNorm() > c[best].squaredNorm()) best = i;
  const double n = c[best].norm();
  if (!(n > 0.0)) return false;
  out = c[best] / n;
  return true;
}

// Eigenvector for lambda restricted to the plane orthogonal to u.
Vec3 vector_in_complement(const Mat3& s, const Vec3& u, double lambda) {
  Vec3 U;
  if (std::abs(u(0)) > std::abs(u(1)))
    U = Vec3(-u(2), 0.0, u(0)) / std::hypot(u(0), u(2));
  else
    U = Vec3(0.0, u(2), -u(1)) / std::hypot(u(1), u(2));
  const Vec3 V = u.cross(U);
  const double m00 = U.dot(s * U) - lambda;
  const double m01 = U.dot(s * V);
  const double m11 = V.dot(s * V) - lambda;
  double x = 1.0, y = 0.0;
  const double n0 = std::hypot(m00, m01), n1 = std::hypot(m01, m11);
  if (n0 >= n1 && n0 > 0.0) {
    x = m01;
    y = -m00;
  } else if (n1 > 0.0) {
    x = m11;
    y = -m01;
  }
  const Vec3 v = x * U + y * V;
  return v.normalized();
}

void polish_root(double& l, double c2, double c1, double c0) {
  // det(s - l I) = -l^3 + c2 l^2 - c1 l + c0
  const double f = ((-l + c2) * l - c1) * l + c0;
  const double df = (-3.0 * l + 2.0 * c2) * l - c1;
  if (std::abs(df) > 1e-8) {
    const double step = f / df;
    if (std::abs(step) < 1e-6) l -= step;
  }
}

}  // namespace

EigenSystem eig_desc(const Mat3& a_in) {
  EigenSystem out;
  const Mat3 a = 0.5 * (a_in + a_in.transpose());
  const double scale = a.cwiseAbs().maxCoeff();
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    out.lambda = a.diagonal();
    out.Phi = Mat3::Identity();
    return out;
  }
  const Mat3 s = a / scale;
  const double p1 = s(0, 1) * s(0, 1) + s(0, 2) * s(0, 2) + s(1, 2) * s(1, 2);
  const double q = s.trace() / 3.0;
  const double p2 = (s(0, 0) - q) * (s(0, 0) - q) + (s(1, 1) - q) * (s(1, 1) - q) +
                    (s(2, 2) - q) * (s(2, 2) - q) + 2.0 * p1;
  if (p2 == 0.0) {
    out.lambda = Vec3::Constant(q * scale);
    out.Phi = Mat3::Identity();
    return out;
  }
  const double p = std::sqrt(p2 / 6.0);
  const Mat3 B = (s - q * Mat3::Identity()) / p;
  const double r = std::clamp(B.determinant() / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  double l0 = q + 2.0 * p * std::cos(phi);
  double l2 = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
  double l1 = 3.0 * q - l0 - l2;

  const double c2 = s.trace();
  const double c1 = s(0, 0) * s(1, 1) + s(0, 0) * s(2, 2) + s(1, 1) * s(2, 2) -
                    s(0, 1) * s(0, 1) - s(0, 2) * s(0, 2) - s(1, 2) * s(1, 2);
  const double c0 = s.determinant();
  polish_root(l0, c2, c1, c0);
  polish_root(l1, c2, c1, c0);
  polish_root(l2, c2, c1, c0);
  if (l1 > l0) std::swap(l0, l1);
  if (l2 > l1) std::swap(l1, l2);
  if (l1 > l0) std::swap(l0, l1);

  Vec3 v0, v1, v2;
  const Mat3 I = Mat3::Identity();
  bool ok;
  if (l0 - l1 >= l1 - l2) {
    ok = null_vector(s - l0 * I, v0);
    if (!ok) v0 = Vec3::UnitX();
    v1 = vector_in_complement(s, v0, l1);
    v2 = v0.cross(v1);
  } else {
    ok = null_vector(s - l2 * I, v2);
    if (!ok) v2 = Vec3::UnitZ();
    v1 = vector_in_complement(s, v2, l1);
    v0 = v1.cross(v2);
  }

  // Augmented-row Newton polish for well separated roots.
  const double tol = 1e-6;
  if (l0 - l1 > tol && l1 - l2 > tol) {
    v0 = eigvec_newton(s, I, l0, v0, Normalization::mass(), 1);
    v1 = eigvec_newton(s, I, l1, v1, Normalization::mass(), 1);
    v0.normalize();
    v1 = (v1 - v0.dot(v1) * v0).normalized();
    v2 = v0.cross(v1);
  }

  // Rayleigh quotients recover full precision where the cubic formula loses
  // half the digits (double roots).
  Vec3 rq(v0.dot(s * v0), v1.dot(s * v1), v2.dot(s * v2));
  if (rq(1) > rq(0)) { std::swap(rq(0), rq(1)); std::swap(v0, v1); }
  if (rq(2) > rq(1)) { std::swap(rq(1), rq(2)); std::swap(v1, v2); }
  if (rq(1) > rq(0)) { std::swap(rq(0), rq(1)); std::swap(v0, v1); }
  l0 = rq(0);
  l1 = rq(1);
  l2 = rq(2);

  fix_sign(v0);
  fix_sign(v1);
  fix_sign(v2);
  out.lambda = Vec3(l0, l1, l2) * scale;
  out.Phi.col(0) = v0;
  out.Phi.col(1) = v1;
  out.Phi.col(2) = v2;
  return out;
}

Vec3 eigvec_newton(const Mat3& K, const Mat3& M, double lambda, Vec3 phi, Normalization norm,
                   int max_iter) {
  const int n = norm.kind == Normalization::Kind::Component ? norm.m : argmax_abs(phi);
  for (int it = 0; it < max_iter; ++it) {
    const Mat3 S = K - lambda * M;
    Vec3 r = S * phi;
    Mat3 J = S;
    switch (norm.kind) {
      case Normalization::Kind::Mass:
        J.row(n) = 2.0 * (M * phi).transpose();
        r(n) = phi.dot(M * phi) - 1.0;
        break;
      case Normalization::Kind::Component:
        J.row(n) = Vec3::Unit(n).transpose();
        r(n) = 0.0;
        break;
      case Normalization::Kind::Norm:
        J.row(n) = phi.transpose() / phi.norm();
        r(n) = phi.norm() - 1.0;
        break;
    }
    const Eigen::FullPivLU<Mat3> lu(J);
    if (!lu.isInvertible()) break;
    phi -= lu.solve(r);
  }
  return phi;
}

EigenpairDerivative eigenpair_derivative(const Mat3& K, const Mat3& M, const Mat3& dK,
                                         const Mat3& dM, double lambda, const Vec3& phi,
                                         SensitivityMethod method, Normalization norm) {
  EigenpairDerivative out;
  const double mass = phi.dot(M * phi);
  out.dlambda = phi.dot((dK - lambda * dM) * phi) / mass;
  const Mat3 S = K - lambda * M;
  const Vec3 F = -(dK - out.dlambda * M - lambda * dM) * phi;
  const int n = norm.kind == Normalization::Kind::Component ? norm.m : argmax_abs(M * phi);

  if (method == SensitivityMethod::DirectAugmented) {
    Mat3 A = S;
    Vec3 b = F;
    switch (norm.kind) {
      case Normalization::Kind::Mass:
        A.row(n) = 2.0 * (M * phi).transpose();
        b(n) = -phi.dot(dM * phi);
        break;
      case Normalization::Kind::Component:
        A.row(n) = Vec3::Unit(n).transpose();
        b(n) = 0.0;
        break;
      case Normalization::Kind::Norm:
        A.row(n) = phi.transpose() / phi.norm();
        b(n) = 0.0;
        break;
    }
    out.dphi = A.fullPivLu().solve(b);
    return out;
  }

  Mat3 SP = S;
  SP.row(n).setZero();
  SP.col(n).setZero();
  SP(n, n) = 1.0;
  Vec3 QP = F;
  QP(n) = 0.0;
  const Vec3 V = SP.fullPivLu().solve(QP);
  double c = 0.0;
  switch (norm.kind) {
    case Normalization::Kind::Mass:
      c = (-phi.dot(M * V) - 0.5 * phi.dot(dM * phi)) / mass;
      break;
    case Normalization::Kind::Component:
      c = 0.0;
      break;
    case Normalization::Kind::Norm:
      c = -phi.dot(V) / phi.squaredNorm();
      break;
  }
  out.dphi = V + c * phi;
  return out;
}

EigenSensitivities eig_sensitivities(const EigenSystem& eig, SensitivityMethod method,
                                     Normalization norm, bool with_vectors, double gap_tol) {
  EigenSensitivities out;
  out.eig = eig;
  const auto& E = basis_tensors();
  for (int r = 0; r < 5; ++r)
    for (int k = 0; k < 3; ++k) out.dLambda(k, r) = eig.Phi.col(k).dot(E[r] * eig.Phi.col(k));
  if (!with_vectors) return out;

  const Vec3& l = eig.lambda;
  const double gap = std::min(l(0) - l(1), l(1) - l(2));
  if (!(gap > gap_tol)) {
    std::ostringstream os;
    os << "eigenvalue gap " << gap << " below tolerance " << gap_tol;
    throw DegenerateEigenvalues(os.str());
  }
  const Mat3 a = eig.Phi * l.asDiagonal() * eig.Phi.transpose();
  const Mat3 I = Mat3::Identity();
  const Mat3 Z = Mat3::Zero();
  for (int r = 0; r < 5; ++r) {
    for (int k = 0; k < 3; ++k) {
      const auto d = eigenpair_derivative(a, I, E[r], Z, l(k), eig.Phi.col(k), method, norm);
      out.dPhi[r].col(k) = d.dphi;
    }
  }
  out.has_vectors = true;
  return out;
}

EigenSensitivities eig_sensitivities(const Mat3& a, SensitivityMethod method, Normalization norm,
                                     bool with_vectors, double gap_tol) {
  return eig_sensitivities(eig_desc(a), method, norm, with_vectors, gap_tol);
}

}  // namespace fo
