#include <cmath>

#include "fiberorient/models.hpp"

namespace fo {

FlowKinematics decompose(const Mat3& L) {
  FlowKinematics k;
  k.L = L;
  k.gammadot = 0.5 * (L + L.transpose());
  k.omega = 0.5 * (L - L.transpose());
  k.gmag = std::sqrt(2.0 * (k.gammadot.array() * k.gammadot.transpose().array()).sum());
  return k;
}

Regime regime(double phi_f, double r_e) {
  if (phi_f < 1.0 / (r_e * r_e)) return Regime::Dilute;
  if (phi_f < 1.0 / r_e) return Regime::SemiConcentrated;
  return Regime::Concentrated;
}

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::Dilute: return "dilute";
    case Regime::SemiConcentrated: return "semi-concentrated";
    case Regime::Concentrated: return "concentrated";
  }
  return "?";
}

double shape_factor(double re) { return (re * re - 1.0) / (re * re + 1.0); }

Eigen::Matrix<double, 3, 2> tangent_basis(const Vec3& p) {
  int k = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(p(i)) < std::abs(p(k))) k = i;
  const Vec3 t1 = Vec3::Unit(k).cross(p).normalized();
  const Vec3 t2 = p.cross(t1);
  Eigen::Matrix<double, 3, 2> t;
  t.col(0) = t1;
  t.col(1) = t2;
  return t;
}

JefferyResult jeffery_p(const Vec3& p, const FlowKinematics& flow, double xi) {
  const Mat3& D = flow.gammadot;
  const Vec3 Dp = D * p;
  const double pDp = p.dot(Dp);
  JefferyResult r;
  r.pdot = flow.omega * p + xi * (Dp - pDp * p);
  const Mat3 J3 = flow.omega + xi * (D - pDp * Mat3::Identity() - 2.0 * p * Dp.transpose());
  r.tangent = tangent_basis(p);
  r.J = r.tangent.transpose() * J3 * r.tangent;
  return r;
}

}  // namespace fo
