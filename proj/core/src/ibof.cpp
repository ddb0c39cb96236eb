#include <cmath>
#include "fiberorient/closures.hpp"
#include "fiberorient/coefficient_tables.hpp"
#include "fiberorient/tensor.hpp"

namespace fo {

const Eigen::Matrix<double, 21, 3>& ibof_coefficients() {
  static const Eigen::Matrix<double, 21, 3> c = [] {
    const CoefficientTable& t = coefficient_table("IBOF");
    if (t.num.cols() != 21) throw Error("IBOF table must have 21 terms");
    Eigen::Matrix<double, 21, 3> m = t.num.transpose();
    return m;
  }();
  return c;
}

IbofBetas ibof_betas(const Mat3& a) {
  const Invariants3 inv = invariants(a);
  const double II = inv.II, III = inv.III;
  const auto& C = ibof_coefficients();

  // beta3, beta4, beta6 and their partials in (II, III).
  Vec3 b = Vec3::Zero(), bII = Vec3::Zero(), bIII = Vec3::Zero();
  for (int i = 0; i <= 5; ++i)
    for (int j = 0; j <= i; ++j) {
      const int k = j + i * (i + 1) / 2;
      const int p = i - j;
      const double t = std::pow(II, p) * std::pow(III, j);
      const double tII = p > 0 ? p * std::pow(II, p - 1) * std::pow(III, j) : 0.0;
      const double tIII = j > 0 ? j * std::pow(II, p) * std::pow(III, j - 1) : 0.0;
      b += C.row(k).transpose() * t;
      bII += C.row(k).transpose() * tII;
      bIII += C.row(k).transpose() * tIII;
    }
  const double b3 = b(0), b4 = b(1), b6 = b(2);

  const double P1 = 1.0 / 7 + 4.0 / 7 * II + 8.0 / 3 * III;
  const double P2 = 1.0 / 5 - 8.0 / 15 * II - 14.0 / 15 * III;
  const double P3 = 1.0 / 35 - 4.0 / 35 * II - 24.0 / 105 * III + 16.0 / 15 * II * III +
                    8.0 / 35 * II * II;
  const double Q1 = 1.0 + 4.0 * II;
  const double Q2 = 1.0 / 6 - II;
  const double Q3 = -1.0 / 5 + 4.0 / 5 * II + 2.0 / 3 * III - 8.0 / 5 * II * II;
  const double R = 1.0 - 4.0 / 3 * II;

  IbofBetas out;
  out.beta[0] = 3.0 / 5 * (-1.0 / 7 + 1.0 / 5 * b3 * P1 - b4 * P2 - b6 * P3);
  out.beta[1] = 6.0 / 7 * (1.0 - 1.0 / 5 * b3 * Q1 + 7.0 / 5 * b4 * Q2 - b6 * Q3);
  out.beta[2] = b3;
  out.beta[3] = b4;
  out.beta[4] = -4.0 / 5 * b3 - 7.0 / 5 * b4 - 6.0 / 5 * b6 * R;
  out.beta[5] = b6;

  for (int r = 0; r < 5; ++r) {
    const double dII = inv.dII[r], dIII = inv.dIII[r];
    const double db3 = bII(0) * dII + bIII(0) * dIII;
    const double db4 = bII(1) * dII + bIII(1) * dIII;
    const double db6 = bII(2) * dII + bIII(2) * dIII;
    const double dP1 = 4.0 / 7 * dII + 8.0 / 3 * dIII;
    const double dP2 = -8.0 / 15 * dII - 14.0 / 15 * dIII;
    const double dP3 = -4.0 / 35 * dII - 24.0 / 105 * dIII + 16.0 / 15 * (dII * III + II * dIII) +
                       16.0 / 35 * II * dII;
    const double dQ1 = 4.0 * dII;
    const double dQ2 = -dII;
    const double dQ3 = 4.0 / 5 * dII + 2.0 / 3 * dIII - 16.0 / 5 * II * dII;
    const double dR = -4.0 / 3 * dII;
    out.dbeta[0][r] = 3.0 / 5 * (1.0 / 5 * (db3 * P1 + b3 * dP1) - (db4 * P2 + b4 * dP2) -
                                 (db6 * P3 + b6 * dP3));
    out.dbeta[1][r] = 6.0 / 7 * (-1.0 / 5 * (db3 * Q1 + b3 * dQ1) + 7.0 / 5 * (db4 * Q2 + b4 * dQ2) -
                                 (db6 * Q3 + b6 * dQ3));
    out.dbeta[2][r] = db3;
    out.dbeta[3][r] = db4;
    out.dbeta[4][r] = -4.0 / 5 * db3 - 7.0 / 5 * db4 - 6.0 / 5 * (db6 * R + b6 * dR);
    out.dbeta[5][r] = db6;
  }
  return out;
}

}  // namespace fo
