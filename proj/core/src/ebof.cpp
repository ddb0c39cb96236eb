#include <cmath>
#include <map>
#include <mutex>

#include "fiberorient/closures.hpp"
#include "fiberorient/coefficient_tables.hpp"
#include "fiberorient/tensor.hpp"

namespace fo {
namespace {

std::string_view table_name(ClosureKind kind) {
  // ORW2 is the same quadratic fit as ORW.
  if (kind == ClosureKind::ORW2) return "ORW";
  return to_string(kind);
}

double ipow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

// Orthotropic principal tensor from the six contracted values.
Tensor4 principal_tensor(const std::array<double, 6>& A) {
  Tensor4 t;
  for (int m = 0; m < 3; ++m) {
    t(m, m, m, m) = A[m];
    for (int n = 0; n < 3; ++n) {
      if (n == m) continue;
      const double v = A[contracted_index(m + 1, n + 1) - 1];
      t(m, m, n, n) = v;
      t(m, n, m, n) = v;
      t(m, n, n, m) = v;
    }
  }
  return t;
}

// R_ijkl = sum Q1_im Q2_jn Q3_kp Q4_lq T_mnpq
Tensor4 rotate(const Tensor4& T, const Mat3& Q1, const Mat3& Q2, const Mat3& Q3, const Mat3& Q4) {
  Tensor4 a, b;
  for (int i = 0; i < 3; ++i)
    for (int n = 0; n < 3; ++n)
      for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 3; ++q) {
          double s = 0.0;
          for (int m = 0; m < 3; ++m) s += Q1(i, m) * T(m, n, p, q);
          a(i, n, p, q) = s;
        }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 3; ++q) {
          double s = 0.0;
          for (int n = 0; n < 3; ++n) s += Q2(j, n) * a(i, n, p, q);
          b(i, j, p, q) = s;
        }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int q = 0; q < 3; ++q) {
          double s = 0.0;
          for (int p = 0; p < 3; ++p) s += Q3(k, p) * b(i, j, p, q);
          a(i, j, k, q) = s;
        }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          double s = 0.0;
          for (int q = 0; q < 3; ++q) s += Q4(l, q) * a(i, j, k, q);
          b(i, j, k, l) = s;
        }
  return b;
}

}  // namespace

const EbofCoefficients& ebof_coefficients(ClosureKind kind) {
  if (!is_ebof(kind))
    throw UnknownKind(std::string(to_string(kind)) + " is not an orthotropic fitted closure");
  static std::mutex mu;
  static std::map<ClosureKind, EbofCoefficients> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(kind);
  if (it != cache.end()) return it->second;
  const CoefficientTable& t = coefficient_table(table_name(kind));
  EbofCoefficients c;
  c.name = std::string(to_string(kind));
  c.order = t.order;
  c.rational = t.rational;
  c.num = t.num;
  c.den = t.den;
  return cache.emplace(kind, std::move(c)).first->second;
}

void binomial_terms(int order, double l1, double l2, Eigen::VectorXd& t, Eigen::VectorXd& dt1,
                    Eigen::VectorXd& dt2) {
  const int n = (order + 1) * (order + 2) / 2;
  t.resize(n);
  dt1.resize(n);
  dt2.resize(n);
  for (int i = 0; i <= order; ++i)
    for (int j = 0; j <= i; ++j) {
      const int k = j + i * (i + 1) / 2;
      const int p = i - j;
      t(k) = ipow(l1, p) * ipow(l2, j);
      dt1(k) = p > 0 ? p * ipow(l1, p - 1) * ipow(l2, j) : 0.0;
      dt2(k) = j > 0 ? j * ipow(l1, p) * ipow(l2, j - 1) : 0.0;
    }
}

EbofPrincipal ebof_principal(ClosureKind kind, double l1, double l2) {
  const EbofCoefficients& c = ebof_coefficients(kind);
  Eigen::VectorXd t, t1, t2;
  binomial_terms(c.order, l1, l2, t, t1, t2);
  Vec3 f = c.num * t, f1 = c.num * t1, f2 = c.num * t2;
  if (c.rational) {
    Eigen::VectorXd s, s1, s2;
    binomial_terms(c.order - 1, l1, l2, s, s1, s2);
    const Vec3 g = c.den * s, g1 = c.den * s1, g2 = c.den * s2;
    const Vec3 q = f.cwiseQuotient(g);
    f1 = (f1.cwiseProduct(g) - f.cwiseProduct(g1)).cwiseQuotient(g.cwiseProduct(g));
    f2 = (f2.cwiseProduct(g) - f.cwiseProduct(g2)).cwiseQuotient(g.cwiseProduct(g));
    f = q;
  }
  const Vec3 lam(l1, l2, 1.0 - l1 - l2);
  Mat3 binv;
  binv << -1, 1, 1,
           1, -1, 1,
           1, 1, -1;
  binv *= 0.5;
  const Vec3 off = binv * (lam - f);
  const Vec3 off1 = binv * (Vec3(1, 0, -1) - f1);
  const Vec3 off2 = binv * (Vec3(0, 1, -1) - f2);
  EbofPrincipal p;
  for (int k = 0; k < 3; ++k) {
    p.Abar[k] = f(k);
    p.dAbar[k] = {f1(k), f2(k)};
    p.Abar[k + 3] = off(k);
    p.dAbar[k + 3] = {off1(k), off2(k)};
  }
  return p;
}

ClosureOutput ebof_reconstruct(const EbofPrincipal& p, const EigenSystem& eig,
                               const EigenSensitivities* sens) {
  ClosureOutput out;
  const Mat3& P = eig.Phi;
  const Tensor4 abar = principal_tensor(p.Abar);
  out.A4 = rotate(abar, P, P, P, P);
  if (sens == nullptr) return out;
  if (!sens->has_vectors) throw DegenerateEigenvalues("EBOF derivative needs eigenvector sensitivities");
  for (int r = 0; r < 5; ++r) {
    const double dl1 = sens->dLambda(0, r), dl2 = sens->dLambda(1, r);
    std::array<double, 6> dA{};
    for (int k = 0; k < 6; ++k) dA[k] = p.dAbar[k][0] * dl1 + p.dAbar[k][1] * dl2;
    const Mat3& dP = sens->dPhi[r];
    Tensor4 d = rotate(principal_tensor(dA), P, P, P, P);
    d += rotate(abar, dP, P, P, P);
    d += rotate(abar, P, dP, P, P);
    d += rotate(abar, P, P, dP, P);
    d += rotate(abar, P, P, P, dP);
    out.dA4[r] = d;
  }
  out.has_derivatives = true;
  return out;
}

}  // namespace fo
