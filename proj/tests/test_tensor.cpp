#include <doctest.h>

#include <algorithm>

#include "support.hpp"

using namespace fo;
using namespace fo::test;

TEST_CASE("pack and unpack") {
  const Vec5 iso = pack(Mat3::Identity() / 3.0);
  CHECK(iso(0) == doctest::Approx(1.0 / 3.0));
  CHECK(iso(1) == 0.0);
  CHECK(iso(2) == 0.0);
  CHECK(iso(3) == doctest::Approx(1.0 / 3.0));
  CHECK(iso(4) == 0.0);

  Mat3 a;
  a << 0.0622, 0.0765, 0.0398, 0.0765, 0.5521, 0.0186, 0.0398, 0.0186, 0.3857;
  const Vec5 v = pack(a);
  CHECK(v(0) == 0.0622);
  CHECK(v(1) == 0.0765);
  CHECK(v(2) == 0.0398);
  CHECK(v(3) == 0.5521);
  CHECK(v(4) == 0.0186);
  CHECK(unpack(v)(2, 2) == doctest::Approx(0.3857).epsilon(1e-14));
  CHECK((unpack(v) - a).cwiseAbs().maxCoeff() < 1e-15);

  SUBCASE("round trip on random unit-trace matrices") {
    for (int n = 0; n < 1000; ++n) {
      Mat3 m = random_matrix();
      m = 0.5 * (m + m.transpose()).eval();
      m(2, 2) = 1.0 - m(0, 0) - m(1, 1);
      REQUIRE((unpack(pack(m)) - m).cwiseAbs().maxCoeff() < 1e-15);
      Vec5 w;
      for (int i = 0; i < 5; ++i) w(i) = uniform(-1, 1);
      REQUIRE((pack(unpack(w)) - w).cwiseAbs().maxCoeff() == 0.0);
      REQUIRE(std::abs(unpack(w).trace() - 1.0) < 1e-15);
    }
  }
}

TEST_CASE("orientation state") {
  const OrientationState iso;
  CHECK(iso.is_physical());
  CHECK((iso.matrix() - Mat3::Identity() / 3.0).norm() < 1e-15);
  Mat3 m = Mat3::Zero();
  m(0, 0) = 1.2;
  m(1, 1) = -0.1;
  m(0, 1) = 0.3;
  m(1, 0) = 0.1;
  const auto s = OrientationState::from_matrix(m);
  CHECK(s.matrix()(0, 1) == doctest::Approx(0.2));
  CHECK(s.matrix().trace() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_FALSE(s.is_physical());
}

TEST_CASE("derivative basis") {
  Mat3 E1 = Mat3::Zero();
  E1.diagonal() << 1, 0, -1;
  CHECK(basis(1) == E1);
  Mat3 E2 = Mat3::Zero();
  E2(0, 1) = E2(1, 0) = 1;
  CHECK(basis(2) == E2);
  Mat3 E4 = Mat3::Zero();
  E4.diagonal() << 0, 1, -1;
  CHECK(basis(4) == E4);
  CHECK_THROWS_AS(basis(0), std::out_of_range);
  CHECK_THROWS_AS(basis(6), std::out_of_range);

  Eigen::Matrix<double, 9, 5> B;
  for (int r = 1; r <= 5; ++r) {
    const Mat3 E = basis(r);
    CHECK(E.trace() == 0.0);
    CHECK(E == E.transpose());
    B.col(r - 1) = Eigen::Map<const Eigen::Matrix<double, 9, 1>>(E.data());
    // The packed form of E_r is the unit vector e_r.
    CHECK(contract(E) == Vec5::Unit(r - 1));
  }
  CHECK(Eigen::FullPivLU<Eigen::Matrix<double, 9, 5>>(B).rank() == 5);
}

TEST_CASE("contracted index") {
  CHECK(contracted_index(1, 1) == 1);
  CHECK(contracted_index(2, 2) == 2);
  CHECK(contracted_index(3, 3) == 3);
  CHECK(contracted_index(2, 3) == 4);
  CHECK(contracted_index(3, 2) == 4);
  CHECK(contracted_index(1, 3) == 5);
  CHECK(contracted_index(1, 2) == 6);
}

namespace {

Tensor4 random_tensor4() {
  Tensor4 t;
  for (double& x : t.v) x = uniform(-1, 1);
  return t;
}

Tensor4 permuted(const Tensor4& t, const std::array<int, 4>& p) {
  Tensor4 out;
  int idx[4];
  for (idx[0] = 0; idx[0] < 3; ++idx[0])
    for (idx[1] = 0; idx[1] < 3; ++idx[1])
      for (idx[2] = 0; idx[2] < 3; ++idx[2])
        for (idx[3] = 0; idx[3] < 3; ++idx[3])
          out(idx[0], idx[1], idx[2], idx[3]) = t(idx[p[0]], idx[p[1]], idx[p[2]], idx[p[3]]);
  return out;
}

}  // namespace

TEST_CASE("sym24") {
  const Tensor4 dd = dyad(Mat3::Identity(), Mat3::Identity());
  const Tensor4 s = sym24(dd);
  CHECK(s(0, 0, 0, 0) == doctest::Approx(1.0));
  CHECK(s(0, 0, 1, 1) == doctest::Approx(1.0 / 3.0));
  CHECK(s(0, 1, 0, 1) == doctest::Approx(1.0 / 3.0));
  CHECK(s(0, 0, 0, 1) == 0.0);

  for (int n = 0; n < 10; ++n) {
    const Tensor4 t = random_tensor4();
    const Tensor4 st = sym24(t);
    CHECK(max_diff(sym24(st), st) < 1e-15);
    CHECK(is_fully_symmetric(st, 1e-15));
    std::array<int, 4> p = {0, 1, 2, 3};
    do {
      REQUIRE(max_diff(permuted(st, p), st) < 1e-15);
    } while (std::next_permutation(p.begin(), p.end()));
  }
  CHECK_FALSE(is_fully_symmetric(random_tensor4(), 1e-3));
}

TEST_CASE("double contractions") {
  const Tensor4 A = random_tensor4();
  const Mat3 B = random_matrix();
  const Mat3 C = ddot42(A, B);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) s += A(i, j, k, l) * B(k, l);
      CHECK(C(i, j) == doctest::Approx(s).epsilon(1e-14));
    }

  const Tensor4 A2 = random_tensor4();
  const Tensor4 P = ddot44(A, A2);
  double worst = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          double s = 0.0;
          for (int m = 0; m < 3; ++m)
            for (int n = 0; n < 3; ++n) s += A(i, j, m, n) * A2(m, n, k, l);
          worst = std::max(worst, std::abs(P(i, j, k, l) - s));
        }
  CHECK(worst < 1e-14);

  // a (x) a contracted with a symmetric tensor factors as (a:g) a.
  const Mat3 a = random_state();
  Mat3 g = random_matrix();
  g = 0.5 * (g + g.transpose()).eval();
  const Mat3 lhs = ddot42(dyad(a, a), g);
  CHECK((lhs - (a.cwiseProduct(g).sum()) * a).cwiseAbs().maxCoeff() < 1e-15);

  const Vec3 p = Vec3(1, 2, 2) / 3.0;
  const Tensor4 q = quad(p);
  CHECK(q(0, 1, 2, 2) == doctest::Approx(p(0) * p(1) * p(2) * p(2)));
  CHECK(is_fully_symmetric(q, 1e-15));
}

TEST_CASE("invariants") {
  const auto iso = invariants(Mat3::Identity() / 3.0);
  CHECK(iso.I == doctest::Approx(1.0));
  CHECK(iso.II == doctest::Approx(1.0 / 3.0));
  CHECK(iso.III == doctest::Approx(1.0 / 27.0));

  Mat3 uni = Mat3::Zero();
  uni(0, 0) = 1.0;
  const auto u = invariants(uni);
  CHECK(std::abs(u.II) < 1e-15);
  CHECK(std::abs(u.III) < 1e-15);

  SUBCASE("matrix expressions") {
    for (int n = 0; n < 200; ++n) {
      const Mat3 a = random_state(0.0);
      const auto inv = invariants(a);
      REQUIRE(inv.II == doctest::Approx(0.5 * (1.0 - a.cwiseProduct(a).sum())).epsilon(1e-12));
      REQUIRE(std::abs(inv.III - a.determinant()) < 1e-12);
    }
  }

  SUBCASE("derivatives against central differences") {
    const Mat3 a = a0();
    const auto inv = invariants(a);
    const double h = 1e-6;
    for (int r = 0; r < 5; ++r) {
      const Mat3 E = basis_tensors()[r];
      const auto p = invariants(a + h * E), m = invariants(a - h * E);
      CHECK(std::abs(inv.dII[r] - (p.II - m.II) / (2 * h)) < 1e-7);
      CHECK(std::abs(inv.dIII[r] - (p.III - m.III) / (2 * h)) < 1e-7);
    }
  }

  const Mat3 a = a0();
  const Mat3 cof = cofactor(a);
  for (int r = 0; r < 5; ++r) {
    const Mat3 E = basis_tensors()[r];
    const double h = 1e-6;
    const double fd = ((a + h * E).determinant() - (a - h * E).determinant()) / (2 * h);
    CHECK(cof.cwiseProduct(E).sum() == doctest::Approx(fd).epsilon(1e-8));
  }
}
