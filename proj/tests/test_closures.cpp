#include <doctest.h>

#include <algorithm>
#include <cstdio>

#include "fiberorient/coefficient_tables.hpp"
#include "support.hpp"

using namespace fo;
using namespace fo::test;

namespace {

Tensor4 rotate(const Tensor4& t, const Mat3& Q) {
  Tensor4 out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          double s = 0.0;
          for (int m = 0; m < 3; ++m)
            for (int n = 0; n < 3; ++n)
              for (int p = 0; p < 3; ++p)
                for (int q = 0; q < 3; ++q)
                  s += Q(i, m) * Q(j, n) * Q(k, p) * Q(l, q) * t(m, n, p, q);
          out(i, j, k, l) = s;
        }
  return out;
}

Mat3 uniaxial() {
  Mat3 u = Mat3::Zero();
  u(0, 0) = 1.0;
  return u;
}

}  // namespace

TEST_CASE("linear closure at isotropy") {
  const auto out = eval_closure(ClosureKind::LIN, Mat3::Identity() / 3.0);
  CHECK(out.A4(0, 0, 0, 0) == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(out.A4(0, 0, 1, 1) == doctest::Approx(1.0 / 15).epsilon(1e-14));
  CHECK(out.A4(0, 1, 0, 1) == doctest::Approx(1.0 / 15).epsilon(1e-14));
  CHECK(out.A4(2, 2, 2, 2) == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(std::abs(out.A4(0, 0, 0, 1)) < 1e-15);
}

TEST_CASE("quadratic closure at uniaxial alignment") {
  const auto out = eval_closure(ClosureKind::QDR, uniaxial());
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
          CHECK(out.A4(i, j, k, l) == (i + j + k + l == 0 ? 1.0 : 0.0));
}

TEST_CASE("hybrid closures") {
  CHECK(std::abs(hybrid_factor(1, Mat3::Identity() / 3.0).f) < 1e-15);
  CHECK(hybrid_factor(1, uniaxial()).f == doctest::Approx(1.0));
  CHECK(std::abs(hybrid_factor(2, Mat3::Identity() / 3.0).f) < 1e-14);
  CHECK(hybrid_factor(2, uniaxial()).f == doctest::Approx(1.0));
  CHECK_THROWS_AS(hybrid_factor(3, a0()), UnknownKind);

  const Mat3 a = a0();
  for (int variant : {1, 2}) {
    const auto h = hybrid_factor(variant, a);
    for (int r = 0; r < 5; ++r) {
      const double fd =
          central([&](const Mat3& x) { return hybrid_factor(variant, x).f; }, a, r);
      CHECK(h.df[r] == doctest::Approx(fd).epsilon(1e-7));
    }
  }

  const auto lin = eval_closure(ClosureKind::LIN, Mat3::Identity() / 3.0);
  const auto qdr = eval_closure(ClosureKind::QDR, uniaxial());
  for (auto k : {ClosureKind::HYB1, ClosureKind::HYB2}) {
    CHECK(max_diff(eval_closure(k, Mat3::Identity() / 3.0, false).A4, lin.A4) < 1e-14);
    CHECK(max_diff(eval_closure(k, uniaxial(), false).A4, qdr.A4) < 1e-14);
  }
}

TEST_CASE("composite beta tables") {
  const Mat3 iso = Mat3::Identity() / 3.0;
  const auto lin = hl_betas(ClosureKind::LIN, iso);
  CHECK(lin.beta[0] == doctest::Approx(-1.0 / 35));
  CHECK(lin.beta[1] == doctest::Approx(-1.0 / 35));
  CHECK(lin.beta[2] == doctest::Approx(1.0 / 7));
  CHECK(lin.beta[3] == doctest::Approx(1.0 / 7));
  for (int k = 4; k < 8; ++k) CHECK(lin.beta[k] == 0.0);

  const auto isob = hl_betas(ClosureKind::ISO, iso);
  CHECK(isob.beta[0] == doctest::Approx(1.0 / 15));
  CHECK(isob.beta[1] == doctest::Approx(1.0 / 15));
  for (int k = 2; k < 8; ++k) CHECK(isob.beta[k] == 0.0);
  // ISO and LIN agree at the isotropic state.
  CHECK(max_diff(eval_closure(ClosureKind::ISO, iso).A4, eval_closure(ClosureKind::LIN, iso).A4) <
        1e-15);

  // alpha = 1 at isotropy, so beta1 is its bare prefactor.
  const auto hl2 = hl_betas(ClosureKind::HL2, iso);
  CHECK(hl2.beta[0] == doctest::Approx(26.0 / 315));
  CHECK(hl2.beta[2] == doctest::Approx(16.0 / 63));
  CHECK_THROWS_AS(hl_betas(ClosureKind::HL2, uniaxial()), Singularity);
  CHECK_THROWS_AS(hl_betas(ClosureKind::VST, iso), UnknownKind);

  SUBCASE("beta derivatives") {
    const Mat3 a = a0();
    for (auto k : {ClosureKind::SF2, ClosureKind::HL2}) {
      const auto b = hl_betas(k, a);
      for (int r = 0; r < 5; ++r)
        for (int n = 0; n < 8; ++n) {
          const double fd = central([&](const Mat3& x) { return hl_betas(k, x).beta[n]; }, a, r);
          CHECK(std::abs(b.dbeta[n][r] - fd) < 1e-7);
        }
    }
  }
}

TEST_CASE("normalization") {
  for (int n = 0; n < 200; ++n) {
    const Mat3 a = random_state(0.0);
    for (auto k : all_closures()) {
      if (!satisfies_normalization(k)) continue;
      const double tol = k == ClosureKind::IBOF ? 1e-6 : 1e-10;
      const Mat3 c = ddot42(eval_closure(k, a, false).A4, Mat3::Identity());
      INFO(to_string(k));
      REQUIRE((c - a).cwiseAbs().maxCoeff() < tol);
    }
  }
  const Mat3 iso = Mat3::Identity() / 3.0;
  const Mat3 c = ddot42(eval_closure(ClosureKind::IBOF, iso, false).A4, Mat3::Identity());
  CHECK((c - iso).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("closure derivatives against central differences") {
  for (int n = 0; n < 50; ++n) {
    const Mat3 a = random_state(0.02);
    for (auto k : all_closures()) {
      // HL2 blows up as a:a approaches one.
      if (k == ClosureKind::HL2 && a.cwiseProduct(a).sum() > 0.9) continue;
      const auto out = eval_closure(k, a);
      REQUIRE(out.has_derivatives);
      for (int r = 0; r < 5; ++r) {
        const Tensor4 fd = central([&](const Mat3& x) { return eval_closure(k, x, false).A4; }, a, r);
        INFO(to_string(k), " slice ", r);
        REQUIRE(max_diff(out.dA4[r], fd) < 1e-5);
        REQUIRE(is_minor_symmetric(out.dA4[r], 1e-12));
      }
    }
  }
}

TEST_CASE("fully symmetric closures") {
  const Mat3 a = a0();
  for (auto k : all_closures()) {
    if (!is_ebof(k) && k != ClosureKind::LIN && k != ClosureKind::IBOF) continue;
    const auto out = eval_closure(k, a);
    INFO(to_string(k));
    CHECK(is_fully_symmetric(out.A4, 1e-10));
    for (int r = 0; r < 5; ++r) CHECK(is_fully_symmetric(out.dA4[r], 1e-10));
  }
}

TEST_CASE("eigenvalue-based closures are objective") {
  for (int n = 0; n < 20; ++n) {
    const Mat3 a = random_state(0.02);
    const Mat3 Q = random_rotation();
    const Mat3 b = Q * a * Q.transpose();
    for (auto k : all_closures()) {
      if (!is_ebof(k)) continue;
      const Tensor4 lhs = eval_closure(k, b, false).A4;
      const Tensor4 rhs = rotate(eval_closure(k, a, false).A4, Q);
      INFO(to_string(k));
      REQUIRE(max_diff(lhs, rhs) < 1e-9);
    }
  }
}

TEST_CASE("principal-frame fits") {
  SUBCASE("off-diagonal recovery") {
    for (auto k : all_closures()) {
      if (!is_ebof(k)) continue;
      const double l1 = 0.62, l2 = 0.27, l3 = 1.0 - l1 - l2;
      const auto p = ebof_principal(k, l1, l2);
      const auto& A = p.Abar;
      INFO(to_string(k));
      CHECK(A[0] + A[5] + A[4] == doctest::Approx(l1).epsilon(1e-13));
      CHECK(A[5] + A[1] + A[3] == doctest::Approx(l2).epsilon(1e-13));
      CHECK(A[4] + A[3] + A[2] == doctest::Approx(l3).epsilon(1e-13));
    }
  }

  SUBCASE("rational fit derivative") {
    const double l1 = 0.7, l2 = 0.2, h = 1e-6;
    const auto p = ebof_principal(ClosureKind::WTZ, l1, l2);
    const auto p1 = ebof_principal(ClosureKind::WTZ, l1 + h, l2);
    const auto m1 = ebof_principal(ClosureKind::WTZ, l1 - h, l2);
    const auto p2 = ebof_principal(ClosureKind::WTZ, l1, l2 + h);
    const auto m2 = ebof_principal(ClosureKind::WTZ, l1, l2 - h);
    for (int i = 0; i < 6; ++i) {
      CHECK(std::abs(p.dAbar[i][0] - (p1.Abar[i] - m1.Abar[i]) / (2 * h)) < 1e-7);
      CHECK(std::abs(p.dAbar[i][1] - (p2.Abar[i] - m2.Abar[i]) / (2 * h)) < 1e-7);
    }
  }

  SUBCASE("identity eigenvectors leave the principal entries in place") {
    EigenSystem eig;
    eig.lambda = Vec3(0.6, 0.3, 0.1);
    eig.Phi = Mat3::Identity();
    const auto p = ebof_principal(ClosureKind::ORT, 0.6, 0.3);
    const auto out = ebof_reconstruct(p, eig, nullptr);
    CHECK(out.A4(0, 0, 0, 0) == doctest::Approx(p.Abar[0]));
    CHECK(out.A4(1, 1, 1, 1) == doctest::Approx(p.Abar[1]));
    CHECK(out.A4(2, 2, 2, 2) == doctest::Approx(p.Abar[2]));
    CHECK(out.A4(1, 2, 1, 2) == doctest::Approx(p.Abar[3]));
    CHECK(out.A4(1, 1, 2, 2) == doctest::Approx(p.Abar[3]));
    CHECK(out.A4(0, 2, 0, 2) == doctest::Approx(p.Abar[4]));
    CHECK(out.A4(0, 1, 1, 0) == doctest::Approx(p.Abar[5]));
    CHECK(out.A4(0, 0, 0, 1) == 0.0);
  }

  SUBCASE("term counts") {
    for (auto k : all_closures()) {
      if (!is_ebof(k)) continue;
      const auto& c = ebof_coefficients(k);
      const int n = c.order;
      CHECK(c.num.rows() == 3);
      CHECK(c.num.cols() == (n + 1) * (n + 2) / 2);
      if (c.rational) {
        CHECK(c.den.cols() == n * (n + 1) / 2);
      }
    }
  }

  SUBCASE("binomial terms") {
    Eigen::VectorXd t, d1, d2;
    binomial_terms(2, 0.5, 0.25, t, d1, d2);
    REQUIRE(t.size() == 6);
    // 1, l1, l2, l1^2, l1 l2, l2^2
    CHECK(t(0) == 1.0);
    CHECK(t(1) == 0.5);
    CHECK(t(2) == 0.25);
    CHECK(t(3) == 0.25);
    CHECK(t(4) == 0.125);
    CHECK(t(5) == 0.0625);
    CHECK(d1(3) == 1.0);
    CHECK(d2(4) == 0.5);
  }
}

TEST_CASE("invariant-based closure") {
  const Mat3 a = a0();
  const auto b = ibof_betas(a);
  const auto inv = invariants(a);
  const double beta5 =
      -0.8 * b.beta[2] - 1.4 * b.beta[3] - 1.2 * b.beta[5] * (1.0 - 4.0 / 3.0 * inv.II);
  CHECK(b.beta[4] == doctest::Approx(beta5).epsilon(1e-12));
  for (int r = 0; r < 5; ++r)
    for (int n = 0; n < 6; ++n) {
      const double fd = central([&](const Mat3& x) { return ibof_betas(x).beta[n]; }, a, r);
      CHECK(std::abs(b.dbeta[n][r] - fd) < 1e-5 * std::max(1.0, std::abs(fd)));
    }

  const auto iso = ibof_betas(Mat3::Identity() / 3.0);
  for (double x : iso.beta) CHECK(std::isfinite(x));

  const auto& c = ibof_coefficients();
  CHECK(c(0, 0) == 2.49409081657860E+01);
  CHECK(c(0, 1) == -4.97217790110754E-01);
  CHECK(c(0, 2) == 2.34146291570999E+01);
  CHECK(c(20, 0) == -3.95769398304473E+09);
  CHECK(c(20, 1) == -1.60162178614234E+09);
  CHECK(c(20, 2) == -1.28050778279459E+10);
}

TEST_CASE("coefficient data files") {
  // Pinned digests of the shipped tables; any edit to a data file must be
  // re-audited against the source listings before updating these.
  const std::vector<std::pair<std::string, std::uint64_t>> pinned = {
      {"fflar4", 0x2e3400639cc1174cull}, {"ibof", 0xbd748705acd51558ull},
      {"lar32", 0xce520bce4a29e6f5ull},  {"lar4", 0x1434b9f1997b368eull},
      {"nat_ext", 0x37a0e2a30e84145cull}, {"nat_mid", 0xb05fafba0d457c41ull},
      {"ors", 0xf5077e6063a2609cull},    {"ort", 0x29b947d7d6bc8a7cull},
      {"orw", 0xaeca1ab9691785a1ull},    {"orw3", 0xb4a76d72b9b3c061ull},
      {"vst", 0xe549d76df9c95d1full},    {"wtz", 0xa3e52c555d3572a9ull},
  };
  const auto names = coefficient_table_names();
  CHECK(names.size() == pinned.size());
  for (const auto& [stem, digest] : pinned) {
    const auto text = embedded_table_text(stem);
    INFO(stem);
    REQUIRE_FALSE(text.empty());
    CHECK(fnv1a64(text) == digest);
  }
  CHECK(embedded_table_text("nonexistent").empty());

  const auto& t = coefficient_table("WTZ");
  CHECK(t.rational);
  CHECK(t.order == 3);
  CHECK(t.num_listed(0, 0) == 0.1433751825);
  CHECK(t.num_listed(0, 2) == 0.9685744898);
}

TEST_CASE("closure names") {
  CHECK(closure_from_string("nat1") == ClosureKind::NAT_MID);
  CHECK(closure_from_string("NAT2") == ClosureKind::NAT_EXT);
  CHECK(closure_from_string("nat-mid") == ClosureKind::NAT_MID);
  CHECK(closure_from_string("Hyb1") == ClosureKind::HYB1);
  CHECK_THROWS_AS(closure_from_string("bogus"), UnknownKind);
  for (auto k : all_closures()) CHECK(closure_from_string(to_string(k)) == k);
  CHECK(all_closures().size() == 21);
  CHECK(jacobian_grid_closures().size() == 20);
  // ORW2 reuses the ORW fit.
  CHECK(max_diff(eval_closure(ClosureKind::ORW2, a0(), false).A4,
                 eval_closure(ClosureKind::ORW, a0(), false).A4) == 0.0);
}
