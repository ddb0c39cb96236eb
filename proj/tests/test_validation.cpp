#include <doctest.h>

#include <atomic>
#include <sstream>

#include "support.hpp"

using namespace fo;
using namespace fo::test;

namespace {

const FdKind kAllKinds[] = {FdKind::Forward, FdKind::Backward, FdKind::Central2, FdKind::Central4,
                            FdKind::OneSided3};

int count_lines(const std::string& s, char lead) {
  int n = 0;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);)
    if (!line.empty() && (lead == 0 || line[0] == lead)) ++n;
  return n;
}

}  // namespace

TEST_CASE("finite-difference schemes") {
  Mat5 A;
  for (int i = 0; i < 25; ++i) A.data()[i] = uniform(-1, 1);
  const Vec5 b = Vec5::Constant(0.3);
  const RateFn affine = [&](const Vec5& x) { return Vec5(A * x + b); };
  const Vec5 v = (Vec5() << 0.2, -0.1, 0.0, 0.5, 3.0).finished();
  for (auto k : kAllKinds)
    for (double step : {1e-2, 1e-4, 1e-6}) {
      const Mat5 J = fd_jacobian(affine, v, FdScheme{k, step});
      INFO(to_string(k), " step ", step);
      CHECK((J - A).cwiseAbs().maxCoeff() < 1e-7);
    }

  // d/dx x^2 = 2x; central differences are exact on quadratics.
  const RateFn square = [](const Vec5& x) { return Vec5(x.cwiseProduct(x)); };
  const Vec5 w = Vec5::Constant(0.5);
  const Mat5 J = fd_jacobian(square, w, FdScheme{FdKind::Central2, 1e-3});
  CHECK((J - Mat5::Identity()).cwiseAbs().maxCoeff() < 1e-10);
  const Mat5 Jf = fd_jacobian(square, w, FdScheme{FdKind::Forward, 1e-3});
  // Forward difference error is h |x| for the relative step.
  CHECK(Jf(0, 0) == doctest::Approx(1.0 + 0.5e-3).epsilon(1e-9));

  for (auto k : kAllKinds) CHECK(fd_kind_from_string(to_string(k)) == k);
  CHECK(fd_kind_from_string("central") == FdKind::Central2);
  CHECK_THROWS_AS(fd_kind_from_string("spline"), UnknownKind);
}

TEST_CASE("fourth-order central differences are more accurate") {
  const auto flow = decompose(jacobian_grid_velocity_gradient());
  const Vec5 v = reference_state();
  // With LIN the FT rate is affine in a, so every scheme is exact to roundoff.
  const auto lin = spec_of(ModelKind::FT, ClosureKind::LIN, 0.01);
  for (auto k : kAllKinds)
    CHECK(jacobian_fd_error(lin, flow, v, FdScheme{k, 1e-3}) < 1e-10);

  for (auto c : {ClosureKind::HYB1, ClosureKind::IBOF, ClosureKind::ORT}) {
    const auto spec = spec_of(ModelKind::FT, c, 0.01);
    for (double step : {1e-2, 1e-3}) {
      const double e2 = jacobian_fd_error(spec, flow, v, FdScheme{FdKind::Central2, step});
      const double e4 = jacobian_fd_error(spec, flow, v, FdScheme{FdKind::Central4, step});
      INFO(to_string(c), " step ", step, " c2 ", e2, " c4 ", e4);
      CHECK(e4 <= e2);
    }
  }
  // Second-order truncation: a tenfold smaller step shrinks the error about 100x.
  auto hyb = spec_of(ModelKind::FT, ClosureKind::HYB1, 0.01);
  const double a = jacobian_fd_error(hyb, flow, v, FdScheme{FdKind::Central2, 1e-2});
  const double b = jacobian_fd_error(hyb, flow, v, FdScheme{FdKind::Central2, 1e-3});
  CHECK(a / b == doctest::Approx(100.0).epsilon(0.1));
}

TEST_CASE("Jacobian error norm") {
  CHECK(jac_error(Mat5::Identity(), Mat5::Identity()) == 0.0);
  Mat5 d = Mat5::Zero();
  d(1, 3) = -4.0;
  CHECK(jac_error(d, Mat5::Zero()) == doctest::Approx(4.0));
  Mat5 diag = Mat5::Zero();
  diag.diagonal() << 1, -7, 3, 2, 0.5;
  CHECK(jac_error(diag, Mat5::Zero()) == doctest::Approx(7.0));
}

TEST_CASE("reference grid") {
  const Vec5 v = reference_state();
  CHECK(OrientationState(v).is_physical());
  Mat3 L = Mat3::Zero();
  L(0, 0) = -2;
  L(1, 1) = L(2, 2) = 1;
  L(1, 2) = 1;
  CHECK(jacobian_grid_velocity_gradient() == L);

  const double e = jacobian_fd_error(jacobian_grid_spec(ModelKind::FT, ClosureKind::HYB1),
                                     decompose(L), v);
  // Order of magnitude of the published 0.6436e-8.
  CHECK(e > 1e-10);
  CHECK(e < 1e-7);

  CHECK(jacobian_table_closures("table4").size() == 8);
  CHECK(jacobian_table_closures("table5").size() == 6);
  CHECK(jacobian_table_closures("table6").size() == 6);
  CHECK_THROWS_AS(jacobian_table_closures("table99"), UnknownKind);
  CHECK(reported_components().size() == 4);
  CHECK(material_sets().size() == 3);
  for (const auto& t : {"table8", "table10", "table13", "table14", "table15", "table17"})
    CHECK_FALSE(steady_table_cases(t).empty());
}

TEST_CASE("sweeps") {
  SUBCASE("empty grid") {
    const auto r = run_steady_cases("empty", {}, 2);
    const std::string csv = to_csv(r);
    CHECK(count_lines(csv, '#') == 3);
    CHECK(count_lines(csv, 0) == 4);
    CHECK(csv.find("case,") != std::string::npos);
  }

  SUBCASE("deterministic output") {
    SweepOptions one, many;
    one.threads = 1;
    many.threads = 4;
    const std::string a = to_csv(run_sweep("table4", one));
    const std::string b = to_csv(run_sweep("table4", many));
    const std::string c = to_csv(run_sweep("table4", many));
    CHECK(a == b);
    CHECK(b == c);
    CHECK(count_lines(a, 0) == 3 + 1 + 9);
  }

  SUBCASE("unknown table") { CHECK_THROWS_AS(run_sweep("table99"), UnknownKind); }

  std::atomic<int> sum{0};
  parallel_for(100, 3, [&](std::size_t i) { sum += static_cast<int>(i); });
  CHECK(sum == 4950);
  CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
}
