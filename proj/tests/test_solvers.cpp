#include <doctest.h>

#include <cmath>

#include "support.hpp"

using namespace fo;
using namespace fo::test;

namespace {

const SteadyCase& find_case(const std::vector<SteadyCase>& cases, const std::string& needle) {
  for (const auto& c : cases)
    if (c.label.find(needle) != std::string::npos) return c;
  throw std::runtime_error("no case " + needle);
}

Vec5 iso5() { return pack(Mat3::Identity() / 3.0); }

}  // namespace

TEST_CASE("triaxial flow converges to isotropy") {
  const auto flow = build_flow(FlowPreset{FlowKind::TA, 1.0, 1.0});
  NewtonOptions opts;
  opts.fd_fallback = true;
  opts.tol_residual = 1e-14;
  for (auto c : all_closures()) {
    if (!satisfies_normalization(c)) continue;
    const auto rep = newton_steady(spec_of(ModelKind::FT, c, 0.01), flow, default_guess(FlowKind::TA), opts);
    INFO(to_string(c));
    CHECK(rep.converged);
    CHECK((rep.v() - iso5()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(rep.residual() < 1e-12);
  }
}

TEST_CASE("Newton against RK4 in simple shear") {
  const auto spec = spec_of(ModelKind::FT, ClosureKind::VST, 0.0311);
  const auto flow = build_flow(FlowPreset{FlowKind::SS, 1.0, std::nullopt});
  const Vec5 guess = (Vec5() << 0.30, 0.0, 0.0, 0.60, 0.10).finished();
  Rk4Options rk;
  rk.t_end = 500.0;
  const auto cmp = steady_compare(spec, flow, guess, iso5(), rk);
  REQUIRE(cmp.newton.converged);
  CHECK(cmp.newton.physical);
  CHECK(cmp.rk4.steady_reached);
  for (int i = 0; i < 5; ++i) CHECK(std::abs(cmp.error_percent(i)) <= 0.1);

  SUBCASE("fixed point is genuine") {
    const Vec5 R = contract(model_rate(spec, cmp.newton.state.matrix(), flow));
    CHECK(R.norm() <= NewtonOptions{}.tol_residual);
  }

  SUBCASE("quadratic local convergence") {
    const auto& h = cmp.newton.residual_history;
    REQUIRE(h.size() >= 4);
    // Ratios r_{k+1} / r_k^2 over the last three steps stay bounded.
    for (std::size_t k = h.size() - 4; k + 1 < h.size(); ++k) {
      INFO("step ", k, " r_k ", h[k], " r_k+1 ", h[k + 1]);
      CHECK(h[k + 1] <= 50.0 * h[k] * h[k] + 1e-15);
    }
  }

  SUBCASE("same state from a relabelled frame") {
    // Cyclic relabelling of the axes.
    Mat3 P = Mat3::Zero();
    P(0, 1) = P(1, 2) = P(2, 0) = 1.0;
    const auto rflow = decompose(P * flow.L * P.transpose());
    const Vec5 rguess = pack(P * unpack(guess) * P.transpose());
    NewtonOptions o;
    o.perturb_guess = 0.0;
    const auto a = newton_steady(spec, flow, guess, o);
    const auto b = newton_steady(spec, rflow, rguess, o);
    REQUIRE(a.converged);
    REQUIRE(b.converged);
    const Mat3 back = P.transpose() * b.state.matrix() * P;
    CHECK((back - a.state.matrix()).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("Hinch-Leal branch") {
  const auto cases = steady_table_cases("table14");
  const auto& c = find_case(cases, "HL2");
  const auto rep = newton_steady(c.spec, build_flow(c.flow), c.guess, c.nr);
  REQUIRE(rep.converged);
  const Mat3 a = rep.state.matrix();
  CHECK(a(0, 0) == doctest::Approx(0.6103).epsilon(0.01));
  CHECK(a(0, 1) == doctest::Approx(0.0206).epsilon(0.02));
}

TEST_CASE("zero flow") {
  const auto spec = spec_of(ModelKind::FT, ClosureKind::ORT);
  const auto still = decompose(Mat3::Zero());
  const Vec5 g = default_guess(FlowKind::SS);
  const auto rep = newton_steady(spec, still, g);
  CHECK(rep.zero_flow);
  CHECK(rep.converged);
  CHECK(rep.v() == g);
  REQUIRE_FALSE(rep.warnings.empty());

  const auto tr = rk4_transient(spec, still, g);
  CHECK(tr.steady_reached);
  for (const auto& s : tr.states) CHECK(s == g);
}

TEST_CASE("RK4 observed order") {
  const auto spec = spec_of(ModelKind::FT, ClosureKind::LIN, 0.01);
  const auto flow = build_flow(FlowPreset{FlowKind::SS, 1.0, std::nullopt});
  auto run = [&](double dt) {
    Rk4Options o;
    o.dt = dt;
    o.t_end = 5.0;
    o.steady_tol = 0.0;
    o.record_every = 0;
    return rk4_transient(spec, flow, iso5(), o).final_state();
  };
  const double dt = 0.2;
  const Vec5 ref = run(dt / 16);
  const double e1 = (run(dt) - ref).norm(), e2 = (run(dt / 2) - ref).norm();
  const double order = std::log2(e1 / e2);
  INFO("observed order ", order);
  CHECK(order >= 3.9);
}

TEST_CASE("RK4 trajectories") {
  const auto spec = spec_of(ModelKind::FT, ClosureKind::VST, 0.0311);
  const auto flow = build_flow(FlowPreset{FlowKind::SS, 1.0, std::nullopt});

  SUBCASE("approach from near isotropy") {
    // a11 climbs monotonically to a single overshoot of about 1.4% near strain 6,
    // then settles onto the Newton root.
    Rk4Options o;
    o.dt = 0.01;
    o.t_end = 200.0;
    o.record_every = 1;
    const Vec5 start = (Vec5() << 0.33, 0.0, 0.0, 0.34, 0.0).finished();
    const auto tr = rk4_transient(spec, flow, start, o);
    std::size_t peak = 0;
    for (std::size_t n = 1; n < tr.states.size(); ++n) {
      REQUIRE(tr.times[n] > tr.times[n - 1]);
      if (tr.states[n](0) > tr.states[peak](0)) peak = n;
    }
    for (std::size_t n = 1; n <= peak; ++n) REQUIRE(tr.states[n](0) > tr.states[n - 1](0));
    const auto root = newton_steady(spec, flow, default_guess(FlowKind::SS));
    REQUIRE(root.converged);
    const double steady = root.v()(0);
    CHECK(tr.times[peak] < 10.0);
    CHECK(tr.states[peak](0) < 1.02 * steady);
    CHECK(std::abs(tr.final_state()(0) - steady) < 1e-6);
  }

  SUBCASE("trace drift") {
    Rk4Options o;
    o.dt = 0.01;
    o.t_end = 1000.0;  // 1e5 steps
    o.steady_tol = 0.0;
    o.record_every = 0;
    const auto s = spec_of(ModelKind::FT, ClosureKind::HYB1, 0.01);
    const auto tr = rk4_transient(s, flow, iso5(), o);
    REQUIRE(tr.states.size() == 2);
    CHECK(tr.times.back() == 1000.0);
    CHECK(std::abs(unpack(tr.final_state()).trace() - 1.0) <= 1e-12);
  }

  SUBCASE("blow-up is reported") {
    auto s = spec_of(ModelKind::FT, ClosureKind::QDR, 0.0);
    Rk4Options o;
    o.dt = 5.0;
    o.t_end = 1e4;
    const auto fast = build_flow(FlowPreset{FlowKind::UA, 0.0, 10.0});
    CHECK_THROWS_AS(rk4_transient(s, fast, default_guess(FlowKind::SS), o), NonFiniteState);
  }
}

TEST_CASE("solver options") {
  NewtonOptions n;
  CHECK_NOTHROW(n.validate());
  n.tol_residual = 0.0;
  CHECK_THROWS_AS(n.validate(), ConfigError);
  n = {};
  n.max_iter = 0;
  CHECK_THROWS_AS(n.validate(), ConfigError);
  n = {};
  n.damping = 1.5;
  CHECK_THROWS_AS(n.validate(), ConfigError);

  Rk4Options r;
  CHECK_NOTHROW(r.validate());
  r.dt = -1.0;
  CHECK_THROWS_AS(r.validate(), ConfigError);
  r = {};
  r.t_end = 0.0;
  CHECK_THROWS_AS(r.validate(), ConfigError);

  const auto flow = build_flow(FlowPreset{FlowKind::SS, 1.0, std::nullopt});
  NewtonOptions few;
  few.max_iter = 1;
  const auto rep = newton_steady(spec_of(ModelKind::FT, ClosureKind::ORT), flow,
                                 default_guess(FlowKind::SS), few);
  CHECK_FALSE(rep.converged);
  CHECK(rep.iterations == 1);
  bool flagged = false;
  for (const auto& w : rep.warnings) flagged |= w.find("MaxIterationsExceeded") != std::string::npos;
  CHECK(flagged);
}

TEST_CASE("relative error metric") {
  CHECK(relative_error_percent(0.5, 0.5) == 0.0);
  CHECK(relative_error_percent(0.0, 0.0) == 0.0);
  CHECK(relative_error_percent(0.101, 0.1) == doctest::Approx(1.0));
  CHECK(relative_error_percent(0.2, 0.25) == doctest::Approx(-20.0));
  // Differences below the sixth decimal vanish.
  CHECK(relative_error_percent(0.3000004, 0.3) == 0.0);
}
