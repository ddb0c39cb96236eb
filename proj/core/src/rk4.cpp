#include <cmath>

#include "fiberorient/solvers.hpp"

namespace fo {

void Rk4Options::validate() const {
  if (!(dt > 0.0)) throw ConfigError("RK4 step must be positive");
  if (!(t_end > 0.0)) throw ConfigError("RK4 end time must be positive");
  if (steady_steps < 1) throw ConfigError("RK4 steady_steps must be at least 1");
  if (record_every < 0) throw ConfigError("RK4 record_every must be non-negative");
}

Trajectory rk4_transient(const ModelSpec& spec, const FlowKinematics& flow, const Vec5& a0,
                         const Rk4Options& opts) {
  opts.validate();
  auto f = [&](const Vec5& v) { return contract(model_rate(spec, unpack(v), flow)); };

  Trajectory tr;
  tr.times.push_back(0.0);
  tr.states.push_back(a0);
  Vec5 v = a0;
  const long nsteps = static_cast<long>(std::ceil(opts.t_end / opts.dt - 1e-9));
  int quiet = 0;
  double t = 0.0;
  Vec5 k1 = f(v);
  for (long n = 1; n <= nsteps; ++n) {
    const double h = std::min(opts.dt, opts.t_end - t);
    const Vec5 k2 = f(v + 0.5 * h * k1);
    const Vec5 k3 = f(v + 0.5 * h * k2);
    const Vec5 k4 = f(v + h * k3);
    v += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t = n == nsteps ? opts.t_end : n * opts.dt;
    if (!v.allFinite()) throw NonFiniteState("RK4 state became non-finite", t);

    k1 = f(v);
    const double rn = k1.norm();
    tr.final_residual = rn;
    quiet = rn <= opts.steady_tol ? quiet + 1 : 0;
    const bool done = quiet >= opts.steady_steps || n == nsteps;
    if (done || (opts.record_every > 0 && n % opts.record_every == 0)) {
      tr.times.push_back(t);
      tr.states.push_back(v);
    }
    if (quiet >= opts.steady_steps) {
      tr.steady_reached = true;
      break;
    }
  }
  return tr;
}

double relative_error_percent(double nr, double rk) {
  auto round6 = [](double x) { return std::round(x * 1e6) / 1e6; };
  const double e = round6(nr - rk) / round6(rk) * 100.0;
  return std::isnan(e) ? 0.0 : e;
}

SteadyComparison steady_compare(const ModelSpec& spec, const FlowKinematics& flow,
                                 const Vec5& guess, const Vec5& rk_start,
                                 const Rk4Options& rk_opts, const NewtonOptions& nr_opts) {
  SteadyComparison c;
  c.newton = newton_steady(spec, flow, guess, nr_opts);
  c.rk4 = rk4_transient(spec, flow, rk_start, rk_opts);
  const Vec5 nr = c.newton.v();
  const Vec5& rk = c.rk4.final_state();
  for (int i = 0; i < 5; ++i) c.error_percent(i) = relative_error_percent(nr(i), rk(i));
  return c;
}

}  // namespace fo
