#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>

#include <json.hpp>

#include "fiberorient/validation.hpp"

namespace fo {
namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

json vec_json(const Vec5& v) { return std::vector<double>(v.data(), v.data() + 5); }

json spec_json(const ModelSpec& s) { return json::parse(to_json(s)); }

std::string fmt_value(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4e", x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c == '\n' ? ' ' : c);
  }
  return out + "\"";
}

SweepResult jacobian_sweep(std::string_view table, const SweepOptions& opts) {
  SweepResult r;
  r.table = std::string(table);
  const auto closures = jacobian_table_closures(table);
  const auto& models = jacobian_grid_models();
  for (auto c : closures) r.columns.emplace_back(to_string(c));

  const FlowKinematics flow = decompose(jacobian_grid_velocity_gradient());
  const Vec5 a0 = reference_state();

  const std::size_t nc = closures.size();
  std::vector<double> cell(models.size() * nc, kNaN);
  std::vector<std::string> err(cell.size());
  parallel_for(cell.size(), opts.threads, [&](std::size_t k) {
    try {
      cell[k] = jacobian_fd_error(jacobian_grid_spec(models[k / nc], closures[k % nc]), flow, a0,
                                  opts.fd);
    } catch (const std::exception& e) {
      err[k] = std::string(to_string(closures[k % nc])) + ": " + e.what();
    }
  });

  json cfg;
  cfg["table"] = r.table;
  cfg["fd"] = {{"scheme", std::string(to_string(opts.fd.kind))}, {"step", opts.fd.step}};
  cfg["state"] = vec_json(a0);
  const Mat3 L = jacobian_grid_velocity_gradient();
  cfg["L"] = std::vector<double>(L.data(), L.data() + 9);
  json specs = json::array();
  for (std::size_t m = 0; m < models.size(); ++m) {
    SweepRow row;
    row.label = std::string(to_string(models[m]));
    for (std::size_t c = 0; c < nc; ++c) {
      row.values.push_back(cell[m * nc + c]);
      if (!err[m * nc + c].empty())
        row.warning += (row.warning.empty() ? "" : "; ") + err[m * nc + c];
    }
    r.rows.push_back(std::move(row));
    specs.push_back(spec_json(jacobian_grid_spec(models[m], closures.empty() ? ClosureKind::IBOF
                                                                             : closures[0])));
  }
  cfg["models"] = specs;
  r.config_json = cfg.dump();
  return r;
}

}  // namespace

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) fn(i);
    });
  for (auto& th : pool) th.join();
}

const std::vector<std::string>& sweep_table_names() {
  static const std::vector<std::string> v = {"jacobian", "table4",  "table5",  "table6",
                                             "table8",   "table10", "table13", "table14",
                                             "table15",  "table17"};
  return v;
}

SweepResult run_steady_cases(std::string table, const std::vector<SteadyCase>& cases,
                             unsigned threads) {
  SweepResult r;
  r.table = std::move(table);
  const auto& comps = reported_components();
  for (const auto& c : comps) r.columns.push_back("err_" + c.label);
  r.columns.insert(r.columns.end(), {"nr_iterations", "converged", "physical"});
  r.rows.resize(cases.size());

  parallel_for(cases.size(), threads, [&](std::size_t k) {
    const SteadyCase& sc = cases[k];
    SweepRow& row = r.rows[k];
    row.label = sc.label;
    row.values.assign(r.columns.size(), kNaN);
    try {
      const FlowKinematics flow = build_flow(sc.flow);
      const SteadyComparison cmp = steady_compare(sc.spec, flow, sc.guess, sc.rk_start, sc.rk, sc.nr);
      const Mat3 nr = cmp.newton.state.matrix();
      const Mat3 rk = unpack(cmp.rk4.final_state());
      for (std::size_t i = 0; i < comps.size(); ++i)
        row.values[i] = relative_error_percent(nr(comps[i].i, comps[i].j), rk(comps[i].i, comps[i].j));
      row.values[comps.size()] = cmp.newton.iterations;
      row.values[comps.size() + 1] = cmp.newton.converged ? 1.0 : 0.0;
      row.values[comps.size() + 2] = cmp.newton.physical ? 1.0 : 0.0;
      for (const auto& w : cmp.newton.warnings) row.warning += (row.warning.empty() ? "" : "; ") + w;
      if (!cmp.rk4.steady_reached && sc.rk.steady_steps < (1 << 30))
        row.warning += (row.warning.empty() ? "" : "; ") + std::string("RK4 did not reach steady state");
    } catch (const std::exception& e) {
      row.warning = e.what();
    }
  });

  json cfg;
  cfg["table"] = r.table;
  json arr = json::array();
  for (const auto& sc : cases) {
    json c;
    c["label"] = sc.label;
    c["spec"] = spec_json(sc.spec);
    const Mat3 L = velocity_gradient(sc.flow);
    c["L"] = std::vector<double>(L.data(), L.data() + 9);
    c["guess"] = vec_json(sc.guess);
    c["rk_start"] = vec_json(sc.rk_start);
    c["rk"] = {{"dt", sc.rk.dt}, {"t_end", sc.rk.t_end}, {"steady_tol", sc.rk.steady_tol},
               {"steady_steps", sc.rk.steady_steps}};
    c["newton"] = {{"tol", sc.nr.tol_residual}, {"max_iter", sc.nr.max_iter},
                   {"damping", sc.nr.damping}, {"perturb", sc.nr.perturb_guess},
                   {"rank_augmentation", sc.nr.rank_augmentation},
                   {"fd_fallback", sc.nr.fd_fallback}};
    arr.push_back(c);
  }
  cfg["cases"] = arr;
  r.config_json = cfg.dump();
  return r;
}

SweepResult run_sweep(std::string_view table, const SweepOptions& opts) {
  if (table == "jacobian" || table == "table4" || table == "table5" || table == "table6")
    return jacobian_sweep(table, opts);
  return run_steady_cases(std::string(table), steady_table_cases(table), opts.threads);
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string to_csv(const SweepResult& r) {
  std::string out;
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016" PRIx64, fnv1a64(r.config_json));
  out += "# tool: fiberorient " FIBERORIENT_VERSION "\n";
  out += "# table: " + r.table + "\n";
  out += "# config-hash: fnv1a64:" + std::string(hash) + "\n";
  out += "case";
  for (const auto& c : r.columns) out += "," + csv_field(c);
  out += ",warning\n";
  for (const auto& row : r.rows) {
    out += csv_field(row.label);
    for (double v : row.values) out += "," + fmt_value(v);
    out += "," + csv_field(row.warning) + "\n";
  }
  return out;
}

}  // namespace fo
