#include "cli.hpp"

#include <cctype>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fiberorient/validation.hpp"

namespace fo::cli {
namespace {

using nlohmann::json;

void check_keys(const json& j, const std::set<std::string>& known, const std::string& where) {
  if (!j.is_object()) throw ConfigError("'" + where + "' must be a JSON object");
  for (const auto& [k, _] : j.items())
    if (!known.count(k)) throw ConfigError("unknown key '" + k + "' in " + where);
}

std::vector<double> parse_list(const std::string& s, std::size_t n, const std::string& what) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(tok, &used));
      while (used < tok.size() && std::isspace(static_cast<unsigned char>(tok[used]))) ++used;
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ConfigError(what + ": '" + tok + "' is not a number");
    }
  }
  if (v.size() != n)
    throw ConfigError(what + " needs " + std::to_string(n) + " comma-separated numbers");
  return v;
}

double num(const json& j, const std::string& what) {
  if (!j.is_number()) throw ConfigError("'" + what + "' must be a number");
  return j.get<double>();
}

bool boolean(const json& j, const std::string& what) {
  if (!j.is_boolean()) throw ConfigError("'" + what + "' must be true or false");
  return j.get<bool>();
}

std::string str(const json& j, const std::string& what) {
  if (!j.is_string()) throw ConfigError("'" + what + "' must be a string");
  return j.get<std::string>();
}

// A state is five packed components, a 3x3 matrix, or either under key "a".
Vec5 state_from_json(const json& j, const std::string& what) {
  if (j.is_object()) {
    check_keys(j, {"a"}, what);
    if (!j.contains("a")) throw ConfigError(what + " object needs key 'a'");
    return state_from_json(j["a"], what);
  }
  if (j.is_array() && j.size() == 5) {
    Vec5 v;
    for (int i = 0; i < 5; ++i) v(i) = num(j[i], what);
    return v;
  }
  if (j.is_array() && j.size() == 3) {
    Mat3 a;
    for (int i = 0; i < 3; ++i) {
      if (!j[i].is_array() || j[i].size() != 3) throw ConfigError(what + " must be 3x3");
      for (int k = 0; k < 3; ++k) a(i, k) = num(j[i][k], what);
    }
    if (!a.isApprox(a.transpose(), 1e-12)) throw ConfigError(what + " must be symmetric");
    if (std::abs(a.trace() - 1.0) > 1e-10) throw ConfigError(what + " must have unit trace");
    return pack(a);
  }
  throw ConfigError(what + " must be 5 numbers or a 3x3 matrix");
}

json vec_json(const Vec5& v) { return std::vector<double>(v.data(), v.data() + 5); }

json mat_json(const Mat3& m) {
  json out = json::array();
  for (int i = 0; i < 3; ++i) out.push_back({m(i, 0), m(i, 1), m(i, 2)});
  return out;
}

json read_json_file(const std::string& path, const std::string& what) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + what + " '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(what + " '" + path + "': " + e.what());
  }
}

std::string hash_hex(const std::string& s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016" PRIx64, fnv1a64(s));
  return buf;
}

std::string sci(double x, int digits) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*e", digits, x);
  return buf;
}

// ---- flags ---------------------------------------------------------------

struct Flags {
  std::string config;
  // model
  std::string model, closure, iard_form, D, n;
  double ci{}, kappa{}, xi{}, re{}, cm{}, omega{}, w{}, dz{}, u0{}, alpha{}, beta{};
  std::array<double, 5> b{};
  int alpha_dim{};
  // flow
  std::string flow;
  double gamma{}, eps{};
  // newton
  std::string guess;
  double tol{}, damping{}, perturb{};
  int max_iter{};
  bool no_augment = false, fd_fallback = false;
  // rk4
  std::string a0;
  double dt{}, t_end{}, steady_tol{};
  int steady_steps{}, record_every{};
  // validation
  std::string state, scheme, table;
  double step{};
  unsigned threads{};
  // output
  std::string output, format;
};

struct Opts {
  std::map<std::string, CLI::Option*> o;
  bool given(const std::string& name) const {
    auto it = o.find(name);
    return it != o.end() && it->second->count() > 0;
  }
};

void add_model_flags(CLI::App* app, Flags& f, Opts& o) {
  o.o["model"] = app->add_option("--model", f.model, "Model tag (see --list models)");
  o.o["closure"] = app->add_option("--closure", f.closure, "Closure tag (see --list closures)");
  o.o["ci"] = app->add_option("--ci", f.ci, "Isotropic interaction coefficient C_I");
  o.o["kappa"] = app->add_option("--kappa", f.kappa, "Slowdown factor (SRF, RSC)");
  o.o["xi"] = app->add_option("--xi", f.xi, "Shape factor");
  o.o["re"] = app->add_option("--re", f.re, "Aspect ratio; sets xi = (re^2-1)/(re^2+1)");
  o.o["cm"] = app->add_option("--cm", f.cm, "iARD coefficient C_M");
  o.o["omega"] = app->add_option("--omega", f.omega, "pARD Omega; D = (1, Omega, 1 - Omega)");
  o.o["D"] = app->add_option("--D", f.D, "Principal diffusivities d1,d2,d3 (pARD, MRD)");
  o.o["w"] = app->add_option("--w", f.w, "WPT weight");
  o.o["dz"] = app->add_option("--dz", f.dz, "Dz thickness diffusivity");
  o.o["n"] = app->add_option("--n", f.n, "Dz thickness direction n1,n2,n3");
  o.o["u0"] = app->add_option("--u0", f.u0, "NEM potential strength U0");
  o.o["alpha"] = app->add_option("--alpha", f.alpha, "RPR alpha");
  o.o["beta"] = app->add_option("--beta", f.beta, "RPR beta");
  o.o["alpha-dim"] = app->add_option("--alpha-dim", f.alpha_dim, "IRD dimension factor (2 or 3)");
  o.o["iard-form"] =
      app->add_option("--iard-form", f.iard_form, "strain-rate or velocity-gradient")
          ->check(CLI::IsMember({"strain-rate", "velocity-gradient"}));
  for (int i = 0; i < 5; ++i) {
    const std::string name = "b" + std::to_string(i + 1);
    o.o[name] = app->add_option("--" + name, f.b[i], "PT coefficient " + name);
  }
}

void add_flow_flags(CLI::App* app, Flags& f, Opts& o) {
  o.o["flow"] = app->add_option("--flow", f.flow, "Flow preset (see --list flows)");
  o.o["gamma"] = app->add_option("--gamma", f.gamma, "Shear rate");
  o.o["eps"] = app->add_option("--eps", f.eps, "Elongation rate");
}

void add_newton_flags(CLI::App* app, Flags& f, Opts& o) {
  o.o["guess"] = app->add_option("--guess", f.guess, "Flow preset name or a11,a12,a13,a22,a23");
  o.o["tol"] = app->add_option("--tol", f.tol, "Residual tolerance");
  o.o["max-iter"] = app->add_option("--max-iter", f.max_iter, "Iteration limit");
  o.o["damping"] = app->add_option("--damping", f.damping, "Step damping in (0, 1]");
  o.o["perturb"] = app->add_option("--perturb", f.perturb, "Seed for zero off-diagonal guesses");
  o.o["no-augment"] =
      app->add_flag("--no-augment", f.no_augment, "Fail on rank-deficient Jacobians");
  o.o["fd-fallback"] = app->add_flag("--fd-fallback", f.fd_fallback,
                                     "Use a difference Jacobian at repeated eigenvalues");
}

void add_rk4_flags(CLI::App* app, Flags& f, Opts& o) {
  o.o["a0"] = app->add_option("--a0", f.a0, "Initial state a11,a12,a13,a22,a23 (default I/3)");
  o.o["dt"] = app->add_option("--dt", f.dt, "Time step");
  o.o["t-end"] = app->add_option("--t-end", f.t_end, "End time");
  o.o["steady-tol"] = app->add_option("--steady-tol", f.steady_tol, "Early-stop residual");
  o.o["steady-steps"] =
      app->add_option("--steady-steps", f.steady_steps, "Consecutive steps below steady-tol");
  o.o["record-every"] = app->add_option("--record-every", f.record_every, "Output stride");
}

void add_fd_flags(CLI::App* app, Flags& f, Opts& o) {
  o.o["step"] = app->add_option("--step", f.step, "Difference step (relative)");
  o.o["scheme"] = app->add_option("--scheme", f.scheme,
                                  "forward, backward, central-2, central-4 or one-sided-3");
}

void add_output_flags(CLI::App* app, Flags& f, Opts& o) {
  o.o["config"] = app->add_option("--config", f.config, "JSON run configuration");
  o.o["output"] = app->add_option("--output,-o", f.output, "Output file (default stdout)");
  o.o["format"] = app->add_option("--format", f.format, "json or csv")
                      ->check(CLI::IsMember({"json", "csv"}));
}

// Flags override values from --config.
json resolve(const std::string& command, const Flags& f, const Opts& o) {
  json cfg = json::object();
  if (o.given("config")) cfg = read_json_file(f.config, "config");
  check_keys(cfg,
             {"command", "model", "flow", "guess", "newton", "rk4", "a0", "state", "fd", "table",
              "threads", "output"},
             "config");
  if (cfg.contains("command") && str(cfg["command"], "command") != command)
    throw ConfigError("config is for command '" + cfg["command"].get<std::string>() +
                      "', not '" + command + "'");
  cfg["command"] = command;

  json& m = cfg["model"];
  if (m.is_null()) m = json::object();
  if (!m.is_object()) throw ConfigError("'model' must be a JSON object");
  auto set_model = [&](const char* flag, const char* key, const json& value) {
    if (o.given(flag)) m[key] = value;
  };
  set_model("model", "model", f.model);
  set_model("closure", "closure", f.closure);
  set_model("ci", "CI", f.ci);
  set_model("kappa", "kappa", f.kappa);
  if (o.given("xi")) m.erase("re");
  set_model("xi", "xi", f.xi);
  if (o.given("re")) m.erase("xi");
  set_model("re", "re", f.re);
  set_model("cm", "CM", f.cm);
  if (o.given("omega")) m.erase("D");
  set_model("omega", "Omega", f.omega);
  if (o.given("D")) {
    m.erase("Omega");
    m["D"] = parse_list(f.D, 3, "--D");
  }
  set_model("w", "w", f.w);
  set_model("dz", "Dz", f.dz);
  if (o.given("n")) m["n"] = parse_list(f.n, 3, "--n");
  set_model("u0", "U0", f.u0);
  set_model("alpha", "alpha", f.alpha);
  set_model("beta", "beta", f.beta);
  set_model("alpha-dim", "alpha_dim", f.alpha_dim);
  set_model("iard-form", "iard_form", f.iard_form);
  for (int i = 0; i < 5; ++i) {
    if (!o.given("b" + std::to_string(i + 1))) continue;
    if (!m.contains("b")) m["b"] = {0.0, 0.0, 0.0, 0.0, 0.0};
    if (!m["b"].is_array() || m["b"].size() != 5) throw ConfigError("'b' must have 5 entries");
    m["b"][i] = f.b[i];
  }
  if (m.empty()) cfg.erase("model");

  if (o.given("flow") || o.given("gamma") || o.given("eps")) {
    json& fl = cfg["flow"];
    if (fl.is_null()) fl = json::object();
    if (!fl.is_object()) throw ConfigError("'flow' must be a JSON object");
    if (o.given("flow")) {
      fl.erase("L");
      fl["kind"] = f.flow;
    }
    if (o.given("gamma")) fl["gamma"] = f.gamma;
    if (o.given("eps")) fl["eps"] = f.eps;
  }

  if (o.given("guess")) {
    if (f.guess.find(',') != std::string::npos) cfg["guess"] = parse_list(f.guess, 5, "--guess");
    else cfg["guess"] = f.guess;
  }

  auto sub = [&](const char* key) -> json& {
    json& s = cfg[key];
    if (s.is_null()) s = json::object();
    if (!s.is_object()) throw ConfigError(std::string("'") + key + "' must be a JSON object");
    return s;
  };
  auto set_in = [&](const char* section, const char* flag, const char* key, const json& value) {
    if (o.given(flag)) sub(section)[key] = value;
  };
  set_in("newton", "tol", "tol", f.tol);
  set_in("newton", "max-iter", "max_iter", f.max_iter);
  set_in("newton", "damping", "damping", f.damping);
  set_in("newton", "perturb", "perturb", f.perturb);
  if (o.given("no-augment")) sub("newton")["rank_augmentation"] = false;
  if (o.given("fd-fallback")) sub("newton")["fd_fallback"] = true;

  if (o.given("a0")) cfg["a0"] = parse_list(f.a0, 5, "--a0");
  set_in("rk4", "dt", "dt", f.dt);
  set_in("rk4", "t-end", "t_end", f.t_end);
  set_in("rk4", "steady-tol", "steady_tol", f.steady_tol);
  set_in("rk4", "steady-steps", "steady_steps", f.steady_steps);
  set_in("rk4", "record-every", "record_every", f.record_every);

  if (o.given("state")) {
    if (f.state.find(',') != std::string::npos) cfg["state"] = parse_list(f.state, 5, "--state");
    else cfg["state"] = read_json_file(f.state, "state file");
  }
  set_in("fd", "step", "step", f.step);
  set_in("fd", "scheme", "scheme", f.scheme);
  if (o.given("table")) cfg["table"] = f.table;
  if (o.given("threads")) cfg["threads"] = f.threads;
  set_in("output", "output", "path", f.output);
  set_in("output", "format", "format", f.format);
  return cfg;
}

// ---- config -> objects ------------------------------------------------------

ModelSpec model_from(json& cfg, bool jacobian_defaults) {
  json user = cfg.contains("model") ? cfg["model"] : json::object();
  check_keys(user,
             {"model", "closure", "CI", "kappa", "xi", "re", "alpha_dim", "b", "CM", "Omega", "D",
              "w", "Dz", "n", "U0", "alpha", "beta", "iard_form"},
             "model");
  json base = user;
  if (jacobian_defaults) {
    try {
      const ModelKind mk =
          model_from_string(user.contains("model") ? str(user["model"], "model") : "FT");
      const ClosureKind ck =
          closure_from_string(user.contains("closure") ? str(user["closure"], "closure") : "IBOF");
      const auto& grid = jacobian_grid_models();
      if (std::find(grid.begin(), grid.end(), mk) != grid.end()) {
        base = json::parse(to_json(jacobian_grid_spec(mk, ck)));
        for (const auto& [k, v] : user.items()) {
          if (k == "re") base.erase("xi");
          if (k == "Omega") base.erase("D");
          base[k] = v;
        }
      }
    } catch (const UnknownKind& e) {
      throw ConfigError(e.what());
    }
  }
  const ModelSpec spec = model_spec_from_json(base.dump());
  cfg["model"] = json::parse(to_json(spec));
  return spec;
}

// Returns the kinematics; `kind` is set when the flow is a named preset.
FlowKinematics flow_from(json& cfg, std::optional<FlowKind>& kind, bool jacobian_default) {
  if (!cfg.contains("flow")) {
    if (!jacobian_default) throw ConfigError("no flow given (use --flow)");
    const Mat3 L = jacobian_grid_velocity_gradient();
    cfg["flow"] = {{"L", mat_json(L)}};
    return decompose(L);
  }
  json& fl = cfg["flow"];
  check_keys(fl, {"kind", "gamma", "eps", "L"}, "flow");
  if (fl.contains("L")) {
    if (fl.contains("kind") || fl.contains("gamma") || fl.contains("eps"))
      throw ConfigError("flow: give either 'L' or a preset, not both");
    const json& Lj = fl["L"];
    if (!Lj.is_array() || Lj.size() != 3) throw ConfigError("flow 'L' must be 3x3");
    Mat3 L;
    for (int i = 0; i < 3; ++i) {
      if (!Lj[i].is_array() || Lj[i].size() != 3) throw ConfigError("flow 'L' must be 3x3");
      for (int k = 0; k < 3; ++k) L(i, k) = num(Lj[i][k], "flow.L");
    }
    return decompose(L);
  }
  if (!fl.contains("kind")) throw ConfigError("flow needs 'kind' or 'L'");
  FlowPreset p;
  try {
    p.kind = flow_from_string(str(fl["kind"], "flow.kind"));
  } catch (const UnknownKind& e) {
    throw ConfigError(e.what());
  }
  if (fl.contains("gamma")) p.gamma = num(fl["gamma"], "flow.gamma");
  if (fl.contains("eps")) p.eps = num(fl["eps"], "flow.eps");
  fl["kind"] = std::string(cli_name(p.kind));
  fl["gamma"] = p.gamma;
  fl["eps"] = p.eps ? *p.eps : default_eps(p.kind, p.gamma);
  kind = p.kind;
  return build_flow(p);
}

Vec5 guess_from(json& cfg, const std::optional<FlowKind>& flow_kind) {
  if (!cfg.contains("guess")) {
    const Vec5 g = default_guess(flow_kind.value_or(FlowKind::SS));
    cfg["guess"] = vec_json(g);
    return g;
  }
  const json& g = cfg["guess"];
  if (g.is_string()) {
    try {
      const Vec5 v = default_guess(flow_from_string(g.get<std::string>()));
      cfg["guess"] = vec_json(v);
      return v;
    } catch (const UnknownKind& e) {
      throw ConfigError(std::string("guess: ") + e.what());
    }
  }
  return state_from_json(g, "guess");
}

NewtonOptions newton_from(json& cfg) {
  NewtonOptions n;
  if (cfg.contains("newton")) {
    const json& j = cfg["newton"];
    check_keys(j, {"tol", "max_iter", "damping", "perturb", "rank_augmentation", "fd_fallback"},
               "newton");
    if (j.contains("tol")) n.tol_residual = num(j["tol"], "newton.tol");
    if (j.contains("max_iter")) n.max_iter = static_cast<int>(num(j["max_iter"], "newton.max_iter"));
    if (j.contains("damping")) n.damping = num(j["damping"], "newton.damping");
    if (j.contains("perturb")) n.perturb_guess = num(j["perturb"], "newton.perturb");
    if (j.contains("rank_augmentation"))
      n.rank_augmentation = boolean(j["rank_augmentation"], "newton.rank_augmentation");
    if (j.contains("fd_fallback")) n.fd_fallback = boolean(j["fd_fallback"], "newton.fd_fallback");
  }
  n.validate();
  cfg["newton"] = {{"tol", n.tol_residual},
                   {"max_iter", n.max_iter},
                   {"damping", n.damping},
                   {"perturb", n.perturb_guess},
                   {"rank_augmentation", n.rank_augmentation},
                   {"fd_fallback", n.fd_fallback}};
  return n;
}

Rk4Options rk4_from(json& cfg) {
  Rk4Options r;
  if (cfg.contains("rk4")) {
    const json& j = cfg["rk4"];
    check_keys(j, {"dt", "t_end", "steady_tol", "steady_steps", "record_every"}, "rk4");
    if (j.contains("dt")) r.dt = num(j["dt"], "rk4.dt");
    if (j.contains("t_end")) r.t_end = num(j["t_end"], "rk4.t_end");
    if (j.contains("steady_tol")) r.steady_tol = num(j["steady_tol"], "rk4.steady_tol");
    if (j.contains("steady_steps"))
      r.steady_steps = static_cast<int>(num(j["steady_steps"], "rk4.steady_steps"));
    if (j.contains("record_every"))
      r.record_every = static_cast<int>(num(j["record_every"], "rk4.record_every"));
  }
  r.validate();
  cfg["rk4"] = {{"dt", r.dt},
                {"t_end", r.t_end},
                {"steady_tol", r.steady_tol},
                {"steady_steps", r.steady_steps},
                {"record_every", r.record_every}};
  return r;
}

FdScheme fd_from(json& cfg) {
  FdScheme s;
  if (cfg.contains("fd")) {
    const json& j = cfg["fd"];
    check_keys(j, {"scheme", "step"}, "fd");
    if (j.contains("scheme")) {
      try {
        s.kind = fd_kind_from_string(str(j["scheme"], "fd.scheme"));
      } catch (const UnknownKind& e) {
        throw ConfigError(e.what());
      }
    }
    if (j.contains("step")) s.step = num(j["step"], "fd.step");
  }
  if (!(s.step > 0.0)) throw ConfigError("difference step must be positive");
  cfg["fd"] = {{"scheme", std::string(to_string(s.kind))}, {"step", s.step}};
  return s;
}

struct Output {
  std::string path;
  std::string format = "json";
};

Output output_from(json& cfg, const std::string& default_format) {
  Output o;
  o.format = default_format;
  if (cfg.contains("output")) {
    const json& j = cfg["output"];
    check_keys(j, {"path", "format"}, "output");
    if (j.contains("path")) o.path = str(j["path"], "output.path");
    if (j.contains("format")) o.format = str(j["format"], "output.format");
  }
  if (o.format != "json" && o.format != "csv") throw ConfigError("format must be json or csv");
  // The output location does not change results, so it stays out of the hash.
  cfg.erase("output");
  return o;
}

void reject_unused(const json& cfg, const std::set<std::string>& used) {
  for (const auto& [k, _] : cfg.items())
    if (k != "command" && !used.count(k))
      throw ConfigError("key '" + k + "' does not apply to command '" +
                        cfg["command"].get<std::string>() + "'");
}

json meta(const json& cfg) {
  return {{"tool", "fiberorient"}, {"version", FIBERORIENT_VERSION},
          {"config_hash", hash_hex(cfg.dump())}};
}

std::string csv_meta(const json& cfg) {
  return std::string("# tool: fiberorient ") + FIBERORIENT_VERSION + "\n# command: " +
         cfg["command"].get<std::string>() + "\n# config-hash: " + hash_hex(cfg.dump()) + "\n";
}

void emit(const Output& o, const std::string& text, std::ostream& out) {
  if (o.path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + o.path + "'");
  f << text;
}

// ---- commands ---------------------------------------------------------------

int cmd_steady(json cfg, std::ostream& out) {
  reject_unused(cfg, {"model", "flow", "guess", "newton", "output"});
  const Output o = output_from(cfg, "json");
  const ModelSpec spec = model_from(cfg, false);
  std::optional<FlowKind> kind;
  const FlowKinematics flow = flow_from(cfg, kind, false);
  const Vec5 guess = guess_from(cfg, kind);
  const NewtonOptions nr = newton_from(cfg);

  SolveReport rep;
  std::string failure;
  try {
    rep = newton_steady(spec, flow, guess, nr);
  } catch (const Error& e) {
    failure = e.what();
    rep.state = OrientationState(guess);
  }
  auto warnings = spec.warnings();
  warnings.insert(warnings.end(), rep.warnings.begin(), rep.warnings.end());
  if (!failure.empty()) warnings.push_back(failure);

  if (o.format == "json") {
    json r;
    r["meta"] = meta(cfg);
    r["config"] = cfg;
    r["a"] = vec_json(rep.v());
    r["matrix"] = mat_json(rep.state.matrix());
    r["iterations"] = rep.iterations;
    r["residual"] = rep.residual();
    r["residual_history"] = rep.residual_history;
    r["converged"] = rep.converged;
    r["physical"] = rep.physical;
    r["zero_flow"] = rep.zero_flow;
    r["warnings"] = warnings;
    emit(o, r.dump(2) + "\n", out);
  } else {
    std::string s = csv_meta(cfg) + "a11,a12,a13,a22,a23,iterations,residual,converged,physical\n";
    const Vec5 v = rep.v();
    for (int i = 0; i < 5; ++i) s += sci(v(i), 10) + ",";
    s += std::to_string(rep.iterations) + "," + sci(rep.residual(), 4) + "," +
         (rep.converged ? "1" : "0") + "," + (rep.physical ? "1" : "0") + "\n";
    emit(o, s, out);
  }
  return rep.converged ? 0 : 1;
}

int cmd_transient(json cfg, std::ostream& out, std::ostream& err) {
  reject_unused(cfg, {"model", "flow", "a0", "rk4", "output"});
  const Output o = output_from(cfg, "json");
  const ModelSpec spec = model_from(cfg, false);
  std::optional<FlowKind> kind;
  const FlowKinematics flow = flow_from(cfg, kind, false);
  Vec5 a0 = (Vec5() << 1.0, 0.0, 0.0, 1.0, 0.0).finished() / 3.0;
  if (cfg.contains("a0")) a0 = state_from_json(cfg["a0"], "a0");
  cfg["a0"] = vec_json(a0);
  const Rk4Options rk = rk4_from(cfg);

  Trajectory tr;
  try {
    tr = rk4_transient(spec, flow, a0, rk);
  } catch (const NonFiniteState& e) {
    err << "error: " << e.what() << "\n";
    if (o.format == "json") {
      json r;
      r["meta"] = meta(cfg);
      r["config"] = cfg;
      r["error"] = e.what();
      r["failed_at"] = e.time();
      emit(o, r.dump(2) + "\n", out);
    }
    return 1;
  }

  if (o.format == "json") {
    json r;
    r["meta"] = meta(cfg);
    r["config"] = cfg;
    r["times"] = tr.times;
    json states = json::array();
    for (const auto& v : tr.states) states.push_back(vec_json(v));
    r["states"] = states;
    r["steady_reached"] = tr.steady_reached;
    r["final_residual"] = tr.final_residual;
    r["warnings"] = spec.warnings();
    emit(o, r.dump(2) + "\n", out);
  } else {
    std::string s = csv_meta(cfg) + "t,a11,a12,a13,a22,a23\n";
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
      s += sci(tr.times[k], 6);
      for (int i = 0; i < 5; ++i) s += "," + sci(tr.states[k](i), 10);
      s += "\n";
    }
    emit(o, s, out);
  }
  return 0;
}

int cmd_validate(json cfg, std::ostream& out) {
  reject_unused(cfg, {"model", "flow", "state", "fd", "output"});
  const Output o = output_from(cfg, "json");
  const ModelSpec spec = model_from(cfg, true);
  std::optional<FlowKind> kind;
  const FlowKinematics flow = flow_from(cfg, kind, true);
  const Vec5 state = cfg.contains("state") ? state_from_json(cfg["state"], "state")
                                           : reference_state();
  cfg["state"] = vec_json(state);
  const FdScheme fd = fd_from(cfg);

  double error = std::numeric_limits<double>::quiet_NaN();
  Mat5 Je = Mat5::Zero(), Jf = Mat5::Zero();
  std::string failure;
  try {
    Je = model_jacobian(spec, unpack(state), flow).J;
    Jf = fd_jacobian([&](const Vec5& v) { return contract(model_rate(spec, unpack(v), flow)); },
                     state, fd);
    error = jac_error(Je, Jf);
  } catch (const Error& e) {
    failure = e.what();
  }

  if (o.format == "json") {
    json r;
    r["meta"] = meta(cfg);
    r["config"] = cfg;
    r["error"] = failure.empty() ? json(error) : json(nullptr);
    if (failure.empty()) {
      auto rows = [](const Mat5& J) {
        json a = json::array();
        for (int i = 0; i < 5; ++i) a.push_back(std::vector<double>{J(i, 0), J(i, 1), J(i, 2), J(i, 3), J(i, 4)});
        return a;
      };
      r["J_exact"] = rows(Je);
      r["J_fd"] = rows(Jf);
    } else {
      r["failure"] = failure;
    }
    emit(o, r.dump(2) + "\n", out);
  } else {
    emit(o,
         csv_meta(cfg) + "model,closure,error,warning\n" + std::string(to_string(spec.model)) +
             "," + std::string(to_string(spec.closure)) + "," + sci(error, 4) + "," + failure +
             "\n",
         out);
  }
  return failure.empty() ? 0 : 1;
}

int cmd_sweep(json cfg, std::ostream& out) {
  reject_unused(cfg, {"table", "fd", "threads", "output"});
  const Output o = output_from(cfg, "csv");
  if (!cfg.contains("table")) throw ConfigError("sweep needs --table");
  const std::string table = str(cfg["table"], "table");
  const auto& names = sweep_table_names();
  if (std::find(names.begin(), names.end(), table) == names.end())
    throw ConfigError("unknown table '" + table + "'");
  SweepOptions opts;
  opts.fd = fd_from(cfg);
  if (cfg.contains("threads")) opts.threads = static_cast<unsigned>(num(cfg["threads"], "threads"));
  // Thread count does not affect results.
  cfg.erase("threads");
  const SweepResult r = run_sweep(table, opts);
  if (o.format == "csv") {
    emit(o, to_csv(r), out);
  } else {
    json j;
    j["meta"] = {{"tool", "fiberorient"},
                 {"version", FIBERORIENT_VERSION},
                 {"config_hash", hash_hex(r.config_json)}};
    j["table"] = r.table;
    j["columns"] = r.columns;
    json rows = json::array();
    for (const auto& row : r.rows) {
      json values = json::array();
      for (double v : row.values) values.push_back(std::isnan(v) ? json(nullptr) : json(v));
      rows.push_back({{"case", row.label}, {"values", values}, {"warning", row.warning}});
    }
    j["rows"] = rows;
    emit(o, j.dump(2) + "\n", out);
  }
  return 0;
}

int list(const std::string& what, std::ostream& out) {
  if (what == "models") {
    for (auto m : all_models()) out << to_string(m) << "\n";
  } else if (what == "closures") {
    for (auto c : all_closures()) out << to_string(c) << "\n";
  } else if (what == "flows") {
    for (auto f : all_flows()) out << cli_name(f) << " (" << to_string(f) << ")\n";
  } else if (what == "tables") {
    for (const auto& t : sweep_table_names()) out << t << "\n";
  }
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fiber orientation tensor models: steady states, transients and Jacobian checks",
               "fiberorient"};
  app.set_version_flag("--version", std::string(FIBERORIENT_VERSION));
  std::string list_what;
  app.add_option("--list", list_what, "List supported tags")
      ->check(CLI::IsMember({"models", "closures", "flows", "tables"}));
  app.require_subcommand(0, 1);

  Flags f;
  std::map<std::string, Opts> opts;

  auto* steady = app.add_subcommand("steady", "Newton steady state");
  add_model_flags(steady, f, opts["steady"]);
  add_flow_flags(steady, f, opts["steady"]);
  add_newton_flags(steady, f, opts["steady"]);
  add_output_flags(steady, f, opts["steady"]);

  auto* transient = app.add_subcommand("transient", "Fixed-step RK4 integration");
  add_model_flags(transient, f, opts["transient"]);
  add_flow_flags(transient, f, opts["transient"]);
  add_rk4_flags(transient, f, opts["transient"]);
  add_output_flags(transient, f, opts["transient"]);

  auto* validate = app.add_subcommand("validate-jacobian", "Analytic vs difference Jacobian");
  add_model_flags(validate, f, opts["validate-jacobian"]);
  add_flow_flags(validate, f, opts["validate-jacobian"]);
  opts["validate-jacobian"].o["state"] = validate->add_option(
      "--state", f.state, "JSON state file or a11,a12,a13,a22,a23 (default: reference state)");
  add_fd_flags(validate, f, opts["validate-jacobian"]);
  add_output_flags(validate, f, opts["validate-jacobian"]);

  auto* sweep = app.add_subcommand("sweep", "Reproduce a results table as CSV");
  opts["sweep"].o["table"] = sweep->add_option("--table", f.table, "Table name (see --list tables)");
  opts["sweep"].o["threads"] = sweep->add_option("--threads", f.threads, "Worker threads (0: all)");
  add_fd_flags(sweep, f, opts["sweep"]);
  add_output_flags(sweep, f, opts["sweep"]);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  if (!list_what.empty()) return list(list_what, out);

  try {
    CLI::App* cmd = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front();
    if (!cmd) {
      err << app.help();
      return 2;
    }
    const std::string name = cmd->get_name();
    json cfg = resolve(name, f, opts[name]);
    if (name == "steady") return cmd_steady(std::move(cfg), out);
    if (name == "transient") return cmd_transient(std::move(cfg), out, err);
    if (name == "validate-jacobian") return cmd_validate(std::move(cfg), out);
    return cmd_sweep(std::move(cfg), out);
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const UnknownKind& e) {
    err << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    err << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace fo::cli
