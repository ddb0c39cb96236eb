#include <set>

#include <json.hpp>

#include "fiberorient/models.hpp"

namespace fo {
namespace {

using nlohmann::json;

const std::set<std::string>& known_keys() {
  static const std::set<std::string> k = {"model", "closure", "CI",  "kappa", "xi",  "re",
                                          "alpha_dim", "b",   "CM",  "Omega", "D",   "w",
                                          "Dz",    "n",       "U0",  "alpha", "beta", "iard_form"};
  return k;
}

double number(const json& j, const char* key) {
  if (!j.is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
  return j.get<double>();
}

template <int N>
Eigen::Matrix<double, N, 1> vec(const json& j, const char* key) {
  if (!j.is_array() || j.size() != N)
    throw ConfigError(std::string("'") + key + "' must be an array of " + std::to_string(N) + " numbers");
  Eigen::Matrix<double, N, 1> v;
  for (int i = 0; i < N; ++i) v(i) = number(j[i], key);
  return v;
}

}  // namespace

std::string to_json(const ModelSpec& spec) {
  const auto& p = spec.params;
  json j;
  j["model"] = std::string(to_string(spec.model));
  j["closure"] = std::string(to_string(spec.closure));
  j["CI"] = p.CI;
  j["kappa"] = p.kappa;
  j["xi"] = p.xi;
  j["alpha_dim"] = p.alpha_dim;
  j["b"] = std::vector<double>(p.b.begin(), p.b.end());
  j["CM"] = p.CM;
  j["D"] = {p.D(0), p.D(1), p.D(2)};
  j["w"] = p.w;
  j["Dz"] = p.Dz;
  j["n"] = {p.n(0), p.n(1), p.n(2)};
  j["U0"] = p.U0;
  j["alpha"] = p.alpha;
  j["beta"] = p.beta;
  j["iard_form"] = p.iard_form == IardForm::StrainRate ? "strain-rate" : "velocity-gradient";
  return j.dump();
}

ModelSpec model_spec_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("model spec must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (!known_keys().count(key)) throw ConfigError("unknown model-spec key '" + key + "'");
  if (j.contains("xi") && j.contains("re")) throw ConfigError("give either 'xi' or 're', not both");

  ModelSpec s;
  auto& p = s.params;
  try {
    if (j.contains("model")) s.model = model_from_string(j["model"].get<std::string>());
    if (j.contains("closure")) s.closure = closure_from_string(j["closure"].get<std::string>());
    if (j.contains("iard_form")) {
      const auto f = j["iard_form"].get<std::string>();
      if (f == "strain-rate") p.iard_form = IardForm::StrainRate;
      else if (f == "velocity-gradient") p.iard_form = IardForm::VelocityGradient;
      else throw ConfigError("iard_form must be 'strain-rate' or 'velocity-gradient'");
    }
  } catch (const UnknownKind& e) {
    throw ConfigError(e.what());
  } catch (const json::type_error& e) {
    throw ConfigError(e.what());
  }

  if (j.contains("CI")) p.CI = number(j["CI"], "CI");
  if (j.contains("kappa")) p.kappa = number(j["kappa"], "kappa");
  if (j.contains("xi")) p.xi = number(j["xi"], "xi");
  if (j.contains("re")) p.xi = shape_factor(number(j["re"], "re"));
  if (j.contains("alpha_dim")) p.alpha_dim = static_cast<int>(number(j["alpha_dim"], "alpha_dim"));
  if (j.contains("b")) {
    const auto b = vec<5>(j["b"], "b");
    for (int i = 0; i < 5; ++i) p.b[i] = b(i);
  }
  if (j.contains("CM")) p.CM = number(j["CM"], "CM");
  if (j.contains("Omega") && j.contains("D")) throw ConfigError("give either 'Omega' or 'D', not both");
  if (j.contains("Omega")) p.set_omega(number(j["Omega"], "Omega"));
  if (j.contains("D")) p.D = vec<3>(j["D"], "D");
  if (j.contains("w")) p.w = number(j["w"], "w");
  if (j.contains("Dz")) p.Dz = number(j["Dz"], "Dz");
  if (j.contains("n")) p.n = vec<3>(j["n"], "n");
  if (j.contains("U0")) p.U0 = number(j["U0"], "U0");
  if (j.contains("alpha")) p.alpha = number(j["alpha"], "alpha");
  if (j.contains("beta")) p.beta = number(j["beta"], "beta");
  s.validate();
  return s;
}

}  // namespace fo
