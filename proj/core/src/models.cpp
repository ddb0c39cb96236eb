#include "fiberorient/models.hpp"

#include <cctype>
#include <cmath>

#include "fiberorient/spectral.hpp"
#include "fiberorient/tensor.hpp"

namespace fo {
namespace {

struct ModelName {
  ModelKind kind;
  std::string_view tag;
};

constexpr ModelName kModelNames[] = {
    {ModelKind::FT, "FT"},           {ModelKind::SRF, "SRF"},
    {ModelKind::RSC, "RSC"},         {ModelKind::PT, "PT"},
    {ModelKind::MRD, "MRD"},         {ModelKind::iARD, "iARD"},
    {ModelKind::pARD, "pARD"},       {ModelKind::WPT, "WPT"},
    {ModelKind::Dz, "Dz"},           {ModelKind::NEM, "NEM"},
    {ModelKind::pARD_RSC, "pARD-RSC"}, {ModelKind::ARD_RSC, "ARD-RSC"},
    {ModelKind::iARD_RPR, "iARD-RPR"}, {ModelKind::pARD_RPR, "pARD-RPR"},
    {ModelKind::FT_RPR, "FT-RPR"},
};

std::string fold(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '_' || c == '-' || c == ' ') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

double ddot(const Mat3& a, const Mat3& b) { return (a.array() * b.array()).sum(); }

// Rate tensor and its five directional derivatives.
struct Rate {
  Mat3 F = Mat3::Zero();
  std::array<Mat3, 5> dF{};
  bool jac = false;

  explicit Rate(bool with_jac) : jac(with_jac) {
    for (auto& m : dF) m.setZero();
  }
  void add(const Rate& o, double s = 1.0) {
    F += s * o.F;
    if (jac)
      for (int r = 0; r < 5; ++r) dF[r] += s * o.dF[r];
  }
  void scale(double s) {
    F *= s;
    if (jac)
      for (auto& m : dF) m *= s;
  }
};

struct Context {
  const ModelSpec& spec;
  const Mat3& a;
  const FlowKinematics& flow;
  bool jac;
  ClosureOutput closure;
};

template <class F>
auto named(std::string_view component, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const DegenerateEigenvalues& e) {
    throw DegenerateEigenvalues(std::string(component) + ": " + e.what());
  }
}

Rate hydrodynamic(const Context& c) {
  const auto& E = basis_tensors();
  const Mat3& W = c.flow.omega;
  const Mat3& D = c.flow.gammadot;
  const double xi = c.spec.params.xi;
  Rate r(c.jac);
  r.F = (W * c.a - c.a * W) + xi * (D * c.a + c.a * D - 2.0 * ddot42(c.closure.A4, D));
  if (c.jac)
    for (int k = 0; k < 5; ++k)
      r.dF[k] = (W * E[k] - E[k] * W) +
                xi * (D * E[k] + E[k] * D - 2.0 * ddot42(c.closure.dA4[k], D));
  return r;
}

Rate isotropic_diffusion(const Context& c) {
  const auto& E = basis_tensors();
  const double Dr = c.spec.params.CI * c.flow.gmag;
  const double al = c.spec.params.alpha_dim;
  Rate r(c.jac);
  r.F = 2.0 * Dr * (Mat3::Identity() - al * c.a);
  if (c.jac)
    for (int k = 0; k < 5; ++k) r.dF[k] = -2.0 * Dr * al * E[k];
  return r;
}

// gmag [2C - 2 tr(C) a - 5 (C a + a C) + 10 A4:C]
Rate anisotropic_diffusion(const Context& c, const DiffusionTensor& C) {
  const auto& E = basis_tensors();
  const double g = c.flow.gmag;
  const Mat3& a = c.a;
  const double tr = C.C.trace();
  Rate r(c.jac);
  r.F = g * (2.0 * C.C - 2.0 * tr * a - 5.0 * (C.C * a + a * C.C) +
             10.0 * ddot42(c.closure.A4, C.C));
  if (c.jac)
    for (int k = 0; k < 5; ++k) {
      const Mat3& dC = C.dC[k];
      r.dF[k] = g * (2.0 * dC - 2.0 * (dC.trace() * a + tr * E[k]) -
                     5.0 * (dC * a + C.C * E[k] + E[k] * C.C + a * dC) +
                     10.0 * (ddot42(c.closure.dA4[k], C.C) + ddot42(c.closure.A4, dC)));
    }
  return r;
}

// 2 gmag (C - tr(C) a)
Rate truncated_diffusion(const Context& c, const DiffusionTensor& C) {
  const auto& E = basis_tensors();
  const double g = c.flow.gmag;
  Rate r(c.jac);
  r.F = 2.0 * g * (C.C - C.C.trace() * c.a);
  if (c.jac)
    for (int k = 0; k < 5; ++k)
      r.dF[k] = 2.0 * g * (C.dC[k] - C.dC[k].trace() * c.a - C.C.trace() * E[k]);
  return r;
}

// gmag U0 (a.a - A4:a)
Rate nematic(const Context& c) {
  const auto& E = basis_tensors();
  const double s = c.flow.gmag * c.spec.params.U0;
  Rate r(c.jac);
  r.F = s * (c.a * c.a - ddot42(c.closure.A4, c.a));
  if (c.jac)
    for (int k = 0; k < 5; ++k)
      r.dF[k] = s * (E[k] * c.a + c.a * E[k] - ddot42(c.closure.dA4[k], c.a) -
                     ddot42(c.closure.A4, E[k]));
  return r;
}

DiffusionKind diffusion_for(ModelKind m) {
  switch (m) {
    case ModelKind::PT: case ModelKind::ARD_RSC: return DiffusionKind::PT;
    case ModelKind::iARD: case ModelKind::iARD_RPR: return DiffusionKind::iARD;
    case ModelKind::pARD: case ModelKind::pARD_RSC: case ModelKind::pARD_RPR:
      return DiffusionKind::pARD;
    case ModelKind::WPT: return DiffusionKind::WPT;
    case ModelKind::Dz: return DiffusionKind::Dz;
    case ModelKind::MRD: return DiffusionKind::MRD_D;
    default: break;
  }
  throw UnknownKind("model has no spatial diffusion tensor");
}

DiffusionTensor diffusion(const Context& c) {
  return named("spatial diffusion", [&] {
    return spatial_diffusion(diffusion_for(c.spec.model), c.a, c.flow, c.spec.params, c.jac);
  });
}

// Reduced-strain closure pieces: K = L4 - M4:A4 and its derivatives.
struct RscParts {
  Tensor4 M4, K;
  Grad5<Tensor4> dM4{}, dK{};
};

RscParts rsc_parts(const Context& c) {
  const RscTensors t = named("RSC tensors", [&] { return rsc_tensors(c.a, c.jac); });
  RscParts p;
  p.M4 = t.M4;
  p.K = t.L4 - ddot44(t.M4, c.closure.A4);
  if (c.jac)
    for (int k = 0; k < 5; ++k) {
      p.dM4[k] = t.dM4[k];
      p.dK[k] = t.dL4[k] - ddot44(t.dM4[k], c.closure.A4) - ddot44(t.M4, c.closure.dA4[k]);
    }
  return p;
}

// -2 xi gammadot:K
Rate rsc_hydro_correction(const Context& c, const RscParts& p) {
  const Mat3& D = c.flow.gammadot;
  const double xi = c.spec.params.xi;
  Rate r(c.jac);
  r.F = -2.0 * xi * ddot42(p.K, D);
  if (c.jac)
    for (int k = 0; k < 5; ++k) r.dF[k] = -2.0 * xi * ddot42(p.dK[k], D);
  return r;
}

// gmag [2(C - (1-k) M4:C) - 2 k tr(C) a - 5(Ca + aC) + 10 (A4:C + (1-k) K:C)]
Rate rsc_anisotropic_diffusion(const Context& c, const RscParts& p, const DiffusionTensor& C) {
  const auto& E = basis_tensors();
  const double g = c.flow.gmag;
  const double kap = c.spec.params.kappa;
  const double q = 1.0 - kap;
  const Mat3& a = c.a;
  const double tr = C.C.trace();
  const Tensor4& A4 = c.closure.A4;
  Rate r(c.jac);
  r.F = g * (2.0 * (C.C - q * ddot42(p.M4, C.C)) - 2.0 * kap * tr * a -
             5.0 * (C.C * a + a * C.C) + 10.0 * (ddot42(A4, C.C) + q * ddot42(p.K, C.C)));
  if (c.jac)
    for (int k = 0; k < 5; ++k) {
      const Mat3& dC = C.dC[k];
      r.dF[k] = g * (2.0 * (dC - q * (ddot42(p.dM4[k], C.C) + ddot42(p.M4, dC))) -
                     2.0 * kap * (dC.trace() * a + tr * E[k]) -
                     5.0 * (dC * a + C.C * E[k] + E[k] * C.C + a * dC) +
                     10.0 * (ddot42(c.closure.dA4[k], C.C) + ddot42(A4, dC) +
                             q * (ddot42(p.dK[k], C.C) + ddot42(p.K, dC))));
    }
  return r;
}

Rate with_rpr(const Context& c, Rate x) {
  const auto corr = named("RPR correction", [&] {
    return rpr_correction(x.F, c.jac ? &x.dF : nullptr, c.a, c.spec.params.alpha,
                          c.spec.params.beta);
  });
  x.F += corr.corr;
  if (c.jac)
    for (int k = 0; k < 5; ++k) x.dF[k] += corr.dCorr[k];
  return x;
}

Rate evaluate(const ModelSpec& spec, const Mat3& a, const FlowKinematics& flow, bool jac) {
  Rate out(jac);
  if (flow.L.isZero(0.0)) return out;

  Context c{spec, a, flow, jac,
            named("closure " + std::string(to_string(spec.closure)),
                  [&] { return eval_closure(spec.closure, a, jac); })};
  const double kap = spec.params.kappa;

  Rate hd = hydrodynamic(c);
  switch (spec.model) {
    case ModelKind::FT:
      out = hd;
      out.add(isotropic_diffusion(c));
      break;
    case ModelKind::SRF:
      out = hd;
      out.add(isotropic_diffusion(c));
      out.scale(kap);
      break;
    case ModelKind::RSC: {
      const RscParts p = rsc_parts(c);
      out = hd;
      const Rate ird = isotropic_diffusion(c);
      out.add(ird, kap);
      out.add(rsc_hydro_correction(c, p), 1.0 - kap);
      break;
    }
    case ModelKind::PT: case ModelKind::iARD: case ModelKind::pARD:
    case ModelKind::WPT: case ModelKind::Dz:
      out = hd;
      out.add(anisotropic_diffusion(c, diffusion(c)));
      break;
    case ModelKind::MRD:
      out = hd;
      out.add(truncated_diffusion(c, diffusion(c)));
      break;
    case ModelKind::NEM:
      out = hd;
      out.add(isotropic_diffusion(c), 0.5);
      out.add(nematic(c));
      break;
    case ModelKind::pARD_RSC: case ModelKind::ARD_RSC: {
      const RscParts p = rsc_parts(c);
      out = hd;
      out.add(rsc_hydro_correction(c, p), 1.0 - kap);
      out.add(rsc_anisotropic_diffusion(c, p, diffusion(c)));
      break;
    }
    case ModelKind::FT_RPR:
      out = hd;
      out.add(isotropic_diffusion(c));
      out = with_rpr(c, out);
      break;
    case ModelKind::iARD_RPR: case ModelKind::pARD_RPR:
      out = hd;
      out.add(anisotropic_diffusion(c, diffusion(c)));
      out = with_rpr(c, out);
      break;
  }
  return out;
}

}  // namespace

std::string_view to_string(ModelKind k) {
  for (const auto& e : kModelNames)
    if (e.kind == k) return e.tag;
  return "?";
}

ModelKind model_from_string(std::string_view name) {
  const std::string n = fold(name);
  if (n == "iardrsc") return ModelKind::ARD_RSC;
  if (n == "mard") return ModelKind::MRD;
  if (n == "rpr") return ModelKind::FT_RPR;
  for (const auto& e : kModelNames)
    if (fold(e.tag) == n) return e.kind;
  throw UnknownKind("unknown model '" + std::string(name) + "'");
}

const std::vector<ModelKind>& all_models() {
  static const std::vector<ModelKind> v = [] {
    std::vector<ModelKind> out;
    for (const auto& e : kModelNames) out.push_back(e.kind);
    return out;
  }();
  return v;
}

const std::vector<ModelKind>& jacobian_grid_models() {
  using M = ModelKind;
  static const std::vector<ModelKind> v = {M::FT, M::PT,  M::iARD,     M::pARD,    M::WPT,
                                           M::Dz, M::NEM, M::pARD_RSC, M::iARD_RPR};
  return v;
}

void ModelSpec::validate() const {
  const auto& p = params;
  auto bad = [](const std::string& m) { throw ConfigError(m); };
  if (!(p.xi > 0.0 && p.xi <= 1.0)) bad("xi must lie in (0, 1]");
  if (!(p.kappa > 0.0 && p.kappa <= 1.0)) bad("kappa must lie in (0, 1]");
  if (p.alpha_dim != 2 && p.alpha_dim != 3) bad("alpha_dim must be 2 or 3");
  if (!std::isfinite(p.CI)) bad("CI must be finite");
  if (model == ModelKind::Dz && std::abs(p.n.norm() - 1.0) > 1e-12) bad("Dz direction n must be a unit vector");
  for (double v : {p.CM, p.w, p.Dz, p.U0, p.alpha, p.beta})
    if (!std::isfinite(v)) bad("parameters must be finite");
}

std::vector<std::string> ModelSpec::warnings() const {
  std::vector<std::string> w;
  if (model == ModelKind::NEM) {
    const double bound = params.alpha_dim == 2 ? 4.0 : 8.0;
    if (params.U0 > bound * params.CI)
      w.push_back("NEM: U0 exceeds the stability bound " + std::to_string(bound) + " CI");
  }
  return w;
}

DiffusionTensor spatial_diffusion(DiffusionKind kind, const Mat3& a, const FlowKinematics& flow,
                                  const ModelParams& p, bool with_derivatives) {
  const auto& E = basis_tensors();
  const Mat3 I = Mat3::Identity();
  DiffusionTensor out;
  for (auto& m : out.dC) m.setZero();
  switch (kind) {
    case DiffusionKind::PT: {
      if (!(flow.gmag > 0.0)) throw ZeroShearRate("PT diffusion needs a nonzero shear rate");
      const Mat3& D = flow.gammadot;
      const double g = flow.gmag;
      out.C = p.b[0] * I + p.b[1] * a + p.b[2] * a * a.transpose() + p.b[3] / g * D +
              p.b[4] / (g * g) * D * D.transpose();
      if (with_derivatives)
        for (int r = 0; r < 5; ++r) out.dC[r] = p.b[1] * E[r] + p.b[2] * (a * E[r] + E[r] * a);
      break;
    }
    case DiffusionKind::iARD: {
      if (p.iard_form == IardForm::StrainRate) {
        if (!(flow.gmag > 0.0)) throw ZeroShearRate("iARD diffusion needs a nonzero shear rate");
        const Mat3& D = flow.gammadot;
        out.C = p.CI * (I - 4.0 * p.CM * D * D.transpose() / (flow.gmag * flow.gmag));
      } else {
        const double LL = ddot(flow.L, flow.L);
        if (!(LL > 0.0)) throw ZeroShearRate("iARD diffusion needs a nonzero velocity gradient");
        out.C = p.CI * (I - p.CM * flow.L * flow.L.transpose() / LL);
      }
      break;
    }
    case DiffusionKind::pARD:
    case DiffusionKind::MRD_D: {
      const Mat3 Dd = p.D.asDiagonal();
      if (!with_derivatives) {
        const EigenSystem e = eig_desc(a);
        out.C = p.CI * e.Phi * Dd * e.Phi.transpose();
        break;
      }
      const EigenSensitivities s = eig_sensitivities(a);
      const Mat3& P = s.eig.Phi;
      out.C = p.CI * P * Dd * P.transpose();
      for (int r = 0; r < 5; ++r)
        out.dC[r] = p.CI * (s.dPhi[r] * Dd * P.transpose() + P * Dd * s.dPhi[r].transpose());
      break;
    }
    case DiffusionKind::WPT:
      out.C = p.CI * ((1.0 - p.w) * I + p.w * a * a.transpose());
      if (with_derivatives)
        for (int r = 0; r < 5; ++r) out.dC[r] = p.CI * p.w * (a * E[r] + E[r] * a);
      break;
    case DiffusionKind::Dz:
      out.C = p.CI * (I - (1.0 - p.Dz) * p.n * p.n.transpose());
      break;
  }
  return out;
}

RscTensors rsc_tensors(const Mat3& a, bool with_derivatives) {
  RscTensors out;
  const EigenSensitivities s = eig_sensitivities(a, SensitivityMethod::Nelson,
                                                 Normalization::mass(), with_derivatives);
  const Mat3& P = s.eig.Phi;
  Tensor4 q[3];
  for (int i = 0; i < 3; ++i) {
    q[i] = quad(P.col(i));
    out.M4 += q[i];
    out.L4.axpy(s.eig.lambda(i), q[i]);
  }
  if (!with_derivatives) return out;
  for (int r = 0; r < 5; ++r) {
    Tensor4 dM, dL;
    for (int m = 0; m < 3; ++m) {
      const Vec3 p = P.col(m);
      const Vec3 dp = s.dPhi[r].col(m);
      Tensor4 dq;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          for (int k = 0; k < 3; ++k)
            for (int l = 0; l < 3; ++l)
              dq(i, j, k, l) = dp(i) * p(j) * p(k) * p(l) + p(i) * dp(j) * p(k) * p(l) +
                               p(i) * p(j) * dp(k) * p(l) + p(i) * p(j) * p(k) * dp(l);
      dM += dq;
      dL.axpy(s.eig.lambda(m), dq);
      dL.axpy(s.dLambda(m, r), q[m]);
    }
    out.dM4[r] = dM;
    out.dL4[r] = dL;
  }
  out.has_derivatives = true;
  return out;
}

RprCorrection rpr_correction(const Mat3& rateX, const std::array<Mat3, 5>* dRateX, const Mat3& a,
                             double alpha, double beta) {
  RprCorrection out;
  for (auto& m : out.dCorr) m.setZero();
  if (alpha == 0.0) return out;
  const bool jac = dRateX != nullptr;
  const EigenSensitivities s = eig_sensitivities(a, SensitivityMethod::Nelson,
                                                 Normalization::mass(), jac);
  const Mat3& P = s.eig.Phi;
  const Mat3 Fp = P.transpose() * rateX * P;
  const Vec3 ld = Fp.diagonal();
  Vec3 V;
  for (int k = 0; k < 3; ++k) {
    const int l = (k + 1) % 3, m = (k + 2) % 3;
    V(k) = alpha * (ld(k) - beta * (ld(k) * ld(k) + 2.0 * ld(l) * ld(m)));
  }
  out.corr = -P * V.asDiagonal() * P.transpose();
  if (!jac) return out;
  for (int r = 0; r < 5; ++r) {
    const Mat3& dP = s.dPhi[r];
    const Mat3 dFp = dP.transpose() * rateX * P + P.transpose() * (*dRateX)[r] * P +
                     P.transpose() * rateX * dP;
    const Vec3 dl = dFp.diagonal();
    Vec3 dV;
    for (int k = 0; k < 3; ++k) {
      const int l = (k + 1) % 3, m = (k + 2) % 3;
      dV(k) = alpha * (dl(k) - beta * (2.0 * ld(k) * dl(k) + 2.0 * (dl(l) * ld(m) + ld(l) * dl(m))));
    }
    out.dCorr[r] = -(dP * V.asDiagonal() * P.transpose() + P * dV.asDiagonal() * P.transpose() +
                     P * V.asDiagonal() * dP.transpose());
  }
  return out;
}

Mat3 model_rate(const ModelSpec& spec, const Mat3& a, const FlowKinematics& flow) {
  return evaluate(spec, a, flow, false).F;
}

RateAndJacobian model_jacobian(const ModelSpec& spec, const Mat3& a, const FlowKinematics& flow) {
  const Rate r = evaluate(spec, a, flow, true);
  RateAndJacobian out;
  out.rate = r.F;
  out.R = contract(r.F);
  for (int k = 0; k < 5; ++k) out.J.col(k) = contract(r.dF[k]);
  return out;
}

}  // namespace fo
