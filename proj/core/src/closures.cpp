#include "fiberorient/closures.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "fiberorient/tensor.hpp"

namespace fo {
namespace {

struct NameEntry {
  ClosureKind kind;
  std::string_view tag;
};

constexpr NameEntry kNames[] = {
    {ClosureKind::QDR, "QDR"},         {ClosureKind::LIN, "LIN"},
    {ClosureKind::HYB1, "HYB1"},       {ClosureKind::HYB2, "HYB2"},
    {ClosureKind::ISO, "ISO"},         {ClosureKind::SF2, "SF2"},
    {ClosureKind::HL1, "HL1"},         {ClosureKind::HL2, "HL2"},
    {ClosureKind::ORS, "ORS"},         {ClosureKind::ORT, "ORT"},
    {ClosureKind::ORW, "ORW"},         {ClosureKind::ORW2, "ORW2"},
    {ClosureKind::ORW3, "ORW3"},       {ClosureKind::NAT_MID, "NAT-MID"},
    {ClosureKind::NAT_EXT, "NAT-EXT"}, {ClosureKind::WTZ, "WTZ"},
    {ClosureKind::LAR32, "LAR32"},     {ClosureKind::VST, "VST"},
    {ClosureKind::FFLAR4, "FFLAR4"},   {ClosureKind::LAR4, "LAR4"},
    {ClosureKind::IBOF, "IBOF"},
};

std::string normalize_tag(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '_' || c == '-' || c == ' ') continue;
    out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  }
  return out;
}

double ddot(const Mat3& a, const Mat3& b) { return (a.array() * b.array()).sum(); }

inline double kd(int i, int j) { return i == j ? 1.0 : 0.0; }

// sum_i w_i T_i(a) for the eight composite terms.
Tensor4 hl_terms(const std::array<double, 8>& w, const Mat3& a, const Mat3& a2) {
  Tensor4 t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          double s = w[0] * kd(i, j) * kd(k, l);
          s += w[1] * (kd(i, k) * kd(j, l) + kd(i, l) * kd(j, k));
          s += w[2] * (kd(i, j) * a(k, l) + a(i, j) * kd(k, l));
          s += w[3] * (a(i, k) * kd(j, l) + a(j, l) * kd(i, k) + a(i, l) * kd(j, k) +
                       a(j, k) * kd(i, l));
          s += w[4] * a(i, j) * a(k, l);
          s += w[5] * (a(i, k) * a(j, l) + a(i, l) * a(j, k));
          s += w[6] * (kd(i, j) * a2(k, l) + a2(i, j) * kd(k, l));
          s += w[7] * a2(i, j) * a2(k, l);
          t(i, j, k, l) = s;
        }
  return t;
}

// Directional derivative of sum_i w_i T_i(a) along E with the weights frozen.
Tensor4 hl_terms_linearized(const std::array<double, 8>& w, const Mat3& a, const Mat3& a2,
                            const Mat3& E, const Mat3& dA2) {
  Tensor4 t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          double s = w[2] * (kd(i, j) * E(k, l) + E(i, j) * kd(k, l));
          s += w[3] * (E(i, k) * kd(j, l) + E(j, l) * kd(i, k) + E(i, l) * kd(j, k) +
                       E(j, k) * kd(i, l));
          s += w[4] * (E(i, j) * a(k, l) + a(i, j) * E(k, l));
          s += w[5] * (E(i, k) * a(j, l) + a(i, k) * E(j, l) + E(i, l) * a(j, k) +
                       a(i, l) * E(j, k));
          s += w[6] * (kd(i, j) * dA2(k, l) + dA2(i, j) * kd(k, l));
          s += w[7] * (dA2(i, j) * a2(k, l) + a2(i, j) * dA2(k, l));
          t(i, j, k, l) = s;
        }
  return t;
}

HlBetas constant_betas(std::array<double, 8> b) {
  HlBetas out;
  out.beta = b;
  return out;
}

ClosureOutput hybrid(int variant, const Mat3& a, bool with_derivatives) {
  const HybridFactor h = hybrid_factor(variant, a);
  const ClosureOutput q = hl_composite(hl_betas(ClosureKind::QDR, a), a, with_derivatives);
  const ClosureOutput l = hl_composite(hl_betas(ClosureKind::LIN, a), a, with_derivatives);
  ClosureOutput out;
  out.A4 = h.f * q.A4 + (1.0 - h.f) * l.A4;
  if (with_derivatives) {
    const Tensor4 diff = q.A4 - l.A4;
    for (int r = 0; r < 5; ++r) {
      out.dA4[r] = h.f * q.dA4[r] + (1.0 - h.f) * l.dA4[r];
      out.dA4[r].axpy(h.df[r], diff);
    }
    out.has_derivatives = true;
  }
  return out;
}

ClosureOutput ebof(ClosureKind kind, const Mat3& a, bool with_derivatives) {
  const EigenSystem eig = eig_desc(a);
  const EbofPrincipal p = ebof_principal(kind, eig.lambda(0), eig.lambda(1));
  if (!with_derivatives) return ebof_reconstruct(p, eig, nullptr);
  const EigenSensitivities s = eig_sensitivities(eig);
  return ebof_reconstruct(p, eig, &s);
}

ClosureOutput ibof(const Mat3& a, bool with_derivatives) {
  const IbofBetas b = ibof_betas(a);
  const Mat3 I = Mat3::Identity();
  const Mat3 a2 = a * a;
  const Tensor4 G[6] = {dyad(I, I), dyad(I, a), dyad(a, a), dyad(I, a2), dyad(a, a2), dyad(a2, a2)};
  Tensor4 raw;
  for (int n = 0; n < 6; ++n) raw.axpy(b.beta[n], G[n]);
  ClosureOutput out;
  out.A4 = sym24(raw);
  if (!with_derivatives) return out;
  const auto& E = basis_tensors();
  for (int r = 0; r < 5; ++r) {
    const Mat3 dA2 = a * E[r] + E[r] * a;
    Tensor4 d;
    for (int n = 0; n < 6; ++n) d.axpy(b.dbeta[n][r], G[n]);
    d.axpy(b.beta[1], dyad(I, E[r]));
    d.axpy(b.beta[2], dyad(E[r], a) + dyad(a, E[r]));
    d.axpy(b.beta[3], dyad(I, dA2));
    d.axpy(b.beta[4], dyad(E[r], a2) + dyad(a, dA2));
    d.axpy(b.beta[5], dyad(dA2, a2) + dyad(a2, dA2));
    out.dA4[r] = sym24(d);
  }
  out.has_derivatives = true;
  return out;
}

}  // namespace

std::string_view to_string(ClosureKind k) {
  for (const auto& e : kNames)
    if (e.kind == k) return e.tag;
  return "?";
}

ClosureKind closure_from_string(std::string_view name) {
  const std::string n = normalize_tag(name);
  if (n == "NAT1" || n == "NATMID") return ClosureKind::NAT_MID;
  if (n == "NAT2" || n == "NATEXT") return ClosureKind::NAT_EXT;
  for (const auto& e : kNames)
    if (normalize_tag(e.tag) == n) return e.kind;
  throw UnknownKind("unknown closure '" + std::string(name) + "'");
}

const std::vector<ClosureKind>& all_closures() {
  static const std::vector<ClosureKind> v = [] {
    std::vector<ClosureKind> out;
    for (const auto& e : kNames) out.push_back(e.kind);
    return out;
  }();
  return v;
}

const std::vector<ClosureKind>& jacobian_grid_closures() {
  using K = ClosureKind;
  static const std::vector<ClosureKind> v = {
      K::HYB1, K::HYB2, K::ISO,   K::LIN,     K::QDR,  K::SF2,     K::HL1,
      K::HL2,  K::IBOF, K::ORS,   K::ORT,     K::NAT_MID, K::ORW, K::NAT_EXT,
      K::WTZ,  K::LAR32, K::ORW3, K::VST,     K::FFLAR4, K::LAR4};
  return v;
}

bool is_ebof(ClosureKind k) {
  switch (k) {
    case ClosureKind::ORS: case ClosureKind::ORT: case ClosureKind::ORW:
    case ClosureKind::ORW2: case ClosureKind::ORW3: case ClosureKind::NAT_MID:
    case ClosureKind::NAT_EXT: case ClosureKind::WTZ: case ClosureKind::LAR32:
    case ClosureKind::VST: case ClosureKind::FFLAR4: case ClosureKind::LAR4:
      return true;
    default:
      return false;
  }
}

bool is_hinch_leal(ClosureKind k) {
  switch (k) {
    case ClosureKind::ISO: case ClosureKind::LIN: case ClosureKind::QDR:
    case ClosureKind::SF2: case ClosureKind::HL1: case ClosureKind::HL2:
      return true;
    default:
      return false;
  }
}

bool satisfies_normalization(ClosureKind k) {
  return k == ClosureKind::QDR || k == ClosureKind::LIN || k == ClosureKind::HYB1 ||
         k == ClosureKind::HYB2 || k == ClosureKind::IBOF || is_ebof(k);
}

HybridFactor hybrid_factor(int variant, const Mat3& a) {
  HybridFactor h;
  const auto& E = basis_tensors();
  if (variant == 1) {
    h.f = 1.5 * ddot(a, a) - 0.5;
    for (int r = 0; r < 5; ++r) h.df[r] = 3.0 * ddot(a, E[r]);
  } else if (variant == 2) {
    h.f = 1.0 - 27.0 * a.determinant();
    const Mat3 c = cofactor(a);
    for (int r = 0; r < 5; ++r) h.df[r] = -27.0 * ddot(c, E[r]);
  } else {
    throw UnknownKind("hybrid variant must be 1 or 2");
  }
  return h;
}

HlBetas hl_betas(ClosureKind kind, const Mat3& a) {
  const auto& E = basis_tensors();
  const double y = ddot(a, a);
  std::array<double, 5> dy{};
  for (int r = 0; r < 5; ++r) dy[r] = 2.0 * ddot(a, E[r]);
  switch (kind) {
    case ClosureKind::ISO:
      return constant_betas({1.0 / 15, 1.0 / 15, 0, 0, 0, 0, 0, 0});
    case ClosureKind::LIN:
      return constant_betas({-1.0 / 35, -1.0 / 35, 1.0 / 7, 1.0 / 7, 0, 0, 0, 0});
    case ClosureKind::QDR:
      return constant_betas({0, 0, 0, 0, 1, 0, 0, 0});
    case ClosureKind::HL1:
      return constant_betas({0, 0, 2.0 / 5, 0, -1.0 / 5, 3.0 / 5, -2.0 / 5, 0});
    case ClosureKind::SF2: {
      HlBetas b = constant_betas({0, 0, 0, 0, 1, 1, 0, -2.0 / y});
      for (int r = 0; r < 5; ++r) b.dbeta[7][r] = 2.0 / (y * y) * dy[r];
      return b;
    }
    case ClosureKind::HL2: {
      const double gap = 1.0 - y;
      if (gap < 1e-10) throw Singularity("HL2: a:a = 1, alpha derivative is singular");
      const double alpha = std::exp(2.0 * (1.0 - 3.0 * y) / gap);
      const double dalpha_dy = -4.0 * alpha / (gap * gap);
      HlBetas b = constant_betas({26.0 * alpha / 315, 26.0 * alpha / 315, 16.0 * alpha / 63,
                                  -4.0 * alpha / 21, 1, 1, 0, -2.0 / y});
      for (int r = 0; r < 5; ++r) {
        const double da = dalpha_dy * dy[r];
        b.dbeta[0][r] = 26.0 / 315 * da;
        b.dbeta[1][r] = 26.0 / 315 * da;
        b.dbeta[2][r] = 16.0 / 63 * da;
        b.dbeta[3][r] = -4.0 / 21 * da;
        b.dbeta[7][r] = 2.0 / (y * y) * dy[r];
      }
      return b;
    }
    default:
      throw UnknownKind("hl_betas: " + std::string(to_string(kind)) + " is not a composite closure");
  }
}

ClosureOutput hl_composite(const HlBetas& b, const Mat3& a, bool with_derivatives) {
  const Mat3 a2 = a * a;
  ClosureOutput out;
  out.A4 = hl_terms(b.beta, a, a2);
  if (!with_derivatives) return out;
  const auto& E = basis_tensors();
  for (int r = 0; r < 5; ++r) {
    std::array<double, 8> w{};
    bool any = false;
    for (int n = 0; n < 8; ++n) {
      w[n] = b.dbeta[n][r];
      any = any || w[n] != 0.0;
    }
    out.dA4[r] = hl_terms_linearized(b.beta, a, a2, E[r], a * E[r] + E[r] * a);
    if (any) out.dA4[r] += hl_terms(w, a, a2);
  }
  out.has_derivatives = true;
  return out;
}

ClosureOutput eval_closure(ClosureKind kind, const Mat3& a, bool with_derivatives) {
  switch (kind) {
    case ClosureKind::HYB1:
      return hybrid(1, a, with_derivatives);
    case ClosureKind::HYB2:
      return hybrid(2, a, with_derivatives);
    case ClosureKind::IBOF:
      return ibof(a, with_derivatives);
    case ClosureKind::HL2:
      if (!with_derivatives && 1.0 - ddot(a, a) < 1e-10) {
        // alpha -> 0 in the aligned limit.
        const double y = ddot(a, a);
        return hl_composite(constant_betas({0, 0, 0, 0, 1, 1, 0, -2.0 / y}), a, false);
      }
      return hl_composite(hl_betas(kind, a), a, with_derivatives);
    default:
      break;
  }
  if (is_hinch_leal(kind)) return hl_composite(hl_betas(kind, a), a, with_derivatives);
  if (is_ebof(kind)) return ebof(kind, a, with_derivatives);
  throw UnknownKind("unknown closure kind");
}

}  // namespace fo
