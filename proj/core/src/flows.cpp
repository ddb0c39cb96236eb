#include "fiberorient/flows.hpp"

#include <cctype>

namespace fo {
namespace {

struct FlowName {
  FlowKind kind;
  std::string_view tag;
  std::string_view cli;
};

constexpr FlowName kFlows[] = {
    {FlowKind::SS, "SS", "simple-shear"}, {FlowKind::SUA, "SUA", "sua"},
    {FlowKind::UA, "UA", "ua"},           {FlowKind::BA, "BA", "ba"},
    {FlowKind::PST, "PST", "pst"},        {FlowKind::SBA, "SBA", "sba"},
    {FlowKind::TA, "TA", "ta"},           {FlowKind::STA, "STA", "sta"},
    {FlowKind::L1, "L1", "l1"},           {FlowKind::L2, "L2", "l2"},
};

Vec5 diag_guess(double a11, double a22) { return (Vec5() << a11, 0.0, 0.0, a22, 0.0).finished(); }

}  // namespace

double default_eps(FlowKind kind, double gamma) { return kind == FlowKind::L2 ? gamma / 10.0 : 1.0; }

Mat3 velocity_gradient(const FlowPreset& p) {
  const double g = p.gamma;
  const double e = p.eps.value_or(default_eps(p.kind, g));
  Mat3 L = Mat3::Zero();
  switch (p.kind) {
    case FlowKind::SS:
    case FlowKind::L1:
      L(0, 1) = g;
      break;
    case FlowKind::SUA:
      L.diagonal() << -e, e, 2.0 * e;
      L(0, 1) = g;
      break;
    case FlowKind::UA:
      L.diagonal() << 2.0 * e, -e, -e;
      break;
    case FlowKind::BA:
      L.diagonal() << e, e, -2.0 * e;
      break;
    case FlowKind::PST:
    case FlowKind::L2:
      L.diagonal() << -e, e, 0.0;
      L(0, 1) = g;
      break;
    case FlowKind::SBA:
      L.diagonal() << e, e, -2.0 * e;
      L(0, 1) = g;
      break;
    case FlowKind::TA:
      L = e * Mat3::Identity();
      break;
    case FlowKind::STA:
      L = e * Mat3::Identity();
      L(0, 1) = g;
      break;
  }
  return L;
}

FlowKinematics build_flow(const FlowPreset& preset) { return decompose(velocity_gradient(preset)); }

Vec5 default_guess(FlowKind kind) {
  switch (kind) {
    case FlowKind::SS: case FlowKind::L1: case FlowKind::L2: return diag_guess(0.35, 0.55);
    case FlowKind::SUA: case FlowKind::PST: return diag_guess(0.70, 0.20);
    case FlowKind::UA: return diag_guess(0.10, 0.10);
    case FlowKind::BA: case FlowKind::TA: case FlowKind::STA: return diag_guess(0.40, 0.40);
    case FlowKind::SBA: return diag_guess(0.20, 0.70);
  }
  return diag_guess(1.0 / 3.0, 1.0 / 3.0);
}

std::string_view to_string(FlowKind k) {
  for (const auto& f : kFlows)
    if (f.kind == k) return f.tag;
  return "?";
}

std::string_view cli_name(FlowKind k) {
  for (const auto& f : kFlows)
    if (f.kind == k) return f.cli;
  return "?";
}

FlowKind flow_from_string(std::string_view name) {
  std::string n;
  for (char c : name) n.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  for (const auto& f : kFlows) {
    std::string tag;
    for (char c : f.tag) tag.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (n == tag || n == f.cli) return f.kind;
  }
  if (n == "simple_shear" || n == "simpleshear") return FlowKind::SS;
  throw UnknownKind("unknown flow '" + std::string(name) + "'");
}

const std::vector<FlowKind>& all_flows() {
  static const std::vector<FlowKind> v = [] {
    std::vector<FlowKind> out;
    for (const auto& f : kFlows) out.push_back(f.kind);
    return out;
  }();
  return v;
}

const std::vector<FlowCase>& flow_robustness_cases() {
  using K = FlowKind;
  static const std::vector<FlowCase> v = {
      {"SS", {K::SS, 1.0, 0.0}},     {"SUA1", {K::SUA, 1.0, 0.1}}, {"SUA2", {K::SUA, 1.0, 1.0}},
      {"UA", {K::UA, 0.0, 1.0}},     {"BA", {K::BA, 0.0, 1.0}},    {"PST1", {K::PST, 1.0, 0.1}},
      {"PST2", {K::PST, 1.0, 1.0}},  {"SBA1", {K::SBA, 1.0, 0.5}}, {"SBA2", {K::SBA, 1.0, 0.2}},
      {"TA", {K::TA, 0.0, 1.0}},     {"STA1", {K::STA, 1.0, 0.5}}, {"STA2", {K::STA, 1.0, 0.2}},
  };
  return v;
}

}  // namespace fo
