#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fiberorient/models.hpp"

namespace fo {

enum class FlowKind { SS, SUA, UA, BA, PST, SBA, TA, STA, L1, L2 };

struct FlowPreset {
  FlowKind kind = FlowKind::SS;
  double gamma = 1.0;            // shear rate
  std::optional<double> eps;     // elongation rate; see default_eps
};

// Elongation rate used when a preset leaves eps unset: gamma/10 for L2, 1 otherwise.
double default_eps(FlowKind kind, double gamma);

Mat3 velocity_gradient(const FlowPreset& preset);
FlowKinematics build_flow(const FlowPreset& preset);

// Diagonal starting guess for Newton, grouped by flow type. The solver adds
// the small off-diagonal seed.
Vec5 default_guess(FlowKind kind);

std::string_view to_string(FlowKind k);     // "SS", "SUA", ...
std::string_view cli_name(FlowKind k);      // "simple-shear", "sua", ...
FlowKind flow_from_string(std::string_view name);
const std::vector<FlowKind>& all_flows();

struct FlowCase {
  std::string label;  // e.g. "SUA1"
  FlowPreset preset;
};
// The twelve flow-robustness cases: SS, SUA (gamma/eps = 10, 1), UA, BA,
// PST (10, 1), SBA (2, 5), TA, STA (2, 5), all with gamma = 1 or eps = 1.
const std::vector<FlowCase>& flow_robustness_cases();

}  // namespace fo
