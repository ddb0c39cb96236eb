#include <cctype>
#include <cmath>
#include <limits>

#include <Eigen/SVD>

#include "fiberorient/tensor.hpp"
#include "fiberorient/validation.hpp"

namespace fo {

std::string_view to_string(FdKind k) {
  switch (k) {
    case FdKind::Forward: return "forward";
    case FdKind::Backward: return "backward";
    case FdKind::Central2: return "central-2";
    case FdKind::Central4: return "central-4";
    case FdKind::OneSided3: return "one-sided-3";
  }
  return "?";
}

FdKind fd_kind_from_string(std::string_view name) {
  for (FdKind k : {FdKind::Forward, FdKind::Backward, FdKind::Central2, FdKind::Central4,
                   FdKind::OneSided3})
    if (name == to_string(k)) return k;
  if (name == "central") return FdKind::Central2;
  throw UnknownKind("unknown finite-difference scheme '" + std::string(name) + "'");
}

Mat5 fd_jacobian(const RateFn& f, const Vec5& v, const FdScheme& scheme) {
  const double tiny = std::numeric_limits<double>::epsilon();  // 2^-52
  Mat5 J;
  const Vec5 f0 = (scheme.kind == FdKind::Forward || scheme.kind == FdKind::Backward ||
                   scheme.kind == FdKind::OneSided3)
                      ? f(v)
                      : Vec5::Zero();
  for (int r = 0; r < 5; ++r) {
    const double h = std::abs(v(r)) > tiny ? scheme.step * std::abs(v(r)) : scheme.step;
    auto at = [&](double s) {
      Vec5 x = v;
      x(r) += s * h;
      return f(x);
    };
    switch (scheme.kind) {
      case FdKind::Forward: J.col(r) = (at(1) - f0) / h; break;
      case FdKind::Backward: J.col(r) = (f0 - at(-1)) / h; break;
      case FdKind::Central2: J.col(r) = (at(1) - at(-1)) / (2.0 * h); break;
      case FdKind::Central4:
        J.col(r) = (at(-2) - 8.0 * at(-1) + 8.0 * at(1) - at(2)) / (12.0 * h);
        break;
      case FdKind::OneSided3: J.col(r) = (-3.0 * f0 + 4.0 * at(1) - at(2)) / (2.0 * h); break;
    }
  }
  return J;
}

double jac_error(const Mat5& J1, const Mat5& J2) {
  return Eigen::JacobiSVD<Mat5>(J1 - J2).singularValues()(0);
}

double jacobian_fd_error(const ModelSpec& spec, const FlowKinematics& flow, const Vec5& state,
                         const FdScheme& scheme) {
  const Mat5 J = model_jacobian(spec, unpack(state), flow).J;
  const Mat5 Jfd = fd_jacobian(
      [&](const Vec5& x) { return contract(model_rate(spec, unpack(x), flow)); }, state, scheme);
  return jac_error(J, Jfd);
}

}  // namespace fo
