#include "fivebar/types.hpp"

#include <cmath>

namespace fivebar {

const char* err_name(Err e) {
  switch (e) {
    case Err::None: return "None";
    case Err::NonPositiveLink: return "NonPositiveLink";
    case Err::NegativeBase: return "NegativeBase";
    case Err::NonFinite: return "NonFinite";
    case Err::Unreachable: return "Unreachable";
    case Err::OnSerialBoundary: return "OnSerialBoundary";
    case Err::OnSerialSingularity: return "OnSerialSingularity";
    case Err::AxisDegenerate: return "AxisDegenerate";
    case Err::UnreachableAssembly: return "UnreachableAssembly";
    case Err::DegenerateAssembly: return "DegenerateAssembly";
    case Err::ParallelSingular: return "ParallelSingular";
    case Err::SerialSingular: return "SerialSingular";
    case Err::InvalidGrid: return "InvalidGrid";
    case Err::EmptySearchSpace: return "EmptySearchSpace";
    case Err::NoCrossing: return "NoCrossing";
    case Err::ValidationFailed: return "ValidationFailed";
    case Err::Io: return "Io";
  }
  return "Unknown";
}

Result<DesignParams> validate_design(double l0, double l1, double l2) {
  if (!std::isfinite(l0) || !std::isfinite(l1) || !std::isfinite(l2)) return Err::NonFinite;
  if (l0 < 0.0) return Err::NegativeBase;
  if (l1 <= 0.0 || l2 <= 0.0) return Err::NonPositiveLink;
  return DesignParams{l0, l1, l2};
}

double normalize_angle(double a) {
  double r = std::remainder(a, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

JointState normalized(const JointState& j) {
  return {normalize_angle(j.theta1), normalize_angle(j.theta2), normalize_angle(j.theta3),
          normalize_angle(j.theta4), normalize_angle(j.theta5)};
}

WorkingMode WorkingMode::from_index(int i) {
  return {(i & 4) ? -1 : +1, (i & 2) ? -1 : +1, (i & 1) ? -1 : +1};
}

std::array<WorkingMode, 8> WorkingMode::all() {
  std::array<WorkingMode, 8> out;
  for (int i = 0; i < 8; ++i) out[i] = from_index(i);
  return out;
}

std::string WorkingMode::str() const {
  std::string s(3, '+');
  s[0] = eps1 < 0 ? '-' : '+';
  s[1] = eps2 < 0 ? '-' : '+';
  s[2] = eps3 < 0 ? '-' : '+';
  return s;
}

Result<WorkingMode> WorkingMode::parse(std::string_view s) {
  if (s.size() != 3) return Err::NonFinite;
  WorkingMode m;
  int* eps[3] = {&m.eps1, &m.eps2, &m.eps3};
  for (int i = 0; i < 3; ++i) {
    if (s[i] == '+') *eps[i] = +1;
    else if (s[i] == '-') *eps[i] = -1;
    else return Err::NonFinite;
  }
  return m;
}

std::array<PlanarMode, 4> PlanarMode::all() {
  return {PlanarMode{+1, +1}, PlanarMode{+1, -1}, PlanarMode{-1, +1}, PlanarMode{-1, -1}};
}

Result<WorkingMode> working_mode_of(const JointState& joints, const DesignParams& design) {
  const double q1 = u_of(design, joints) / design.l1;
  const double q2 = std::sin(joints.theta2 - joints.theta4);
  const double q3 = std::sin(joints.theta3 - joints.theta5);
  if (std::abs(q1) <= kSingularTol || std::abs(q2) <= kSingularTol || std::abs(q3) <= kSingularTol)
    return Err::OnSerialSingularity;
  return WorkingMode{q1 > 0 ? +1 : -1, q2 > 0 ? +1 : -1, q3 > 0 ? +1 : -1};
}

}  // namespace fivebar
