#include "fivebar/singularity.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <limits>

namespace fivebar {

const char* singularity_name(SingularityType type) {
  switch (type) {
    case SingularityType::None: return "none";
    case SingularityType::SerialLegB: return "serial_leg_b";
    case SingularityType::SerialLegA: return "serial_leg_a";
    case SingularityType::SerialAxis: return "serial_axis";
    case SingularityType::ParallelFlat: return "parallel_flat";
    case SingularityType::ParallelCoincident: return "parallel_coincident";
  }
  return "unknown";
}

SingularityReport classify(const Posture& posture, double tol) {
  const DesignParams& dp = posture.design;
  const JointState& j = posture.joints;

  SingularityReport report;
  report.delta = j.theta4 - j.theta5;
  report.det_a_norm = det_a_norm(posture);
  const Vec3 diag = b_diag_normalized(posture);
  report.det_b_norm = diag(0) * diag(1) * diag(2);
  report.kappa = condition_number_closed(report.delta);

  const double joint_gap = norm(posture.d - posture.c) / dp.l2;
  const bool coincident = joint_gap <= tol;
  // Flat means the distal links are parallel with C and D still distinct;
  // coincident C = D makes delta meaningless, so the two types exclude.
  const bool flat = !coincident && std::abs(std::sin(report.delta)) <= tol;
  const bool axis = std::abs(posture.p_plane.u) / dp.l1 <= tol;
  const bool leg_a = std::abs(std::sin(j.theta2 - j.theta4)) <= tol;
  const bool leg_b = std::abs(std::sin(j.theta3 - j.theta5)) <= tol;

  auto mark = [&report](bool active, SingularityType type) {
    if (active) {
      report.flags |= 1u << static_cast<int>(type);
      report.kind = type;  // callers mark in increasing severity order
    }
  };
  mark(leg_b, SingularityType::SerialLegB);
  mark(leg_a, SingularityType::SerialLegA);
  mark(axis, SingularityType::SerialAxis);
  mark(flat, SingularityType::ParallelFlat);
  mark(coincident, SingularityType::ParallelCoincident);
  return report;
}

double condition_number_closed(double delta) {
  const double s = std::abs(std::sin(delta));
  if (s < kKappaInfSinTol) return std::numeric_limits<double>::infinity();
  return (1.0 + std::abs(std::cos(delta))) / s;
}

double condition_number_closed(const Posture& posture) {
  return condition_number_closed(posture.joints.theta4 - posture.joints.theta5);
}

double condition_number_svd(const Mat3& m) {
  Eigen::JacobiSVD<Mat3> svd(m);
  const double s_max = svd.singularValues()(0);
  const double s_min = svd.singularValues()(2);
  if (s_min <= kSvdRatioTol * s_max) return std::numeric_limits<double>::infinity();
  return s_max / s_min;
}

double condition_number_svd(const Posture& posture) {
  return condition_number_svd(jacobians(posture).a);
}

bool is_isotropic(const Posture& posture, double tol) {
  const double kappa = condition_number_closed(posture);
  return std::isfinite(kappa) && kappa - 1.0 <= tol;
}

}  // namespace fivebar
