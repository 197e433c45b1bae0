#include "fivebar/hybrid.hpp"

#include <algorithm>
#include <cmath>

namespace fivebar {
namespace {

Vec3 to_vec(const WorldPoint& p) { return {p.x, p.y, p.z}; }

}  // namespace

PlaneBasis plane_basis(double theta1) {
  const double c = std::cos(theta1), s = std::sin(theta1);
  PlaneBasis basis;
  basis.u = {c, 0.0, -s};
  basis.v = {0.0, 1.0, 0.0};
  basis.n = {s, 0.0, c};
  return basis;
}

WorldPoint world_of_planar(double theta1, PlanarPoint q) {
  const double c = std::cos(theta1), s = std::sin(theta1);
  return {q.u * c, q.v, -q.u * s};
}

Posture make_posture(const DesignParams& design, const JointState& joints) {
  Posture posture;
  posture.design = design;
  posture.joints = normalized(joints);
  posture.c = pivot_a(design) + design.l1 * planar_dir(joints.theta2);
  posture.d = pivot_b(design) + design.l1 * planar_dir(joints.theta3);
  posture.p_plane = posture.c + design.l2 * planar_dir(joints.theta4);
  posture.p_world = world_of_planar(joints.theta1, posture.p_plane);
  return posture;
}

double posture_residual(const Posture& posture) {
  const DesignParams& dp = posture.design;
  const JointState& j = posture.joints;
  const PlanarPoint c_chain = pivot_a(dp) + dp.l1 * planar_dir(j.theta2);
  const PlanarPoint d_chain = pivot_b(dp) + dp.l1 * planar_dir(j.theta3);
  const PlanarPoint p_via_c = posture.c + dp.l2 * planar_dir(j.theta4);
  const PlanarPoint p_via_d = posture.d + dp.l2 * planar_dir(j.theta5);
  const WorldPoint p_map = world_of_planar(j.theta1, posture.p_plane);
  double worst = 0.0;
  worst = std::max(worst, norm(posture.c - c_chain) / dp.l1);
  worst = std::max(worst, norm(posture.d - d_chain) / dp.l1);
  worst = std::max(worst, norm(posture.p_plane - p_via_c) / dp.l2);
  worst = std::max(worst, norm(posture.p_plane - p_via_d) / dp.l2);
  worst = std::max(worst, norm(posture.p_world - p_map) / (dp.l1 + dp.l2));
  return worst;
}

AssemblyMode assembly_of(const JointState& joints) {
  return {std::sin(joints.theta4 - joints.theta5) >= 0.0 ? +1 : -1};
}

Result<Posture> hybrid_fk(const DesignParams& design, double theta1, double theta2, double theta3,
                          AssemblyMode assembly) {
  auto flat = planar_fk(design, theta2, theta3, assembly);
  if (!flat) return flat.error();
  JointState joints = flat->joints;
  joints.theta1 = normalize_angle(theta1);
  return make_posture(design, joints);
}

Result<Posture> hybrid_ik(const DesignParams& design, WorldPoint p, WorkingMode mode) {
  const double radius = std::hypot(p.x, p.z);
  const double scale = 0.5 * design.l0 + design.l1 + design.l2;
  if (radius <= 1e-12 * scale) return Err::AxisDegenerate;

  // eps1 picks on which side of the axis the plane coordinate u lands; both
  // signs are realizable for any off-axis p by turning the base half a turn.
  const double theta1 = std::atan2(-mode.eps1 * p.z, mode.eps1 * p.x);
  const PlanarPoint p_plane{mode.eps1 * radius, p.y};

  auto flat = planar_ik(design, p_plane, mode.eps2, mode.eps3);
  if (!flat) return flat.error();
  JointState joints{theta1, flat->theta2, flat->theta3, flat->theta4, flat->theta5};
  return make_posture(design, joints);
}

Jacobians jacobians(const Posture& posture) {
  const DesignParams& dp = posture.design;
  const JointState& j = posture.joints;
  const PlaneBasis basis = plane_basis(j.theta1);
  const Vec3 p = to_vec(posture.p_world);
  const Vec3 c = to_vec(world_of_planar(j.theta1, posture.c));
  const Vec3 d = to_vec(world_of_planar(j.theta1, posture.d));

  Jacobians out;
  out.a.row(0) = dp.l2 * basis.n;
  out.a.row(1) = p - c;
  out.a.row(2) = p - d;

  const double u_p = posture.p_plane.u;
  out.b = Mat3::Zero();
  out.b(0, 0) = -dp.l2 * u_p;
  out.b(1, 1) = -dp.l1 * dp.l2 * std::sin(j.theta2 - j.theta4);
  out.b(2, 2) = -dp.l1 * dp.l2 * std::sin(j.theta3 - j.theta5);
  return out;
}

double det_a_norm(const Posture& posture) {
  const Mat3 a = jacobians(posture).a;
  const double l2 = posture.design.l2;
  return a.determinant() / (l2 * l2 * l2);
}

Vec3 b_diag_normalized(const Posture& posture) {
  const JointState& j = posture.joints;
  return {-posture.p_plane.u / posture.design.l1, -std::sin(j.theta2 - j.theta4),
          -std::sin(j.theta3 - j.theta5)};
}

Result<CartesianRates> velocity_forward(const Posture& posture, const JointRates& rates) {
  if (std::abs(det_a_norm(posture)) < kSingularTol) return Err::ParallelSingular;
  const Jacobians jac = jacobians(posture);
  const Vec3 theta_dot{rates.theta1, rates.theta2, rates.theta3};
  const Vec3 p_dot = jac.a.partialPivLu().solve(jac.b * theta_dot);
  return CartesianRates{p_dot.x(), p_dot.y(), p_dot.z()};
}

Result<JointRates> velocity_inverse(const Posture& posture, const CartesianRates& rates) {
  const Vec3 diag = b_diag_normalized(posture);
  if (diag.cwiseAbs().minCoeff() < kSingularTol) return Err::SerialSingular;
  const Jacobians jac = jacobians(posture);
  const Vec3 rhs = jac.a * Vec3{rates.x, rates.y, rates.z};
  return JointRates{rhs(0) / jac.b(0, 0), rhs(1) / jac.b(1, 1), rhs(2) / jac.b(2, 2)};
}

}  // namespace fivebar
