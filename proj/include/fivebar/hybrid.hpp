#pragma once

#include <Eigen/Dense>

#include "fivebar/planar.hpp"
#include "fivebar/types.hpp"

namespace fivebar {

using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;

struct JointRates {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double theta3 = 0.0;
};

struct CartesianRates {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// World-frame basis of the mechanism plane at base angle theta1. u rotates
/// with the base, v stays along the pivot line (the world y axis), and
/// n = u x v is the plane normal (the world +z axis at theta1 = 0).
struct PlaneBasis {
  Vec3 u, v, n;
};

PlaneBasis plane_basis(double theta1);

/// Maps plane coordinates into the world: (u cos t1, v, -u sin t1).
WorldPoint world_of_planar(double theta1, PlanarPoint q);

/// Builds the full configuration from joint angles (the loop is taken as
/// closed; see posture_residual for the consistency check).
Posture make_posture(const DesignParams& design, const JointState& joints);

/// Largest relative violation of the kinematic constraints: the four link
/// chains and the plane-to-world mapping.
double posture_residual(const Posture& posture);

/// gamma = sign of sin(theta4 - theta5), +1 on the degenerate tie.
AssemblyMode assembly_of(const JointState& joints);

Result<Posture> hybrid_fk(const DesignParams& design, double theta1, double theta2, double theta3,
                          AssemblyMode assembly);

/// Places the mechanism plane through p (theta1 from eps1 and the direction
/// of p off the axis), then solves the planar problem in branch (eps2, eps3).
Result<Posture> hybrid_ik(const DesignParams& design, WorldPoint p, WorkingMode mode);

/// First-order motion model a * p_dot = b * theta_dot with
///   a = [ l2 n^T ; (p - c)^T ; (p - d)^T ]   (world coordinates)
///   b = l1 l2 diag(-u_P / l1, -sin(theta2 - theta4), -sin(theta3 - theta5))
/// The global -1 on b's diagonal is this library's fixed sign convention.
struct Jacobians {
  Mat3 a, b;
};

Jacobians jacobians(const Posture& posture);

/// det(a) / l2^3; lies in [-1, 1] and vanishes exactly at the parallel
/// (flat or coincident) singularities.
double det_a_norm(const Posture& posture);

/// Diagonal of b / (l1 l2): (-u_P / l1, -sin(theta2 - theta4),
/// -sin(theta3 - theta5)). Any entry near zero is a serial singularity.
Vec3 b_diag_normalized(const Posture& posture);

Result<CartesianRates> velocity_forward(const Posture& posture, const JointRates& rates);
Result<JointRates> velocity_inverse(const Posture& posture, const CartesianRates& rates);

}  // namespace fivebar
