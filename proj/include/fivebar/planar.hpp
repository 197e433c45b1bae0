#pragma once

#include <vector>

#include "fivebar/types.hpp"

namespace fivebar {

/// One inverse-kinematics branch of the flat linkage.
struct PlanarIkSolution {
  double theta2 = 0.0;
  double theta3 = 0.0;
  double theta4 = 0.0;
  double theta5 = 0.0;
  PlanarPoint c, d;
  WorkingMode mode;        // eps1 follows the sign of u_P
  bool on_boundary = false;  // some leg sits where its two branches merge
};

struct PlanarFkResult {
  PlanarPoint p;
  JointState joints;  // theta1 = 0
};

/// Euclidean mismatch of the two chains that must meet at P:
/// |(a + l1 e(theta2) + l2 e(theta4)) - (b + l1 e(theta3) + l2 e(theta5))|.
double loop_residual(const DesignParams& design, const JointState& joints);

/// Closes the loop from the actuated angles. gamma picks which of the two
/// intersection points of the distal circles becomes P.
Result<PlanarFkResult> planar_fk(const DesignParams& design, double theta2, double theta3,
                                 AssemblyMode assembly);

/// Branch-resolved inverse kinematics. Rejects points where a leg is exactly
/// at a branch merge (OnSerialBoundary) or out of reach (Unreachable).
Result<PlanarIkSolution> planar_ik(const DesignParams& design, PlanarPoint p, int eps2, int eps3);

/// Same construction, but a leg at its branch merge yields the (unique)
/// merged solution flagged on_boundary instead of an error.
Result<PlanarIkSolution> planar_ik_relaxed(const DesignParams& design, PlanarPoint p, int eps2,
                                           int eps3);

/// All distinct inverse-kinematics branches at p (at most four, fewer when a
/// leg boundary merges a pair; those carry on_boundary).
std::vector<PlanarIkSolution> ik_all(const DesignParams& design, PlanarPoint p);

}  // namespace fivebar
