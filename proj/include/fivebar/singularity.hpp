#pragma once

#include "fivebar/hybrid.hpp"
#include "fivebar/types.hpp"

namespace fivebar {

enum class SingularityType {
  None = 0,
  SerialLegB,          // distal pair of leg B folded or stretched
  SerialLegA,          // distal pair of leg A folded or stretched
  SerialAxis,          // plate point on the base rotation axis (u = 0)
  ParallelFlat,        // distal links parallel, C and D distinct
  ParallelCoincident,  // distal joint centers C and D coincide
};

const char* singularity_name(SingularityType type);

struct SingularityReport {
  // Most severe active kind; severity: coincident > flat > axis > leg A > leg B.
  SingularityType kind = SingularityType::None;
  unsigned flags = 0;  // bit (1 << type) per simultaneously active kind
  double det_a_norm = 0.0;  // det A / l2^3 = -sin(delta)
  double det_b_norm = 0.0;  // det B / (l1 l2)^3
  double delta = 0.0;       // theta4 - theta5
  double kappa = 1.0;       // condition number of A, +inf at parallel types

  bool has(SingularityType type) const { return (flags >> static_cast<int>(type)) & 1u; }
  bool singular() const { return kind != SingularityType::None; }
};

// Classifies the posture against every singularity condition at `tol`
// (thresholds on |sin(theta2-theta4)|, |sin(theta3-theta5)|, |u_P|/l1,
// |sin delta| and |CD|/l2, all dimensionless).
SingularityReport classify(const Posture& posture, double tol = kSingularTol);

// Condition number of A (2-norm), closed form. The product A A^T depends on
// the posture only through delta = theta4 - theta5, with eigenvalues
// l2^2 * {1 - |cos delta|, 1, 1 + |cos delta|}, so
//   kappa = sqrt((1 + |cos delta|) / (1 - |cos delta|)) = (1 + |cos delta|) / |sin delta|.
// The second form is exact at the floating-point pi/2 and avoids cancellation
// near the parallel types. Returns +inf when |sin delta| < kKappaInfSinTol.
double condition_number_closed(double delta);
double condition_number_closed(const Posture& posture);

// Condition number from singular values; +inf when the smallest falls below
// kSvdRatioTol times the largest. Independent check of the closed form.
double condition_number_svd(const Mat3& m);
double condition_number_svd(const Posture& posture);

// True when A A^T is a scaled identity at the given tolerance, i.e. the
// distal links are perpendicular and the velocity map has kappa = 1.
bool is_isotropic(const Posture& posture, double tol = 1e-9);

}  // namespace fivebar
