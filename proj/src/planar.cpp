#include "fivebar/planar.hpp"

#include <algorithm>
#include <cmath>

namespace fivebar {
namespace {

// Intersection of circle(center0, r0) with circle(center1, r1) on the given
// side of the center line, via the stable half-chord construction: foot of
// the chord at distance q from center0 along the center line, half-chord
// h = sqrt(r0^2 - q^2). h^2 within -1e-12 * r0^2 of zero is clamped to zero.
struct ChordHit {
  PlanarPoint point;
  double h = 0.0;     // half-chord length
  double dist = 0.0;  // center distance
};

Result<ChordHit> circle_side_point(PlanarPoint center0, double r0, PlanarPoint center1, double r1,
                                   int side) {
  const PlanarPoint delta = center1 - center0;
  const double d = norm(delta);
  const double scale = r0 + r1;
  if (d <= 1e-15 * scale) {
    // Concentric circles: either no intersection or a whole circle of them.
    return std::abs(r0 - r1) <= kSingularTol * scale ? Err::OnSerialBoundary : Err::Unreachable;
  }
  const double q = (d * d + r0 * r0 - r1 * r1) / (2.0 * d);
  double h2 = r0 * r0 - q * q;
  if (h2 < 0.0) {
    if (h2 < -1e-12 * r0 * r0) return Err::Unreachable;
    h2 = 0.0;
  }
  const double h = std::sqrt(h2);
  const PlanarPoint e = (1.0 / d) * delta;
  const PlanarPoint e_perp{-e.v, e.u};
  return ChordHit{center0 + q * e + (side * h) * e_perp, h, d};
}

Result<PlanarIkSolution> ik_impl(const DesignParams& dp, PlanarPoint p, int eps2, int eps3,
                                 bool allow_boundary) {
  const PlanarPoint a = pivot_a(dp);
  const PlanarPoint b = pivot_b(dp);

  // Concentric-circle hits (P on a pivot with l1 == l2) stay errors even when
  // boundaries are allowed: there is no unique merged solution to report.
  auto leg_a = circle_side_point(a, dp.l1, p, dp.l2, eps2);
  if (!leg_a) return leg_a.error();
  auto leg_b = circle_side_point(b, dp.l1, p, dp.l2, eps3);
  if (!leg_b) return leg_b.error();

  // sin(theta2 - theta4) = eps2 * h * |AP| / (l1 l2); at the branch merge the
  // sine vanishes and the two eps2 branches coincide.
  const double sin_scale = dp.l1 * dp.l2;
  const bool boundary_a = leg_a->h * leg_a->dist <= kSingularTol * sin_scale;
  const bool boundary_b = leg_b->h * leg_b->dist <= kSingularTol * sin_scale;
  if ((boundary_a || boundary_b) && !allow_boundary) return Err::OnSerialBoundary;

  PlanarIkSolution sol;
  sol.c = leg_a->point;
  sol.d = leg_b->point;
  sol.theta2 = std::atan2(sol.c.v - a.v, sol.c.u - a.u);
  sol.theta4 = std::atan2(p.v - sol.c.v, p.u - sol.c.u);
  sol.theta3 = std::atan2(sol.d.v - b.v, sol.d.u - b.u);
  sol.theta5 = std::atan2(p.v - sol.d.v, p.u - sol.d.u);
  sol.mode = {p.u >= 0.0 ? +1 : -1, eps2, eps3};
  sol.on_boundary = boundary_a || boundary_b;
  return sol;
}

}  // namespace

double loop_residual(const DesignParams& design, const JointState& joints) {
  const PlanarPoint via_a =
      pivot_a(design) + design.l1 * planar_dir(joints.theta2) + design.l2 * planar_dir(joints.theta4);
  const PlanarPoint via_b =
      pivot_b(design) + design.l1 * planar_dir(joints.theta3) + design.l2 * planar_dir(joints.theta5);
  return norm(via_a - via_b);
}

Result<PlanarFkResult> planar_fk(const DesignParams& design, double theta2, double theta3,
                                 AssemblyMode assembly) {
  const PlanarPoint c = pivot_a(design) + design.l1 * planar_dir(theta2);
  const PlanarPoint d = pivot_b(design) + design.l1 * planar_dir(theta3);
  const double cd = norm(d - c);
  if (cd <= kSingularTol * design.l2) return Err::DegenerateAssembly;

  // P = C + q e + side h e_perp with sin(theta4 - theta5) = -2 q h side / l2^2,
  // so side = -gamma realizes the requested assembly branch.
  auto hit = circle_side_point(c, design.l2, d, design.l2, -assembly.gamma);
  if (!hit) return Err::UnreachableAssembly;

  PlanarFkResult out;
  out.p = hit->point;
  out.joints.theta1 = 0.0;
  out.joints.theta2 = normalize_angle(theta2);
  out.joints.theta3 = normalize_angle(theta3);
  out.joints.theta4 = std::atan2(out.p.v - c.v, out.p.u - c.u);
  out.joints.theta5 = std::atan2(out.p.v - d.v, out.p.u - d.u);
  return out;
}

Result<PlanarIkSolution> planar_ik(const DesignParams& design, PlanarPoint p, int eps2, int eps3) {
  return ik_impl(design, p, eps2, eps3, /*allow_boundary=*/false);
}

Result<PlanarIkSolution> planar_ik_relaxed(const DesignParams& design, PlanarPoint p, int eps2,
                                           int eps3) {
  return ik_impl(design, p, eps2, eps3, /*allow_boundary=*/true);
}

std::vector<PlanarIkSolution> ik_all(const DesignParams& design, PlanarPoint p) {
  // A leg at its branch merge makes the two sign choices coincide; geometric
  // dedup reports that solution once (labelled with the first, +1, sign).
  std::vector<PlanarIkSolution> out;
  for (PlanarMode pm : PlanarMode::all()) {
    auto sol = ik_impl(design, p, pm.eps2, pm.eps3, /*allow_boundary=*/true);
    if (!sol) continue;
    const bool dup = std::any_of(out.begin(), out.end(), [&](const PlanarIkSolution& t) {
      return norm(sol->c - t.c) <= 1e-12 * design.l1 && norm(sol->d - t.d) <= 1e-12 * design.l1;
    });
    if (!dup) out.push_back(*sol);
  }
  return out;
}

}  // namespace fivebar
