#include <doctest.h>

#include <cmath>

#include "fivebar/planner.hpp"
#include "fivebar/singularity.hpp"
#include "test_util.hpp"

using namespace fivebar;

namespace {

const DesignParams kRef{2.0, 1.0, std::sqrt(2.0)};

// Distance of a crossing from the serial boundary it claims to sit on,
// normalized by the design scale.
double boundary_error(const DesignParams& d, const CrossingPoint& crossing) {
  const double r = std::hypot(crossing.point.x, crossing.point.z);
  const double v = crossing.point.y;
  const double reach = d.l1 + d.l2;
  switch (crossing.boundary) {
    case CrossingBoundary::Axis: return r / d.l1;
    case CrossingBoundary::LegAStretch:
      return std::abs(std::hypot(r, v + 0.5 * d.l0) - reach) / reach;
    case CrossingBoundary::LegBStretch:
      return std::abs(std::hypot(r, v - 0.5 * d.l0) - reach) / reach;
  }
  return 1e9;
}

}  // namespace

TEST_CASE("trivial plan: same point, same mode") {
  const WorkingMode mode{+1, -1, +1};
  auto plan = plan_mode_change(kRef, {2.0, 0.0, 0.0}, mode, {2.0, 0.0, 0.0}, mode);
  REQUIRE(plan.ok());
  CHECK(plan->crossings.empty());
  CHECK(plan->total_length == doctest::Approx(0.0));
  REQUIRE(!plan->waypoints.empty());
  CHECK(plan->waypoints.front().mode == mode);
}

TEST_CASE("straight same-mode plan keeps the mode at every waypoint") {
  const WorkingMode mode{+1, -1, +1};
  auto plan = plan_mode_change(kRef, {2.0, 0.0, 0.0}, mode, {1.2, 0.8, 0.0}, mode);
  REQUIRE(plan.ok());
  CHECK(plan->crossings.empty());
  CHECK(plan->total_length > 0.0);
  for (const PlanWaypoint& wp : plan->waypoints) CHECK(wp.mode == mode);
  const WorldPoint& last = plan->waypoints.back().point;
  CHECK(norm(last - WorldPoint{1.2, 0.8, 0.0}) < 1e-9);
}

TEST_CASE("leg branch change crosses the stretch circle") {
  const WorkingMode from{+1, -1, +1};
  const WorkingMode to{+1, +1, +1};
  auto plan = plan_mode_change(kRef, {2.0, 0.0, 0.0}, from, {2.0, 0.0, 0.0}, to);
  REQUIRE(plan.ok());
  REQUIRE(plan->crossings.size() == 1);
  CHECK(plan->crossings[0].boundary == CrossingBoundary::LegAStretch);
  CHECK(boundary_error(kRef, plan->crossings[0]) <= 1e-6);
  CHECK(plan->total_length > 0.0);
  CHECK(plan->waypoints.front().mode == from);
  CHECK(plan->waypoints.back().mode == to);
  // The mode flips exactly once along the waypoint string.
  int flips = 0;
  for (size_t i = 1; i < plan->waypoints.size(); ++i) {
    if (!(plan->waypoints[i].mode == plan->waypoints[i - 1].mode)) ++flips;
  }
  CHECK(flips == 1);
}

TEST_CASE("half-plane change crosses the rotation axis") {
  const WorkingMode from{+1, +1, +1};
  const WorkingMode to{-1, +1, +1};
  auto plan = plan_mode_change(kRef, {2.0, 0.0, 0.0}, from, {-2.0, 0.0, 0.0}, to);
  REQUIRE(plan.ok());
  REQUIRE(plan->crossings.size() == 1);
  CHECK(plan->crossings[0].boundary == CrossingBoundary::Axis);
  CHECK(boundary_error(kRef, plan->crossings[0]) <= 1e-6);
  CHECK(plan->waypoints.back().mode == to);
}

TEST_CASE("double sign change takes two crossings ordered along the chord") {
  const WorkingMode from{+1, -1, +1};
  const WorkingMode to{-1, +1, +1};
  auto plan = plan_mode_change(kRef, {2.0, 0.0, 0.0}, from, {-2.0, 0.0, 0.0}, to);
  REQUIRE(plan.ok());
  CHECK(plan->crossings.size() == 2);
  for (const CrossingPoint& crossing : plan->crossings) {
    CHECK(boundary_error(kRef, crossing) <= 1e-6);
  }
  CHECK(plan->waypoints.front().mode == from);
  CHECK(plan->waypoints.back().mode == to);
}

TEST_CASE("plan endpoints must be reachable in their modes") {
  const WorkingMode mode{+1, +1, +1};
  CHECK(plan_mode_change(kRef, {10.0, 0.0, 0.0}, mode, {2.0, 0.0, 0.0}, mode).error() ==
        Err::Unreachable);
  CHECK(plan_mode_change(kRef, {2.0, 0.0, 0.0}, mode, {10.0, 0.0, 0.0}, mode).error() ==
        Err::Unreachable);
}

TEST_CASE("axis change fails cleanly when the axis is out of reach") {
  // Thin annuli that never touch the rotation axis: |AP| at u = 0 stays
  // outside [l1 - l2 .. l1 + l2] for every v the other leg allows.
  const DesignParams gapped{2.0, 0.2, 1.5};
  auto start = hybrid_ik(gapped, {1.0, 0.0, 0.0}, {+1, +1, +1});
  REQUIRE(start.ok());  // the design itself is workable off-axis
  auto plan =
      plan_mode_change(gapped, {1.0, 0.0, 0.0}, {+1, +1, +1}, {-1.0, 0.0, 0.0}, {-1, +1, +1});
  CHECK(plan.error() == Err::NoCrossing);
}

TEST_CASE("reversing start and goal reverses the crossing order") {
  const WorkingMode from{+1, -1, +1};
  const WorkingMode to{+1, +1, +1};
  const WorldPoint a{2.0, 0.0, 0.0};
  const WorldPoint b{1.3, 0.6, 0.0};
  auto forward = plan_mode_change(kRef, a, from, b, to);
  auto backward = plan_mode_change(kRef, b, to, a, from);
  REQUIRE(forward.ok());
  REQUIRE(backward.ok());
  REQUIRE(forward->crossings.size() == 1);
  REQUIRE(backward->crossings.size() == 1);
  const WorldPoint& fc = forward->crossings[0].point;
  const WorldPoint& bc = backward->crossings[0].point;
  CHECK(norm(fc - bc) < 1e-9);
}

TEST_CASE("planned waypoints validate under strict inverse kinematics") {
  const WorkingMode from{+1, -1, +1};
  const WorkingMode to{+1, +1, +1};
  auto plan = plan_mode_change(kRef, {2.0, 0.0, 0.0}, from, {1.8, -0.4, 0.3}, to);
  REQUIRE(plan.ok());
  CHECK(plan->validation_step == doctest::Approx(kRef.l2 / 100.0));
  for (const PlanWaypoint& wp : plan->waypoints) {
    const double r = std::hypot(wp.point.x, wp.point.z);
    if (r / kRef.l1 < 1e-6) continue;  // crossing the axis itself
    auto posture = hybrid_ik(kRef, wp.point, wp.mode);
    // Waypoints at a leg crossing sit on the serial boundary; both are legal.
    if (!posture.ok()) CHECK(posture.error() == Err::OnSerialBoundary);
  }
}

TEST_CASE("mode comparison ranks the isotropic branch first") {
  // Short path around the derived isotropic point of the reference linkage.
  std::vector<PlanarPoint> path{{1.9, -0.1}, {2.0, 0.0}, {2.05, 0.15}};
  const std::vector<WorkingMode> modes{{+1, -1, +1}, {+1, +1, +1}, {-1, +1, +1}};
  const auto ranked = compare_modes_along(kRef, path, modes);
  REQUIRE(ranked.size() == 3);

  CHECK(ranked[0].mode == WorkingMode{+1, -1, +1});
  CHECK(ranked[0].feasible);
  CHECK(ranked[0].kappa_max < ranked[1].kappa_max);
  CHECK(ranked[0].kappa_mean <= ranked[0].kappa_max);
  CHECK(ranked[0].kappa_max == doctest::Approx(1.0).epsilon(0.2));

  CHECK(ranked[1].mode == WorkingMode{+1, +1, +1});
  CHECK(ranked[1].feasible);
  CHECK(ranked[1].kappa_max == doctest::Approx(2.0).epsilon(0.2));

  // u > 0 path is unreachable for an eps1 = -1 mode.
  CHECK(ranked[2].mode == WorkingMode{-1, +1, +1});
  CHECK(!ranked[2].feasible);
  CHECK(std::isnan(ranked[2].kappa_max));
  CHECK(std::isnan(ranked[2].kappa_mean));
}

TEST_CASE("mode comparison is deterministic and order independent") {
  std::vector<PlanarPoint> path{{1.5, -0.5}, {1.8, 0.4}};
  const std::vector<WorkingMode> modes{{+1, +1, +1}, {+1, -1, +1}, {+1, -1, -1}, {+1, +1, -1}};
  auto a = compare_modes_along(kRef, path, modes);
  std::vector<WorkingMode> shuffled{{+1, -1, -1}, {+1, +1, +1}, {+1, +1, -1}, {+1, -1, +1}};
  auto b = compare_modes_along(kRef, path, shuffled);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].mode == b[i].mode);
    if (a[i].feasible) {
      CHECK(a[i].kappa_max == b[i].kappa_max);
      CHECK(a[i].kappa_mean == b[i].kappa_mean);
    }
  }
}
