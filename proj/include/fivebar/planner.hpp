#pragma once

#include <vector>

#include "fivebar/hybrid.hpp"
#include "fivebar/types.hpp"

namespace fivebar {

// Serial boundaries a plan may cross; crossing one flips the matching sign
// of the working mode (axis: eps1, leg A stretch: eps2, leg B stretch: eps3).
enum class CrossingBoundary { Axis = 0, LegAStretch = 1, LegBStretch = 2 };
const char* crossing_name(CrossingBoundary boundary);

struct PlanWaypoint {
  WorldPoint point;
  WorkingMode mode;
};

struct CrossingPoint {
  WorldPoint point;
  CrossingBoundary boundary;
};

struct ModePlan {
  // Consecutive waypoints either share a mode or meet at a crossing point.
  std::vector<PlanWaypoint> waypoints;
  std::vector<CrossingPoint> crossings;
  double total_length = 0.0;     // polyline length in the mechanism plane
  double validation_step = 0.0;  // sampling distance used to certify it
};

// Plans a path from start to goal that realizes the requested mode change.
// Same mode: straight segment, with a raster-search detour when the segment
// leaves the mode's workspace. Differing signs: one crossing per differing
// sign, each placed on its boundary at the sampled point nearest to the
// start-goal chord (ties toward smaller v, then smaller u) and ordered along
// the chord, with the base angle interpolated over arc length. Every
// returned plan is certified by strict IK sampling at validation_step.
Result<ModePlan> plan_mode_change(const DesignParams& design, WorldPoint start,
                                  WorkingMode start_mode, WorldPoint goal, WorkingMode goal_mode);

struct ModeComparison {
  WorkingMode mode;
  bool feasible = false;   // whole path strictly reachable in the mode
  double kappa_max = 0.0;  // NaN when infeasible
  double kappa_mean = 0.0;
};

// Samples the planar polyline (vertices plus every l2/100 of arc length) in
// each mode and reports condition-number statistics, ranked feasible-first
// by kappa_max, ties by mode index.
std::vector<ModeComparison> compare_modes_along(const DesignParams& design,
                                                const std::vector<PlanarPoint>& path,
                                                const std::vector<WorkingMode>& modes);

}  // namespace fivebar
