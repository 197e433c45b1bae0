#include "fivebar/planner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>

#include "fivebar/planar.hpp"
#include "fivebar/singularity.hpp"
#include "fivebar/workspace.hpp"

namespace fivebar {
namespace {

constexpr int kCircleSamples = 2880;
constexpr int kAxisSamples = 2881;
constexpr int kDetourGrid = 201;
// Cells used by the detour search keep this margin from parallel
// singularities so the straight hops between neighbours stay valid.
constexpr double kDetourDetTol = 1e-6;

double segment_distance(PlanarPoint p, PlanarPoint a, PlanarPoint b) {
  const PlanarPoint ab = b - a;
  const double len_sq = dot(ab, ab);
  if (len_sq == 0.0) return norm(p - a);
  const double t = std::clamp(dot(p - a, ab) / len_sq, 0.0, 1.0);
  return norm(p - (a + t * ab));
}

double chord_parameter(PlanarPoint q, PlanarPoint s, PlanarPoint g) {
  const PlanarPoint sg = g - s;
  const double len_sq = dot(sg, sg);
  return len_sq == 0.0 ? 0.0 : dot(q - s, sg) / len_sq;
}

bool strictly_in_annulus(double dist, double lo, double hi) { return dist > lo && dist < hi; }

// One strictly-interior sample check: in the mode's half-plane, cleanly
// invertible there, and away from parallel singularity.
bool sample_ok(const DesignParams& dp, PlanarPoint q, WorkingMode mode, double det_tol) {
  if (q.u * mode.eps1 <= 0.0) return false;
  auto sol = planar_ik(dp, q, mode.eps2, mode.eps3);
  if (!sol) return false;
  return std::abs(std::sin(sol->theta4 - sol->theta5)) >= det_tol;
}

bool validate_segment(const DesignParams& dp, PlanarPoint from, PlanarPoint to, WorkingMode mode,
                      double step) {
  const double len = norm(to - from);
  if (len == 0.0) return true;
  const int count = std::max(1, static_cast<int>(std::ceil(len / step)));
  for (int k = 1; k < count; ++k) {
    const PlanarPoint q = from + (static_cast<double>(k) / count) * (to - from);
    if (!sample_ok(dp, q, mode, kSingularTol)) return false;
  }
  return true;
}

struct Candidate {
  PlanarPoint q;
  CrossingBoundary boundary;
};

// All sampled points of one boundary whose non-crossing constraints hold
// strictly. eps1_gate = 0 disables the half-plane filter (used when the
// plan changes eps1 as well; validation backstops the heuristic).
std::vector<PlanarPoint> boundary_candidates(const DesignParams& dp, CrossingBoundary boundary,
                                             int eps1_gate) {
  const double lo = std::abs(dp.l1 - dp.l2);
  const double hi = dp.l1 + dp.l2;
  const PlanarPoint a = pivot_a(dp), b = pivot_b(dp);
  std::vector<PlanarPoint> out;
  if (boundary == CrossingBoundary::Axis) {
    const double vhalf = 0.5 * dp.l0 + hi;
    for (int k = 0; k < kAxisSamples; ++k) {
      const PlanarPoint q{0.0, -vhalf + 2.0 * vhalf * k / (kAxisSamples - 1)};
      if (strictly_in_annulus(norm(q - a), lo, hi) && strictly_in_annulus(norm(q - b), lo, hi)) {
        out.push_back(q);
      }
    }
    return out;
  }
  const PlanarPoint center = boundary == CrossingBoundary::LegAStretch ? a : b;
  const PlanarPoint other = boundary == CrossingBoundary::LegAStretch ? b : a;
  for (int k = 0; k < kCircleSamples; ++k) {
    const double phi = -kPi + 2.0 * kPi * k / kCircleSamples;
    const PlanarPoint q = center + hi * planar_dir(phi);
    if (!strictly_in_annulus(norm(q - other), lo, hi)) continue;
    if (eps1_gate != 0 && q.u * eps1_gate <= 0.0) continue;
    out.push_back(q);
  }
  return out;
}

Result<PlanarPoint> pick_crossing(const DesignParams& dp, CrossingBoundary boundary,
                                  int eps1_gate, PlanarPoint s, PlanarPoint g) {
  const std::vector<PlanarPoint> candidates = boundary_candidates(dp, boundary, eps1_gate);
  if (candidates.empty()) return Err::NoCrossing;
  const PlanarPoint* best = &candidates.front();
  double best_dist = segment_distance(*best, s, g);
  for (const PlanarPoint& q : candidates) {
    const double d = segment_distance(q, s, g);
    if (d < best_dist || (d == best_dist && (q.v < best->v || (q.v == best->v && q.u < best->u)))) {
      best = &q;
      best_dist = d;
    }
  }
  return *best;
}

// Breadth-first detour over a raster of strictly-valid cells of one mode.
class DetourGrid {
 public:
  explicit DetourGrid(const DesignParams& dp) : dp_(dp) {
    const double r = dp.l1 + dp.l2;
    grid_ = GridSpec{-r, r, -(0.5 * dp.l0 + r), 0.5 * dp.l0 + r, kDetourGrid};
  }

  std::optional<std::vector<PlanarPoint>> find_path(PlanarPoint from, PlanarPoint to,
                                                    WorkingMode mode) {
    const std::vector<char>& free = free_cells(mode);
    const int start = cell_of(from), goal = cell_of(to);
    if (!free[start] || !free[goal]) return std::nullopt;

    std::vector<int> parent(grid_.cell_count(), -1);
    std::deque<int> queue{start};
    parent[start] = start;
    while (!queue.empty() && parent[goal] == -1) {
      const int cur = queue.front();
      queue.pop_front();
      const int iu = cur % grid_.n, iv = cur / grid_.n;
      const int steps[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
      for (const auto& step : steps) {
        const int ju = iu + step[0], jv = iv + step[1];
        if (ju < 0 || ju >= grid_.n || jv < 0 || jv >= grid_.n) continue;
        const int next = grid_.index(ju, jv);
        if (parent[next] != -1 || !free[next]) continue;
        parent[next] = cur;
        queue.push_back(next);
      }
    }
    if (parent[goal] == -1) return std::nullopt;

    std::vector<PlanarPoint> path{to};
    for (int cur = goal; cur != start; cur = parent[cur]) {
      path.push_back({grid_.u_at(cur % grid_.n), grid_.v_at(cur / grid_.n)});
    }
    path.push_back(from);
    std::reverse(path.begin(), path.end());
    return path;
  }

 private:
  int cell_of(PlanarPoint p) const {
    const auto clamp_idx = [this](double x, double lo, double step) {
      return std::clamp(static_cast<int>(std::floor((x - lo) / step)), 0, grid_.n - 1);
    };
    return grid_.index(clamp_idx(p.u, grid_.umin, grid_.du()),
                       clamp_idx(p.v, grid_.vmin, grid_.dv()));
  }

  const std::vector<char>& free_cells(WorkingMode mode) {
    std::vector<char>& free = free_[mode.index()];
    if (!free.empty()) return free;
    free.resize(grid_.cell_count());
    for (int iv = 0; iv < grid_.n; ++iv) {
      for (int iu = 0; iu < grid_.n; ++iu) {
        const PlanarPoint q{grid_.u_at(iu), grid_.v_at(iv)};
        free[grid_.index(iu, iv)] = sample_ok(dp_, q, mode, kDetourDetTol) ? 1 : 0;
      }
    }
    return free;
  }

  DesignParams dp_;
  GridSpec grid_;
  std::vector<char> free_[8];
};

struct PlaneWaypoint {
  PlanarPoint q;
  WorkingMode mode;
};

}  // namespace

const char* crossing_name(CrossingBoundary boundary) {
  switch (boundary) {
    case CrossingBoundary::Axis: return "axis";
    case CrossingBoundary::LegAStretch: return "leg_a_stretch";
    case CrossingBoundary::LegBStretch: return "leg_b_stretch";
  }
  return "unknown";
}

Result<ModePlan> plan_mode_change(const DesignParams& design, WorldPoint start,
                                  WorkingMode start_mode, WorldPoint goal,
                                  WorkingMode goal_mode) {
  if (auto check = validate_design(design.l0, design.l1, design.l2); !check) return check.error();
  const auto start_posture = hybrid_ik(design, start, start_mode);
  if (!start_posture) return Err::Unreachable;
  const auto goal_posture = hybrid_ik(design, goal, goal_mode);
  if (!goal_posture) return Err::Unreachable;

  const PlanarPoint s = start_posture->p_plane;
  const PlanarPoint g = goal_posture->p_plane;
  const double theta1_s = start_posture->joints.theta1;
  const double step = design.l2 / 100.0;

  // One crossing per differing sign, at the sampled boundary point nearest
  // to the start-goal chord, visited in chord order.
  const bool eps1_changes = start_mode.eps1 != goal_mode.eps1;
  struct PlannedCrossing {
    PlanarPoint q;
    CrossingBoundary boundary;
    double t;
  };
  std::vector<PlannedCrossing> crossings;
  const auto require = [&](bool differs, CrossingBoundary boundary, int gate) -> Result<bool> {
    if (!differs) return false;
    auto q = pick_crossing(design, boundary, gate, s, g);
    if (!q) return q.error();
    crossings.push_back({*q, boundary, chord_parameter(*q, s, g)});
    return true;
  };
  if (auto r = require(eps1_changes, CrossingBoundary::Axis, 0); !r) return r.error();
  const int leg_gate = eps1_changes ? 0 : start_mode.eps1;
  if (auto r = require(start_mode.eps2 != goal_mode.eps2, CrossingBoundary::LegAStretch, leg_gate);
      !r) {
    return r.error();
  }
  if (auto r = require(start_mode.eps3 != goal_mode.eps3, CrossingBoundary::LegBStretch, leg_gate);
      !r) {
    return r.error();
  }
  std::stable_sort(crossings.begin(), crossings.end(),
                   [](const PlannedCrossing& x, const PlannedCrossing& y) { return x.t < y.t; });

  // Assemble the plane polyline segment by segment, flipping one sign at
  // each crossing; detour through the raster when a straight leg fails.
  std::vector<PlaneWaypoint> plan{{s, start_mode}};
  std::vector<size_t> crossing_waypoint;  // index into plan, per crossing
  DetourGrid detour(design);
  WorkingMode mode = start_mode;
  PlanarPoint from = s;
  const auto extend_to = [&](PlanarPoint to) -> bool {
    if (validate_segment(design, from, to, mode, step)) return true;
    auto path = detour.find_path(from, to, mode);
    if (!path) return false;
    for (size_t i = 1; i + 1 < path->size(); ++i) {
      if (!validate_segment(design, (*path)[i - 1], (*path)[i], mode, step)) return false;
      plan.push_back({(*path)[i], mode});
    }
    return validate_segment(design, plan.back().q, to, mode, step);
  };
  for (const PlannedCrossing& crossing : crossings) {
    if (!extend_to(crossing.q)) return Err::ValidationFailed;
    from = crossing.q;
    switch (crossing.boundary) {
      case CrossingBoundary::Axis: mode.eps1 = -mode.eps1; break;
      case CrossingBoundary::LegAStretch: mode.eps2 = -mode.eps2; break;
      case CrossingBoundary::LegBStretch: mode.eps3 = -mode.eps3; break;
    }
    plan.push_back({crossing.q, mode});
    crossing_waypoint.push_back(plan.size() - 1);
  }
  const bool degenerate = crossings.empty() && norm(g - s) == 0.0;
  if (!degenerate) {
    if (!extend_to(g)) return Err::ValidationFailed;
    plan.push_back({g, mode});
  }

  // Base angle follows arc length; plane waypoints then map to world space.
  std::vector<double> arc(plan.size(), 0.0);
  for (size_t i = 1; i < plan.size(); ++i) {
    arc[i] = arc[i - 1] + norm(plan[i].q - plan[i - 1].q);
  }
  const double total = arc.back();
  const double dtheta1 =
      std::remainder(goal_posture->joints.theta1 - theta1_s, 2.0 * kPi);
  ModePlan result;
  result.validation_step = step;
  result.total_length = total;
  for (size_t i = 0; i < plan.size(); ++i) {
    const double theta1 = theta1_s + (total > 0.0 ? dtheta1 * arc[i] / total : 0.0);
    result.waypoints.push_back({world_of_planar(theta1, plan[i].q), plan[i].mode});
  }
  for (size_t k = 0; k < crossings.size(); ++k) {
    result.crossings.push_back(
        {result.waypoints[crossing_waypoint[k]].point, crossings[k].boundary});
  }
  return result;
}

std::vector<ModeComparison> compare_modes_along(const DesignParams& design,
                                                const std::vector<PlanarPoint>& path,
                                                const std::vector<WorkingMode>& modes) {
  std::vector<PlanarPoint> samples;
  if (!path.empty()) {
    samples.push_back(path.front());
    const double step = design.l2 / 100.0;
    for (size_t i = 1; i < path.size(); ++i) {
      const double len = norm(path[i] - path[i - 1]);
      const int count = std::max(1, static_cast<int>(std::ceil(len / step)));
      for (int k = 1; k <= count; ++k) {
        samples.push_back(path[i - 1] + (static_cast<double>(k) / count) * (path[i] - path[i - 1]));
      }
    }
  }

  std::vector<ModeComparison> out;
  for (const WorkingMode& mode : modes) {
    ModeComparison cmp;
    cmp.mode = mode;
    cmp.feasible = !samples.empty();
    double sum = 0.0, worst = 1.0;
    for (const PlanarPoint& q : samples) {
      if (q.u * mode.eps1 <= 0.0) {
        cmp.feasible = false;
        break;
      }
      auto sol = planar_ik(design, q, mode.eps2, mode.eps3);
      if (!sol) {
        cmp.feasible = false;
        break;
      }
      const double kappa = condition_number_closed(sol->theta4 - sol->theta5);
      sum += kappa;
      worst = std::max(worst, kappa);
    }
    cmp.kappa_max = cmp.feasible ? worst : std::numeric_limits<double>::quiet_NaN();
    cmp.kappa_mean = cmp.feasible ? sum / samples.size() : cmp.kappa_max;
    out.push_back(cmp);
  }
  std::sort(out.begin(), out.end(), [](const ModeComparison& x, const ModeComparison& y) {
    if (x.feasible != y.feasible) return x.feasible;
    if (x.feasible && x.kappa_max != y.kappa_max) return x.kappa_max < y.kappa_max;
    return x.mode.index() < y.mode.index();
  });
  return out;
}

}  // namespace fivebar
