// Acceptance gate for the library and its command-line tool. Each numbered
// check prints exactly one PASS/FAIL line; the exit code is the number of
// failures. argv[1] names the CLI binary (used by the determinism check).
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fivebar/design.hpp"
#include "fivebar/hybrid.hpp"
#include "fivebar/planar.hpp"
#include "fivebar/planner.hpp"
#include "fivebar/singularity.hpp"
#include "fivebar/types.hpp"
#include "fivebar/workspace.hpp"
#include "test_util.hpp"

namespace {

namespace fs = std::filesystem;
using namespace fivebar;

int failures = 0;

void report(bool ok, const char* label, const std::string& detail = "") {
  if (ok) {
    std::printf("PASS %s\n", label);
  } else {
    ++failures;
    std::printf("FAIL %s%s%s\n", label, detail.empty() ? "" : ": ", detail.c_str());
  }
  std::fflush(stdout);
}

double dist_world(const WorldPoint& a, const WorldPoint& b) {
  return std::hypot(a.x - b.x, a.y - b.y, a.z - b.z);
}

// Absolute loop-closure error of a posture: worst link-chain mismatch,
// computed here from scratch so the check does not lean on the library's
// own residual.
double loop_error(const Posture& q) {
  const DesignParams& d = q.design;
  const double ax = 0.0, ay = -0.5 * d.l0;
  const double bx = 0.0, by = +0.5 * d.l0;
  const JointState& j = q.joints;
  double worst = 0.0;
  worst = std::max(worst, std::hypot(q.c.u - (ax + d.l1 * std::cos(j.theta2)),
                                     q.c.v - (ay + d.l1 * std::sin(j.theta2))));
  worst = std::max(worst, std::hypot(q.d.u - (bx + d.l1 * std::cos(j.theta3)),
                                     q.d.v - (by + d.l1 * std::sin(j.theta3))));
  worst = std::max(worst, std::hypot(q.p_plane.u - (q.c.u + d.l2 * std::cos(j.theta4)),
                                     q.p_plane.v - (q.c.v + d.l2 * std::sin(j.theta4))));
  worst = std::max(worst, std::hypot(q.p_plane.u - (q.d.u + d.l2 * std::cos(j.theta5)),
                                     q.p_plane.v - (q.d.v + d.l2 * std::sin(j.theta5))));
  return worst;
}

void check_round_trip() {
  auto gen = testutil::rng(901);
  int bad = 0;
  std::string detail;
  for (int trial = 0; trial < 10000; ++trial) {
    const DesignParams d = testutil::random_design(gen);
    const Posture posture = testutil::random_posture(gen, d);
    const auto fk = hybrid_fk(d, posture.joints.theta1, posture.joints.theta2,
                              posture.joints.theta3, assembly_of(posture.joints));
    const double scale = std::max(1.0, std::hypot(posture.p_world.x, posture.p_world.y,
                                                  posture.p_world.z));
    const double link = std::max(d.l1, d.l2);
    const bool ok = fk && dist_world(fk->p_world, posture.p_world) <= 1e-9 * scale &&
                    loop_error(posture) <= 1e-9 * link && loop_error(*fk) <= 1e-9 * link;
    if (!ok && bad++ == 0) detail = "first failure at trial " + std::to_string(trial);
  }
  report(bad == 0, "forward kinematics invert the branch solver on 10000 random postures",
         detail);
}

void check_velocity_model() {
  auto gen = testutil::rng(902);
  const double h = 1e-6;
  int bad = 0;
  std::string detail;
  for (int trial = 0; trial < 1000; ++trial) {
    const DesignParams d = testutil::random_design(gen);
    const Posture posture = testutil::random_posture(gen, d, 5e-2);
    const AssemblyMode assembly = assembly_of(posture.joints);
    const Jacobians jac = jacobians(posture);
    bool ok = true;
    for (int axis = 0; axis < 3 && ok; ++axis) {
      JointRates rates{axis == 0 ? 1.0 : 0.0, axis == 1 ? 1.0 : 0.0, axis == 2 ? 1.0 : 0.0};
      const auto vel = velocity_forward(posture, rates);
      if (!vel) {
        ok = false;
        break;
      }
      double t[3] = {posture.joints.theta1, posture.joints.theta2, posture.joints.theta3};
      t[axis] += h;
      const auto plus = hybrid_fk(d, t[0], t[1], t[2], assembly);
      t[axis] -= 2.0 * h;
      const auto minus = hybrid_fk(d, t[0], t[1], t[2], assembly);
      if (!plus || !minus) {
        ok = false;
        break;
      }
      const double fx = (plus->p_world.x - minus->p_world.x) / (2.0 * h);
      const double fy = (plus->p_world.y - minus->p_world.y) / (2.0 * h);
      const double fz = (plus->p_world.z - minus->p_world.z) / (2.0 * h);
      const double speed = std::max(1.0, std::hypot(vel->x, vel->y, vel->z));
      if (std::hypot(fx - vel->x, fy - vel->y, fz - vel->z) > 1e-5 * speed) ok = false;

      // a * p_dot - b * theta_dot must close algebraically as well.
      Eigen::Vector3d pd(vel->x, vel->y, vel->z);
      Eigen::Vector3d td(rates.theta1, rates.theta2, rates.theta3);
      const Eigen::Vector3d rhs = jac.b * td;
      const double residual = (jac.a * pd - rhs).norm();
      if (residual > 1e-9 * std::max(1.0, rhs.norm())) ok = false;
    }
    if (!ok && bad++ == 0) detail = "first failure at trial " + std::to_string(trial);
  }
  report(bad == 0,
         "analytic velocities match central differences and close the rate equation "
         "on 1000 postures",
         detail);
}

void check_normal_matrix_structure() {
  auto gen = testutil::rng(903);
  int bad = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const DesignParams d = testutil::random_design(gen);
    const Posture posture = testutil::random_posture(gen, d);
    const Mat3 a = jacobians(posture).a;
    const Mat3 m = (a * a.transpose()) / (d.l2 * d.l2);
    const double delta = posture.joints.theta4 - posture.joints.theta5;
    bool ok = std::abs(m(0, 0) - 1.0) <= 1e-12 && std::abs(m(1, 1) - 1.0) <= 1e-12 &&
              std::abs(m(2, 2) - 1.0) <= 1e-12 && std::abs(m(0, 1)) <= 1e-12 &&
              std::abs(m(0, 2)) <= 1e-12 && std::abs(m(1, 2) - std::cos(delta)) <= 1e-12;
    if (!ok) ++bad;
  }
  report(bad == 0,
         "A A^T / l2^2 keeps the unit diagonal and single cos(theta4 - theta5) coupling");
}

void check_condition_number() {
  auto gen = testutil::rng(904);
  int bad = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const DesignParams d = testutil::random_design(gen);
    const Posture posture = testutil::random_posture(gen, d, 1e-3);
    const double closed = condition_number_closed(posture);
    const double svd = condition_number_svd(posture);
    if (!(std::abs(closed - svd) <= 1e-9 * svd)) ++bad;
  }
  // Exact unity when the distal links are perpendicular.
  const Posture iso = make_posture({2.0, 1.0, std::sqrt(2.0)},
                                   {0.0, 0.0, 0.0, kPi / 4.0, -kPi / 4.0});
  const bool exact_one = condition_number_closed(kPi / 2.0) == 1.0 &&
                         condition_number_closed(-kPi / 2.0) == 1.0 &&
                         condition_number_closed(iso) == 1.0;
  // Unbounded when the distal links align.
  const bool flagged_inf = std::isinf(condition_number_closed(0.0)) &&
                           std::isinf(condition_number_closed(kPi)) &&
                           std::isinf(condition_number_closed(-kPi)) &&
                           std::isinf(condition_number_closed(5e-13));
  report(bad == 0 && exact_one && flagged_inf,
         "closed-form condition number tracks the SVD, is exactly 1 when perpendicular "
         "and infinite when aligned");
}

void check_reference_workspaces() {
  bool ok = true;
  std::string detail;
  struct Case {
    DesignParams design;
    double half_extent;
    double area;
  };
  const Case cases[] = {
      {{0.0, 1.0, 1.0}, 2.2, 4.0 * kPi},
      {{0.0, 1.0, 0.5}, 1.65, 2.0 * kPi},
  };
  for (const Case& c : cases) {
    const auto raster = cross_section(c.design, GridSpec::square(c.half_extent, 221));
    if (!raster || std::abs(raster->reachable_area() - c.area) > 0.01 * c.area) {
      ok = false;
      detail = "section area off for l2 = " + std::to_string(c.design.l2);
      break;
    }
    const VolumeEstimate mc = workspace_volume(c.design, 1000000);
    const double exact = closed_form_volume_zero_offset(c.design);
    if (!(mc.std_error > 0.0) || std::abs(mc.volume - exact) > 3.0 * mc.std_error) {
      ok = false;
      detail = "volume off for l2 = " + std::to_string(c.design.l2);
      break;
    }
  }
  report(ok, "zero-offset reference geometries hit their closed-form areas and volumes",
         detail);
}

void check_budget_search() {
  const auto result = optimize_workspace(4.0, DesignSearchSpec::uniform(0.0, 1.0, 5, 9), 200000);
  const bool ok = result && result->ranking.size() == 45 &&
                  result->best.design.l0 == 0.0 && result->best.design.l1 == 1.0 &&
                  result->best.design.l2 == 1.0;
  report(ok, "the length-budget search ranks the zero-offset equal-split design first");
}

void check_operative_modes_and_interior() {
  const DesignParams d{0.0, 1.0, 1.0};
  const auto reports = operative_working_modes(d);
  int operative = 0;
  bool mixed_only = true;
  for (const auto& r : reports) {
    if (r.operative) {
      ++operative;
      if (r.mode.eps2 == r.mode.eps3) mixed_only = false;
    }
  }
  bool interior_clean = true;
  const unsigned parallel_mask = (1u << static_cast<int>(SingularityType::ParallelFlat)) |
                                 (1u << static_cast<int>(SingularityType::ParallelCoincident));
  const WorkingMode probes[] = {{+1, +1, -1}, {+1, -1, +1}, {-1, +1, -1}};
  for (const WorkingMode& mode : probes) {
    const auto raster = cross_section(d, GridSpec::square(2.2, 221), mode);
    if (!raster) {
      interior_clean = false;
      break;
    }
    for (const RasterCell& cell : raster->cells) {
      if ((cell.mode_mask & (1u << mode.index())) && (cell.flags & parallel_mask)) {
        interior_clean = false;
      }
    }
  }
  report(operative == 2 && mixed_only && interior_clean,
         "the equal-split design keeps exactly two operative modes with no in-mode "
         "parallel-singular cells");
}

void check_joint_space_parallel_cells() {
  const GridSpec grid{-kPi, kPi, -kPi, kPi, 721};
  const unsigned parallel_mask = (1u << static_cast<int>(SingularityType::ParallelFlat)) |
                                 (1u << static_cast<int>(SingularityType::ParallelCoincident));
  const auto clean = joint_space_map({5.0, 1.0, 4.0}, grid, {+1});
  const auto dirty = joint_space_map({0.0, 1.0, 1.0}, grid, {+1});
  bool ok = clean && dirty;
  if (ok) {
    long long clean_parallel = 0, clean_infeasible = 0, dirty_parallel = 0;
    for (const JointCell& cell : clean->cells) {
      if (!cell.feasible) ++clean_infeasible;
      if (cell.flags & parallel_mask) ++clean_parallel;
    }
    for (const JointCell& cell : dirty->cells) {
      if (cell.flags & parallel_mask) ++dirty_parallel;
    }
    ok = clean_parallel == 0 && clean_infeasible == 0 && dirty_parallel > 0;
  }
  report(ok,
         "the long-base design sweeps its full joint grid without parallel singularities; "
         "the equal-split design cannot");
}

double crossing_error(const DesignParams& d, const CrossingPoint& crossing) {
  const double r = std::hypot(crossing.point.x, crossing.point.z);
  const double v = crossing.point.y;
  const double reach = d.l1 + d.l2;
  switch (crossing.boundary) {
    case CrossingBoundary::Axis: return r;
    case CrossingBoundary::LegAStretch: return std::abs(std::hypot(r, v + 0.5 * d.l0) - reach);
    case CrossingBoundary::LegBStretch: return std::abs(std::hypot(r, v - 0.5 * d.l0) - reach);
  }
  return HUGE_VAL;
}

void check_union_and_crossings() {
  const DesignParams disc{0.0, 1.0, 1.0};
  const auto joined = union_workspace(disc, GridSpec::square(2.2, 221),
                                      {{+1, +1, -1}, {-1, +1, -1}});
  bool ok = joined && !joined->mode_areas.empty() && joined->mode_areas[0] > 0.0;
  std::string detail;
  if (ok) {
    const double ratio = joined->union_area / joined->mode_areas[0];
    if (!(ratio > 1.9 && ratio < 2.1)) {
      ok = false;
      detail = "union/single area ratio " + std::to_string(ratio);
    }
  }

  const DesignParams d{2.0, 1.0, std::sqrt(2.0)};
  struct PlanCase {
    WorldPoint start, goal;
    const char* start_mode;
    const char* goal_mode;
    std::size_t crossings;
  };
  const PlanCase cases[] = {
      {{2.0, 0.0, 0.0}, {2.0, 0.0, 0.0}, "+-+", "+++", 1},
      {{2.0, 0.0, 0.0}, {-2.0, 0.0, 0.0}, "+-+", "--+", 1},
      {{2.0, 0.0, 0.0}, {-2.0, 0.0, 0.0}, "+-+", "-++", 2},
  };
  for (const PlanCase& pc : cases) {
    if (!ok) break;
    const auto start_mode = WorkingMode::parse(pc.start_mode);
    const auto goal_mode = WorkingMode::parse(pc.goal_mode);
    const auto plan = plan_mode_change(d, pc.start, *start_mode, pc.goal, *goal_mode);
    if (!plan || plan->crossings.size() != pc.crossings) {
      ok = false;
      detail = std::string("plan ") + pc.start_mode + " -> " + pc.goal_mode + " failed";
      break;
    }
    for (const CrossingPoint& crossing : plan->crossings) {
      if (crossing_error(d, crossing) > 1e-6) {
        ok = false;
        detail = "crossing misses its boundary";
      }
    }
  }
  report(ok,
         "the two operative branches double the section area and every planned crossing "
         "lies on a serial boundary",
         detail);
}

void check_isoconditioning_contour() {
  const DesignParams d{2.0, 1.0, std::sqrt(2.0)};
  const WorkingMode mode{+1, -1, +1};
  const GridSpec grid = GridSpec::square(3.8, 221);
  const auto field = isoconditioning_field(d, grid, mode);
  bool ok = bool(field);
  bool near_target = false;
  std::string detail;
  if (ok) {
    const ContourSet set = extract_contours(*field, {1.0});
    const double cell_diag = std::hypot(grid.du(), grid.dv());
    int points = 0;
    for (const Contour& contour : set.contours) {
      if (contour.level != 1.0) continue;
      for (const PlanarPoint& p : contour.points) {
        ++points;
        if (std::hypot(p.u - 2.0, p.v) <= cell_diag) near_target = true;
        const auto sol = planar_ik_relaxed(d, p, mode.eps2, mode.eps3);
        if (!sol) {
          ok = false;
          detail = "contour point left the branch";
          break;
        }
        const double kappa = condition_number_closed(sol->theta4 - sol->theta5);
        if (std::abs(kappa - 1.0) > 0.05) {
          ok = false;
          detail = "contour point re-evaluates to kappa " + std::to_string(kappa);
          break;
        }
      }
      if (!ok) break;
    }
    if (points == 0) {
      ok = false;
      detail = "no unit-level contour found";
    }
  }
  report(ok && near_target,
         "the unit condition-number contour passes the perpendicular posture and "
         "re-evaluates within 5 percent",
         detail);
}

std::optional<std::string> slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) return std::nullopt;
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void check_cli_determinism(const char* cli) {
  if (cli == nullptr) {
    report(false, "repeated command-line runs are byte-identical",
           "path to the binary was not supplied");
    return;
  }
  const fs::path dir = fs::current_path() / "acceptance_scratch";
  std::error_code ec;
  fs::create_directories(dir, ec);
  const std::string tag = "2_1_1.41421356237";
  const std::string ws_args =
      " workspace --design 2,1,1.4142135623730951 --grid -3.8,3.8,-3.8,3.8,121 --mode +-+ "
      "--samples 100000 --seed 9 --out ";
  const std::string iso_args =
      " isocond --design 2,1,1.4142135623730951 --mode +-+ --levels 1,1.5,2 "
      "--grid -3.8,3.8,-3.8,3.8,121 --out ";
  const std::string sink = " > " + (dir / "cli.log").string() + " 2>&1";
  bool ok = true;
  for (const char* round : {"r1", "r2"}) {
    const std::string prefix = (dir / round).string();
    if (std::system((cli + ws_args + prefix + sink).c_str()) != 0) ok = false;
    if (std::system((cli + iso_args + prefix + sink).c_str()) != 0) ok = false;
  }
  const char* artifacts[] = {"_workspace_%s_raster.csv", "_workspace_%s_summary.json",
                             "_isocond_%s_+-+_field.csv", "_isocond_%s_+-+_contours.csv",
                             "_isocond_%s_+-+_contours.svg"};
  std::string detail;
  for (const char* pattern : artifacts) {
    if (!ok) break;
    char suffix[128];
    std::snprintf(suffix, sizeof suffix, pattern, tag.c_str());
    const auto first = slurp((dir / ("r1" + std::string(suffix))));
    const auto second = slurp((dir / ("r2" + std::string(suffix))));
    if (!first || !second || *first != *second) {
      ok = false;
      detail = std::string("mismatch in ") + suffix;
    }
  }
  report(ok, "repeated command-line runs are byte-identical", detail);
}

}  // namespace

int main(int argc, char** argv) {
  check_round_trip();
  check_velocity_model();
  check_normal_matrix_structure();
  check_condition_number();
  check_reference_workspaces();
  check_budget_search();
  check_operative_modes_and_interior();
  check_joint_space_parallel_cells();
  check_union_and_crossings();
  check_isoconditioning_contour();
  check_cli_determinism(argc > 1 ? argv[1] : nullptr);
  return failures;
}
