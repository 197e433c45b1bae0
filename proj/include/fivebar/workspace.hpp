#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fivebar/planar.hpp"
#include "fivebar/types.hpp"

namespace fivebar {

// Square raster over a planar window; cells are sampled at their centers and
// stored row-major: v rows ascending, u ascending within a row.
struct GridSpec {
  double umin = 0.0, umax = 0.0;
  double vmin = 0.0, vmax = 0.0;
  int n = 0;

  static GridSpec square(double half_extent, int n) {
    return {-half_extent, half_extent, -half_extent, half_extent, n};
  }
  double du() const { return (umax - umin) / n; }
  double dv() const { return (vmax - vmin) / n; }
  double u_at(int iu) const { return umin + (iu + 0.5) * du(); }
  double v_at(int iv) const { return vmin + (iv + 0.5) * dv(); }
  double cell_area() const { return du() * dv(); }
  int cell_count() const { return n * n; }
  int index(int iu, int iv) const { return iv * n + iu; }
  bool valid() const;
};

// Cell flag bit marking a serial-boundary posture (coincident IK branches);
// bits below it hold the singularity-kind set from classify().
inline constexpr unsigned kCellBoundaryFlag = 0x40;

struct RasterCell {
  bool reachable = false;  // annuli-intersection membership of the center
  // Bit WorkingMode::index(m) set when the center is reachable in hybrid
  // mode m: the planar pair (eps2, eps3) solves and sign(u) matches eps1.
  // Cells on the rotation axis (u = 0) belong to no mode.
  unsigned mode_mask = 0;
  // Filled from the requested mode's resolved posture; NaN when absent.
  double det_a = 0.0, det_b = 0.0, kappa = 0.0;
  unsigned flags = 0;
};

struct WorkspaceRaster {
  GridSpec grid;
  std::optional<WorkingMode> mode;
  std::vector<RasterCell> cells;

  double reachable_area() const;
  double mode_area(WorkingMode m) const;
};

// True iff both |AP| and |BP| lie in [|l1-l2|, l1+l2] (bounds inclusive).
bool reachable_annuli(const DesignParams& design, PlanarPoint p);

// Planar cross-section raster; when a mode is given each reachable cell also
// carries det/kappa/singularity data from that mode's resolved pair posture.
Result<WorkspaceRaster> cross_section(const DesignParams& design, const GridSpec& grid,
                                      std::optional<WorkingMode> mode = std::nullopt);

struct JointCell {
  bool feasible = false;
  Err err = Err::None;     // why FK failed, when infeasible
  double det_a = 0.0;      // NaN when infeasible
  unsigned flags = 0;      // singularity-kind set of the resolved posture
};

struct JointRaster {
  GridSpec grid;  // umin/umax read as theta2 range, vmin/vmax as theta3
  AssemblyMode assembly{+1};
  std::vector<JointCell> cells;
};

// Raster over actuated angles (theta2, theta3) at fixed assembly branch.
Result<JointRaster> joint_space_map(const DesignParams& design, const GridSpec& grid,
                                    AssemblyMode assembly);

struct VolumeEstimate {
  double volume = 0.0;
  double std_error = 0.0;
  long long samples = 0;
};

// Monte-Carlo volume of the 3-D reachable set: the u >= 0 half-section
// revolved about the base axis, integrated as mean(2*pi*u * reachable) over
// a bounding box (Pappus). Deterministic for a fixed seed.
VolumeEstimate workspace_volume(const DesignParams& design, long long samples,
                                std::uint64_t seed = kDefaultSeed);

// Same estimator over an explicit box u in [0, umax], v in [-vhalf, vhalf].
// Scoring several designs on one box and seed reuses the exact same sample
// points, which makes volume comparisons between them deterministic.
VolumeEstimate workspace_volume_boxed(const DesignParams& design, double umax, double vhalf,
                                      long long samples, std::uint64_t seed = kDefaultSeed);

// Exact volume of the revolved annuli intersection when l0 = 0: the two
// spherical shells coincide, giving (4*pi/3)*((l1+l2)^3 - |l1-l2|^3).
double closed_form_volume_zero_offset(const DesignParams& design);

// A planar pair is operative when some sampled reachable posture in it has
// |det A|/l2^3 above this; pairs singular over every sample are inoperative.
inline constexpr double kOperativeDetTol = 1e-6;

struct PlanarModeReport {
  PlanarMode mode;
  bool operative = false;
  double max_abs_det = 0.0;  // max |det A|/l2^3 seen over the samples
};

std::vector<PlanarModeReport> operative_working_modes(const DesignParams& design,
                                                      int samples = 4000,
                                                      std::uint64_t seed = kDefaultSeed);
int operative_mode_count(const DesignParams& design, int samples = 4000,
                         std::uint64_t seed = kDefaultSeed);

struct UnionReport {
  WorkspaceRaster raster;  // reachable = cell lies in at least one listed mode
  std::vector<WorkingMode> modes;
  std::vector<double> mode_areas;
  double union_area = 0.0;
};

// Per-cell OR of hybrid-mode membership over the listed modes.
Result<UnionReport> union_workspace(const DesignParams& design, const GridSpec& grid,
                                    const std::vector<WorkingMode>& modes);

}  // namespace fivebar
