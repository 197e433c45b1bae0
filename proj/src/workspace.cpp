#include "fivebar/workspace.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "fivebar/singularity.hpp"

namespace fivebar {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool annulus_contains(double dist, double lo, double hi) { return dist >= lo && dist <= hi; }

// Fills the cell's mode mask and, for the requested mode, its posture data.
void evaluate_cell(const DesignParams& design, PlanarPoint p, std::optional<WorkingMode> mode,
                   RasterCell& cell) {
  cell.reachable = reachable_annuli(design, p);
  cell.det_a = kNaN;
  cell.det_b = kNaN;
  cell.kappa = kNaN;
  if (!cell.reachable) return;

  for (const PlanarMode& pair : PlanarMode::all()) {
    auto sol = planar_ik_relaxed(design, p, pair.eps2, pair.eps3);
    if (!sol) continue;
    if (p.u > 0.0) cell.mode_mask |= 1u << WorkingMode{+1, pair.eps2, pair.eps3}.index();
    if (p.u < 0.0) cell.mode_mask |= 1u << WorkingMode{-1, pair.eps2, pair.eps3}.index();

    if (mode && pair.eps2 == mode->eps2 && pair.eps3 == mode->eps3) {
      JointState joints{0.0, sol->theta2, sol->theta3, sol->theta4, sol->theta5};
      const Posture posture = make_posture(design, joints);
      const SingularityReport report = classify(posture);
      cell.det_a = report.det_a_norm;
      cell.det_b = report.det_b_norm;
      cell.kappa = report.kappa;
      cell.flags = report.flags;
      if (sol->on_boundary) cell.flags |= kCellBoundaryFlag;
    }
  }
}

struct SampleBox {
  double umax = 0.0;   // u in [0, umax]
  double vhalf = 0.0;  // v in [-vhalf, vhalf]
  double area() const { return umax * 2.0 * vhalf; }
};

SampleBox fitted_box(const DesignParams& design) {
  const double reach = design.l1 + design.l2;
  return {reach, 0.5 * design.l0 + reach};
}

VolumeEstimate volume_in_box(const DesignParams& design, const SampleBox& box, long long samples,
                             std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double sum = 0.0, sum_sq = 0.0;
  for (long long i = 0; i < samples; ++i) {
    const double u = box.umax * unit(rng);
    const double v = box.vhalf * (2.0 * unit(rng) - 1.0);
    if (reachable_annuli(design, {u, v})) {
      const double f = 2.0 * kPi * u;
      sum += f;
      sum_sq += f * f;
    }
  }
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  const double var = std::max(0.0, sum_sq / n - mean * mean);
  VolumeEstimate est;
  est.volume = box.area() * mean;
  est.std_error = box.area() * std::sqrt(var / n);
  est.samples = samples;
  return est;
}

}  // namespace

bool GridSpec::valid() const {
  return n >= 2 && std::isfinite(umin) && std::isfinite(umax) && std::isfinite(vmin) &&
         std::isfinite(vmax) && umax > umin && vmax > vmin;
}

double WorkspaceRaster::reachable_area() const {
  long long count = 0;
  for (const RasterCell& cell : cells) count += cell.reachable ? 1 : 0;
  return count * grid.cell_area();
}

double WorkspaceRaster::mode_area(WorkingMode m) const {
  const unsigned bit = 1u << m.index();
  long long count = 0;
  for (const RasterCell& cell : cells) count += (cell.mode_mask & bit) ? 1 : 0;
  return count * grid.cell_area();
}

bool reachable_annuli(const DesignParams& design, PlanarPoint p) {
  const double lo = std::abs(design.l1 - design.l2);
  const double hi = design.l1 + design.l2;
  return annulus_contains(norm(p - pivot_a(design)), lo, hi) &&
         annulus_contains(norm(p - pivot_b(design)), lo, hi);
}

Result<WorkspaceRaster> cross_section(const DesignParams& design, const GridSpec& grid,
                                      std::optional<WorkingMode> mode) {
  if (auto check = validate_design(design.l0, design.l1, design.l2); !check) return check.error();
  if (!grid.valid()) return Err::InvalidGrid;

  WorkspaceRaster raster;
  raster.grid = grid;
  raster.mode = mode;
  raster.cells.resize(grid.cell_count());
  for (int iv = 0; iv < grid.n; ++iv) {
    for (int iu = 0; iu < grid.n; ++iu) {
      const PlanarPoint p{grid.u_at(iu), grid.v_at(iv)};
      evaluate_cell(design, p, mode, raster.cells[grid.index(iu, iv)]);
    }
  }
  return raster;
}

Result<JointRaster> joint_space_map(const DesignParams& design, const GridSpec& grid,
                                    AssemblyMode assembly) {
  if (auto check = validate_design(design.l0, design.l1, design.l2); !check) return check.error();
  if (!grid.valid()) return Err::InvalidGrid;

  JointRaster raster;
  raster.grid = grid;
  raster.assembly = assembly;
  raster.cells.resize(grid.cell_count());
  for (int iv = 0; iv < grid.n; ++iv) {
    for (int iu = 0; iu < grid.n; ++iu) {
      JointCell& cell = raster.cells[grid.index(iu, iv)];
      auto fk = planar_fk(design, grid.u_at(iu), grid.v_at(iv), assembly);
      if (!fk) {
        cell.feasible = false;
        cell.err = fk.error();
        cell.det_a = kNaN;
        // C = D leaves the plate orientation free: a parallel singularity
        // even though no single posture can be returned for it.
        if (fk.error() == Err::DegenerateAssembly) {
          cell.flags = 1u << static_cast<int>(SingularityType::ParallelCoincident);
        }
        continue;
      }
      const Posture posture = make_posture(design, fk->joints);
      const SingularityReport report = classify(posture);
      cell.feasible = true;
      cell.det_a = report.det_a_norm;
      cell.flags = report.flags;
    }
  }
  return raster;
}

VolumeEstimate workspace_volume(const DesignParams& design, long long samples,
                                std::uint64_t seed) {
  return volume_in_box(design, fitted_box(design), std::max<long long>(samples, 1000), seed);
}

VolumeEstimate workspace_volume_boxed(const DesignParams& design, double umax, double vhalf,
                                      long long samples, std::uint64_t seed) {
  return volume_in_box(design, {umax, vhalf}, std::max<long long>(samples, 1000), seed);
}

double closed_form_volume_zero_offset(const DesignParams& design) {
  const double hi = design.l1 + design.l2;
  const double lo = std::abs(design.l1 - design.l2);
  return (4.0 * kPi / 3.0) * (hi * hi * hi - lo * lo * lo);
}

std::vector<PlanarModeReport> operative_working_modes(const DesignParams& design, int samples,
                                                      std::uint64_t seed) {
  const SampleBox box = fitted_box(design);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<PlanarModeReport> reports;
  for (const PlanarMode& pair : PlanarMode::all()) reports.push_back({pair, false, 0.0});

  for (int i = 0; i < samples; ++i) {
    const double u = box.umax * (2.0 * unit(rng) - 1.0);
    const double v = box.vhalf * (2.0 * unit(rng) - 1.0);
    const PlanarPoint p{u, v};
    if (!reachable_annuli(design, p)) continue;
    for (PlanarModeReport& report : reports) {
      auto sol = planar_ik_relaxed(design, p, report.mode.eps2, report.mode.eps3);
      if (!sol || sol->on_boundary) continue;
      const double det = std::abs(std::sin(sol->theta4 - sol->theta5));
      if (det > report.max_abs_det) report.max_abs_det = det;
    }
  }
  for (PlanarModeReport& report : reports) report.operative = report.max_abs_det > kOperativeDetTol;
  return reports;
}

int operative_mode_count(const DesignParams& design, int samples, std::uint64_t seed) {
  int count = 0;
  for (const PlanarModeReport& report : operative_working_modes(design, samples, seed)) {
    count += report.operative ? 1 : 0;
  }
  return count;
}

Result<UnionReport> union_workspace(const DesignParams& design, const GridSpec& grid,
                                    const std::vector<WorkingMode>& modes) {
  if (modes.empty()) return Err::InvalidGrid;
  auto raster = cross_section(design, grid);
  if (!raster) return raster.error();

  UnionReport report;
  report.modes = modes;
  report.mode_areas.assign(modes.size(), 0.0);
  long long union_count = 0;
  for (RasterCell& cell : raster->cells) {
    bool any = false;
    for (size_t k = 0; k < modes.size(); ++k) {
      if (cell.mode_mask & (1u << modes[k].index())) {
        report.mode_areas[k] += grid.cell_area();
        any = true;
      }
    }
    cell.reachable = any;
    union_count += any ? 1 : 0;
  }
  report.union_area = union_count * grid.cell_area();
  report.raster = std::move(*raster);
  return report;
}

}  // namespace fivebar
