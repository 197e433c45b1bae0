#pragma once

#include <cstdint>
#include <vector>

#include "fivebar/types.hpp"
#include "fivebar/workspace.hpp"

namespace fivebar {

struct DesignReport {
  DesignParams design;
  // Literal length rule 2*l2 - 2*l1 > l0. Algebraically the same statement
  // as flat_eliminated; both are reported so the CSV carries each test.
  bool design_rule_satisfied = false;
  // No flat parallel singularity reachable: flat needs |CD| = 2*l2, and the
  // largest reachable |CD| is l0 + 2*l1, so 2*l2 > l0 + 2*l1 rules it out.
  bool flat_eliminated = false;
  // No coincident singularity: C = D needs circle(A, l1) to meet
  // circle(B, l1), impossible once l0 > 2*l1.
  bool coincident_eliminated = false;
  VolumeEstimate volume;
  int operative_mode_count = 0;
};

Result<DesignReport> check_design(const DesignParams& design, long long volume_samples = 200000,
                                  std::uint64_t seed = kDefaultSeed);

// Candidate grid for the length-budget search: for each l0 and each split
// fraction f, the remainder s = (budget - l0) / 2 is divided as l1 = f*s,
// l2 = (1-f)*s. Entries leading to non-positive links are skipped.
struct DesignSearchSpec {
  std::vector<double> l0_values;
  std::vector<double> split_fractions;

  static DesignSearchSpec uniform(double l0_min, double l0_max, int l0_count, int split_count);
};

struct OptimizeResult {
  DesignReport best;
  std::vector<DesignReport> ranking;  // every candidate, best first
};

// Exhaustive search maximizing estimated workspace volume under the length
// budget l0 + 2*l1 + 2*l2 = budget. All candidates are scored on the same
// sample set (one seed, one bounding box), so the ranking is deterministic
// and independent of enumeration order; ties break toward smaller l0, then
// smaller |l1 - l2|, then smaller l1.
Result<OptimizeResult> optimize_workspace(double budget, const DesignSearchSpec& search,
                                          long long samples, std::uint64_t seed = kDefaultSeed);

struct IsoField {
  GridSpec grid;
  WorkingMode mode;
  // Row-major per cell; NaN where the cell is outside the mode's workspace.
  std::vector<double> kappa;
  std::vector<double> cos_delta;  // cos(theta4 - theta5), the signed surrogate
};

// Condition-number field of the mode over the grid: per reachable in-mode
// cell, kappa of the resolved pair posture (closed form).
Result<IsoField> isoconditioning_field(const DesignParams& design, const GridSpec& grid,
                                       WorkingMode mode);

struct Contour {
  double level = 0.0;
  std::vector<PlanarPoint> points;
  bool closed = false;
};

struct ContourSet {
  std::vector<double> levels;
  std::vector<Contour> contours;
};

// Level curves of kappa by marching squares. kappa touches each level k > 1
// from both sides of the isotropy locus but never crosses 1, so extraction
// runs on the signed surrogate cos_delta at +-c with c = (k^2-1)/(k^2+1)
// (k = 1 gives the single level c = 0, the isotropy locus itself). Levels
// below 1 yield nothing; infinite cells count as above every level.
ContourSet extract_contours(const IsoField& field, const std::vector<double>& levels);

}  // namespace fivebar
