#include "fivebar/design.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <tuple>

#include "fivebar/singularity.hpp"

namespace fivebar {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

DesignReport rule_report(const DesignParams& design) {
  DesignReport report;
  report.design = design;
  report.design_rule_satisfied = 2.0 * design.l2 - 2.0 * design.l1 > design.l0;
  report.flat_eliminated = 2.0 * design.l2 > design.l0 + 2.0 * design.l1;
  report.coincident_eliminated = design.l0 > 2.0 * design.l1;
  return report;
}

// ---- marching squares over the cell-center lattice ----

struct Segment {
  PlanarPoint a, b;
};

using QuantKey = std::pair<long long, long long>;

QuantKey quantize(const IsoField& field, PlanarPoint p) {
  const double du = field.grid.du(), dv = field.grid.dv();
  return {std::llround((p.u - field.grid.umin) / du * 4096.0),
          std::llround((p.v - field.grid.vmin) / dv * 4096.0)};
}

PlanarPoint edge_point(PlanarPoint a, double ga, PlanarPoint b, double gb, double level) {
  double t = (level - ga) / (gb - ga);
  t = std::clamp(t, 0.0, 1.0);
  return a + t * (b - a);
}

// Emits the segments of the cos_delta level set at `level` into `out`.
void march(const IsoField& field, double level, std::vector<Segment>& out) {
  const GridSpec& g = field.grid;
  for (int j = 0; j + 1 < g.n; ++j) {
    for (int i = 0; i + 1 < g.n; ++i) {
      const double v00 = field.cos_delta[g.index(i, j)];
      const double v10 = field.cos_delta[g.index(i + 1, j)];
      const double v11 = field.cos_delta[g.index(i + 1, j + 1)];
      const double v01 = field.cos_delta[g.index(i, j + 1)];
      if (std::isnan(v00) || std::isnan(v10) || std::isnan(v11) || std::isnan(v01)) continue;

      const PlanarPoint p00{g.u_at(i), g.v_at(j)};
      const PlanarPoint p10{g.u_at(i + 1), g.v_at(j)};
      const PlanarPoint p11{g.u_at(i + 1), g.v_at(j + 1)};
      const PlanarPoint p01{g.u_at(i), g.v_at(j + 1)};

      const unsigned code = (v00 >= level ? 1u : 0u) | (v10 >= level ? 2u : 0u) |
                            (v11 >= level ? 4u : 0u) | (v01 >= level ? 8u : 0u);
      if (code == 0 || code == 15) continue;

      const PlanarPoint bottom = edge_point(p00, v00, p10, v10, level);
      const PlanarPoint right = edge_point(p10, v10, p11, v11, level);
      const PlanarPoint top = edge_point(p01, v01, p11, v11, level);
      const PlanarPoint left = edge_point(p00, v00, p01, v01, level);

      switch (code) {
        case 1: case 14: out.push_back({left, bottom}); break;
        case 2: case 13: out.push_back({bottom, right}); break;
        case 3: case 12: out.push_back({left, right}); break;
        case 4: case 11: out.push_back({right, top}); break;
        case 6: case 9: out.push_back({bottom, top}); break;
        case 7: case 8: out.push_back({left, top}); break;
        case 5:  // corners 00 and 11 inside; the center mean disambiguates
          if (0.25 * (v00 + v10 + v11 + v01) >= level) {
            out.push_back({bottom, right});
            out.push_back({left, top});
          } else {
            out.push_back({left, bottom});
            out.push_back({right, top});
          }
          break;
        case 10:  // corners 10 and 01 inside
          if (0.25 * (v00 + v10 + v11 + v01) >= level) {
            out.push_back({left, bottom});
            out.push_back({right, top});
          } else {
            out.push_back({bottom, right});
            out.push_back({left, top});
          }
          break;
        default: break;
      }
    }
  }
}

// Joins segments sharing endpoints into maximal chains. Endpoints on shared
// square edges are computed from identical inputs, so exact quantized
// matching is reliable.
std::vector<Contour> chain_segments(const IsoField& field, double kappa_level,
                                    const std::vector<Segment>& segments) {
  std::multimap<QuantKey, size_t> by_endpoint;
  for (size_t s = 0; s < segments.size(); ++s) {
    by_endpoint.insert({quantize(field, segments[s].a), s});
    by_endpoint.insert({quantize(field, segments[s].b), s});
  }
  std::vector<bool> used(segments.size(), false);

  auto next_unused = [&](QuantKey key, size_t& seg_out) {
    auto [lo, hi] = by_endpoint.equal_range(key);
    for (auto it = lo; it != hi; ++it) {
      if (!used[it->second]) {
        seg_out = it->second;
        return true;
      }
    }
    return false;
  };

  std::vector<Contour> contours;
  for (size_t s = 0; s < segments.size(); ++s) {
    if (used[s]) continue;
    used[s] = true;
    std::vector<PlanarPoint> pts{segments[s].a, segments[s].b};
    // Grow forward from the tail, then flip and grow from the other end.
    for (int pass = 0; pass < 2; ++pass) {
      for (;;) {
        size_t nxt;
        if (!next_unused(quantize(field, pts.back()), nxt)) break;
        used[nxt] = true;
        const bool tail_is_a =
            quantize(field, segments[nxt].a) == quantize(field, pts.back());
        pts.push_back(tail_is_a ? segments[nxt].b : segments[nxt].a);
      }
      std::reverse(pts.begin(), pts.end());
    }
    Contour contour;
    contour.level = kappa_level;
    contour.closed = pts.size() > 2 && quantize(field, pts.front()) == quantize(field, pts.back());
    contour.points = std::move(pts);
    contours.push_back(std::move(contour));
  }
  return contours;
}

}  // namespace

Result<DesignReport> check_design(const DesignParams& design, long long volume_samples,
                                  std::uint64_t seed) {
  if (auto check = validate_design(design.l0, design.l1, design.l2); !check) return check.error();
  DesignReport report = rule_report(design);
  report.volume = workspace_volume(design, volume_samples, seed);
  report.operative_mode_count = operative_mode_count(design, 4000, seed);
  return report;
}

DesignSearchSpec DesignSearchSpec::uniform(double l0_min, double l0_max, int l0_count,
                                           int split_count) {
  DesignSearchSpec spec;
  for (int i = 0; i < l0_count; ++i) {
    spec.l0_values.push_back(
        l0_count == 1 ? l0_min : l0_min + (l0_max - l0_min) * i / (l0_count - 1));
  }
  for (int i = 0; i < split_count; ++i) {
    spec.split_fractions.push_back(static_cast<double>(i + 1) / (split_count + 1));
  }
  return spec;
}

Result<OptimizeResult> optimize_workspace(double budget, const DesignSearchSpec& search,
                                          long long samples, std::uint64_t seed) {
  if (!(budget > 0.0) || !std::isfinite(budget)) return Err::EmptySearchSpace;

  std::vector<DesignParams> candidates;
  for (double l0 : search.l0_values) {
    const double s = 0.5 * (budget - l0);
    for (double f : search.split_fractions) {
      auto design = validate_design(l0, f * s, (1.0 - f) * s);
      if (design) candidates.push_back(*design);
    }
  }
  if (candidates.empty()) return Err::EmptySearchSpace;

  // One box and one seed for every candidate: identical sample points make
  // the estimates exactly ordered for nested workspaces, so the argmax is
  // reproducible and enumeration-order independent. The box covers every
  // candidate: l0/2 + l1 + l2 = budget/2 for all of them.
  OptimizeResult result;
  for (const DesignParams& design : candidates) {
    DesignReport report = rule_report(design);
    report.volume =
        workspace_volume_boxed(design, 0.5 * budget, 0.5 * budget, samples, seed);
    report.operative_mode_count = operative_mode_count(design, 4000, seed);
    result.ranking.push_back(report);
  }
  std::sort(result.ranking.begin(), result.ranking.end(),
            [](const DesignReport& x, const DesignReport& y) {
              const auto key = [](const DesignReport& r) {
                return std::make_tuple(-r.volume.volume, r.design.l0,
                                       std::abs(r.design.l1 - r.design.l2), r.design.l1);
              };
              return key(x) < key(y);
            });
  result.best = result.ranking.front();
  return result;
}

Result<IsoField> isoconditioning_field(const DesignParams& design, const GridSpec& grid,
                                       WorkingMode mode) {
  if (auto check = validate_design(design.l0, design.l1, design.l2); !check) return check.error();
  if (!grid.valid()) return Err::InvalidGrid;

  IsoField field;
  field.grid = grid;
  field.mode = mode;
  field.kappa.assign(grid.cell_count(), kNaN);
  field.cos_delta.assign(grid.cell_count(), kNaN);
  for (int j = 0; j < grid.n; ++j) {
    for (int i = 0; i < grid.n; ++i) {
      const PlanarPoint p{grid.u_at(i), grid.v_at(j)};
      if (p.u * mode.eps1 <= 0.0) continue;
      auto sol = planar_ik_relaxed(design, p, mode.eps2, mode.eps3);
      if (!sol) continue;
      const double delta = sol->theta4 - sol->theta5;
      field.kappa[grid.index(i, j)] = condition_number_closed(delta);
      field.cos_delta[grid.index(i, j)] = std::cos(delta);
    }
  }
  return field;
}

ContourSet extract_contours(const IsoField& field, const std::vector<double>& levels) {
  ContourSet set;
  set.levels = levels;
  for (double level : levels) {
    if (!std::isfinite(level) || level < 1.0) continue;
    // kappa = k along cos_delta = +-c; the signed surrogate is the field
    // that actually changes sign across the locus, kappa itself never
    // dips below a level tangentially touched at 1.
    const double c = (level * level - 1.0) / (level * level + 1.0);
    std::vector<double> sublevels{c};
    if (c > 0.0) sublevels.push_back(-c);
    for (double sub : sublevels) {
      std::vector<Segment> segments;
      march(field, sub, segments);
      for (Contour& contour : chain_segments(field, level, segments)) {
        set.contours.push_back(std::move(contour));
      }
    }
  }
  return set;
}

}  // namespace fivebar
