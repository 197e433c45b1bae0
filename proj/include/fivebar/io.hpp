#pragma once

#include <string>
#include <vector>

#include "fivebar/design.hpp"
#include "fivebar/workspace.hpp"

namespace fivebar {

// The one float format used in artifacts: %.12g, with non-finite values
// spelled inf / -inf / nan. Fixed so identical runs emit identical bytes.
std::string fmt_g12(double x);

// Writes content atomically enough for batch use; Err::Io on failure.
Err write_text_file(const std::string& path, const std::string& content);

// Every CSV starts with a `# fivebar <kind> v1` schema line, then a header.
std::string raster_csv(const WorkspaceRaster& raster);
std::string joint_csv(const JointRaster& raster);
std::string field_csv(const IsoField& field);
std::string contours_csv(const ContourSet& contours);
std::string ranking_csv(const std::vector<DesignReport>& ranking);

// Contour plot over the field's grid window; polylines are stroked per
// level with a small fixed palette and labeled once per level.
std::string contours_svg(const IsoField& field, const ContourSet& contours);

}  // namespace fivebar
