#include "fivebar/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace fivebar {
namespace {

void append_row(std::string& out, std::initializer_list<std::string> fields) {
  bool first = true;
  for (const std::string& field : fields) {
    if (!first) out += ',';
    out += field;
    first = false;
  }
  out += '\n';
}

std::string fmt_int(long long x) { return std::to_string(x); }

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                "#9467bd", "#ff7f0e", "#17becf"};

}  // namespace

std::string fmt_g12(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

Err write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return Err::Io;
  out << content;
  out.flush();
  return out ? Err::None : Err::Io;
}

std::string raster_csv(const WorkspaceRaster& raster) {
  std::string out = "# fivebar raster v1\nu,v,reachable,mode_mask,detA,detB,kappa,flags\n";
  const GridSpec& g = raster.grid;
  for (int iv = 0; iv < g.n; ++iv) {
    for (int iu = 0; iu < g.n; ++iu) {
      const RasterCell& cell = raster.cells[g.index(iu, iv)];
      append_row(out, {fmt_g12(g.u_at(iu)), fmt_g12(g.v_at(iv)), cell.reachable ? "1" : "0",
                       fmt_int(cell.mode_mask), fmt_g12(cell.det_a), fmt_g12(cell.det_b),
                       fmt_g12(cell.kappa), fmt_int(cell.flags)});
    }
  }
  return out;
}

std::string joint_csv(const JointRaster& raster) {
  std::string out = "# fivebar jointmap v1\ntheta2,theta3,feasible,detA,flags,err\n";
  const GridSpec& g = raster.grid;
  for (int iv = 0; iv < g.n; ++iv) {
    for (int iu = 0; iu < g.n; ++iu) {
      const JointCell& cell = raster.cells[g.index(iu, iv)];
      append_row(out, {fmt_g12(g.u_at(iu)), fmt_g12(g.v_at(iv)), cell.feasible ? "1" : "0",
                       fmt_g12(cell.det_a), fmt_int(cell.flags), err_name(cell.err)});
    }
  }
  return out;
}

std::string field_csv(const IsoField& field) {
  std::string out = "# fivebar isofield v1\nu,v,kappa\n";
  const GridSpec& g = field.grid;
  for (int iv = 0; iv < g.n; ++iv) {
    for (int iu = 0; iu < g.n; ++iu) {
      append_row(out, {fmt_g12(g.u_at(iu)), fmt_g12(g.v_at(iv)),
                       fmt_g12(field.kappa[g.index(iu, iv)])});
    }
  }
  return out;
}

std::string contours_csv(const ContourSet& contours) {
  std::string out = "# fivebar contours v1\nlevel,poly_id,seq,u,v\n";
  for (size_t id = 0; id < contours.contours.size(); ++id) {
    const Contour& contour = contours.contours[id];
    for (size_t seq = 0; seq < contour.points.size(); ++seq) {
      append_row(out, {fmt_g12(contour.level), fmt_int(static_cast<long long>(id)),
                       fmt_int(static_cast<long long>(seq)), fmt_g12(contour.points[seq].u),
                       fmt_g12(contour.points[seq].v)});
    }
  }
  return out;
}

std::string ranking_csv(const std::vector<DesignReport>& ranking) {
  std::string out =
      "# fivebar ranking v1\n"
      "rank,l0,l1,l2,volume,stderr,operative_modes,rule_satisfied,flat_eliminated,"
      "coincident_eliminated\n";
  for (size_t i = 0; i < ranking.size(); ++i) {
    const DesignReport& r = ranking[i];
    append_row(out, {fmt_int(static_cast<long long>(i)), fmt_g12(r.design.l0),
                     fmt_g12(r.design.l1), fmt_g12(r.design.l2), fmt_g12(r.volume.volume),
                     fmt_g12(r.volume.std_error), fmt_int(r.operative_mode_count),
                     r.design_rule_satisfied ? "1" : "0", r.flat_eliminated ? "1" : "0",
                     r.coincident_eliminated ? "1" : "0"});
  }
  return out;
}

std::string contours_svg(const IsoField& field, const ContourSet& contours) {
  const GridSpec& g = field.grid;
  const double width = 800.0;
  const double height = width * (g.vmax - g.vmin) / (g.umax - g.umin);
  const auto to_x = [&](double u) { return (u - g.umin) / (g.umax - g.umin) * width; };
  const auto to_y = [&](double v) { return height - (v - g.vmin) / (g.vmax - g.vmin) * height; };

  std::vector<double> distinct_levels;
  for (const Contour& contour : contours.contours) {
    bool seen = false;
    for (double level : distinct_levels) seen = seen || level == contour.level;
    if (!seen) distinct_levels.push_back(contour.level);
  }
  const auto color_of = [&](double level) {
    for (size_t i = 0; i < distinct_levels.size(); ++i) {
      if (distinct_levels[i] == level) return kPalette[i % 6];
    }
    return kPalette[0];
  };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << fmt_g12(width) << ' '
      << fmt_g12(height) << "\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << fmt_g12(width) << "\" height=\"" << fmt_g12(height)
      << "\" fill=\"white\" stroke=\"#444\"/>\n";
  for (const Contour& contour : contours.contours) {
    out << "<polyline fill=\"none\" stroke=\"" << color_of(contour.level)
        << "\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < contour.points.size(); ++i) {
      if (i) out << ' ';
      out << fmt_g12(to_x(contour.points[i].u)) << ',' << fmt_g12(to_y(contour.points[i].v));
    }
    out << "\"/>\n";
  }
  for (size_t i = 0; i < distinct_levels.size(); ++i) {
    out << "<text x=\"10\" y=\"" << fmt_g12(18.0 + 16.0 * i) << "\" font-size=\"13\" fill=\""
        << color_of(distinct_levels[i]) << "\">level " << fmt_g12(distinct_levels[i])
        << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace fivebar
