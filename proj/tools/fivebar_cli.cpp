// Batch analysis front-end: reads a design plus a command off the command
// line (optionally merged over a key=value config file) and writes
// deterministic CSV/SVG/JSON artifacts. Exit codes: 0 ok, 2 usage,
// 3 kinematic, 4 io.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fivebar/design.hpp"
#include "fivebar/hybrid.hpp"
#include "fivebar/io.hpp"
#include "fivebar/planar.hpp"
#include "fivebar/planner.hpp"
#include "fivebar/singularity.hpp"
#include "fivebar/types.hpp"
#include "fivebar/workspace.hpp"

namespace {

using fivebar::Err;
using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitKinematic = 3;
constexpr int kExitIo = 4;

int exit_code_of(Err err) {
  switch (err) {
    case Err::None: return kExitOk;
    case Err::NonPositiveLink:
    case Err::NegativeBase:
    case Err::NonFinite:
    case Err::InvalidGrid:
    case Err::EmptySearchSpace: return kExitUsage;
    case Err::Io: return kExitIo;
    default: return kExitKinematic;
  }
}

int fail(Err err, const std::string& what) {
  std::cerr << "error: " << what << " (" << fivebar::err_name(err) << ")\n";
  if (exit_code_of(err) == kExitKinematic) {
    std::cout << json{{"error", fivebar::err_name(err)}}.dump(2) << "\n";
  }
  return exit_code_of(err);
}

int usage(const std::string& message) {
  std::cerr << "error: " << message << "\n"
            << "usage: fivebar <analyze|workspace|singularity-map|isocond|optimize|plan> "
               "[--key value | --key=value ...]\n"
               "common flags: --design L0,L1,L2  --grid umin,umax,vmin,vmax,N  --mode e1e2e3\n"
               "              --levels a,b,c  --seed n  --samples n  --out prefix  --config file\n"
               "analyze: --theta t1,t2,t3 --assembly +|-\n"
               "optimize: --budget b --l0-min x --l0-max x --l0-count n --split-count n\n"
               "plan: --start x,y,z --start-mode e1e2e3 --goal x,y,z --goal-mode e1e2e3\n";
  return kExitUsage;
}

// ---- flag and config parsing ----

using KeyValues = std::map<std::string, std::string>;

const std::set<std::string>& global_keys() {
  static const std::set<std::string> keys = {
      "design", "grid",   "mode",   "levels",     "seed",      "samples",  "out",
      "config", "theta",  "assembly", "budget",   "l0-min",    "l0-max",   "l0-count",
      "split-count", "start", "start-mode", "goal", "goal-mode"};
  return keys;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

bool parse_args(int argc, char** argv, std::vector<std::pair<std::string, std::string>>& out,
                std::string& message) {
  for (int i = 2; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg.rfind("--", 0) != 0 || arg.size() <= 2) {
      message = "expected --key value, got '" + arg + "'";
      return false;
    }
    arg = arg.substr(2);
    const auto eq = arg.find('=');
    if (eq != std::string::npos) {
      out.emplace_back(arg.substr(0, eq), arg.substr(eq + 1));
      continue;
    }
    if (i + 1 >= argc) {
      message = "flag --" + arg + " needs a value";
      return false;
    }
    out.emplace_back(arg, argv[++i]);
  }
  return true;
}

bool load_config(const std::string& path, const std::set<std::string>& command_keys,
                 KeyValues& merged, std::string& message) {
  std::ifstream in(path);
  if (!in) {
    message = "cannot read config file '" + path + "'";
    return false;
  }
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(line);
    if (text.empty() || text[0] == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      message = path + ":" + std::to_string(line_no) + ": expected key = value";
      return false;
    }
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (!global_keys().count(key)) {
      message = path + ":" + std::to_string(line_no) + ": unknown key '" + key + "'";
      return false;
    }
    // Keys meant for other commands are legal in a shared config file.
    if (command_keys.count(key)) merged[key] = value;
  }
  return true;
}

bool parse_double(const std::string& s, double& out) {
  const std::string text = trim(s);
  if (text.empty()) return false;
  char* end = nullptr;
  out = std::strtod(text.c_str(), &end);
  return end == text.c_str() + text.size();
}

bool parse_doubles(const std::string& s, size_t count, std::vector<double>& out) {
  out.clear();
  std::stringstream stream(s);
  std::string piece;
  while (std::getline(stream, piece, ',')) {
    double x;
    if (!parse_double(piece, x)) return false;
    out.push_back(x);
  }
  return count == 0 ? !out.empty() : out.size() == count;
}

bool parse_long(const std::string& s, long long& out) {
  double x;
  if (!parse_double(s, x) || x != static_cast<long long>(x)) return false;
  out = static_cast<long long>(x);
  return true;
}

// ---- typed access over the merged key/value view ----

struct Request {
  KeyValues kv;

  bool has(const std::string& key) const { return kv.count(key) != 0; }
  std::string get(const std::string& key, const std::string& fallback) const {
    const auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
  }
};

struct Parsed {
  std::optional<std::string> error;  // usage message when parsing failed

  template <typename T>
  T fail_with(const std::string& message, T value) {
    if (!error) error = message;
    return value;
  }
};

fivebar::DesignParams need_design(const Request& req, Parsed& parsed) {
  if (!req.has("design")) return parsed.fail_with("missing --design", fivebar::DesignParams{});
  std::vector<double> vals;
  if (!parse_doubles(req.kv.at("design"), 3, vals)) {
    return parsed.fail_with("--design expects L0,L1,L2", fivebar::DesignParams{});
  }
  return {vals[0], vals[1], vals[2]};
}

fivebar::GridSpec grid_or(const Request& req, Parsed& parsed, fivebar::GridSpec fallback) {
  if (!req.has("grid")) return fallback;
  std::vector<double> vals;
  if (!parse_doubles(req.kv.at("grid"), 5, vals) || vals[4] != static_cast<int>(vals[4])) {
    return parsed.fail_with("--grid expects umin,umax,vmin,vmax,N", fallback);
  }
  return {vals[0], vals[1], vals[2], vals[3], static_cast<int>(vals[4])};
}

fivebar::WorkingMode mode_or(const Request& req, Parsed& parsed, const std::string& key,
                             fivebar::WorkingMode fallback) {
  if (!req.has(key)) return fallback;
  auto mode = fivebar::WorkingMode::parse(req.kv.at(key));
  if (!mode) return parsed.fail_with("--" + key + " expects three signs, e.g. +-+", fallback);
  return *mode;
}

long long long_or(const Request& req, Parsed& parsed, const std::string& key, long long fallback) {
  if (!req.has(key)) return fallback;
  long long value = fallback;
  if (!parse_long(req.kv.at(key), value)) {
    return parsed.fail_with("--" + key + " expects an integer", fallback);
  }
  return value;
}

double double_or(const Request& req, Parsed& parsed, const std::string& key, double fallback) {
  if (!req.has(key)) return fallback;
  double value = fallback;
  if (!parse_double(req.kv.at(key), value)) {
    return parsed.fail_with("--" + key + " expects a number", fallback);
  }
  return value;
}

fivebar::WorldPoint point_or(const Request& req, Parsed& parsed, const std::string& key) {
  std::vector<double> vals;
  if (!req.has(key) || !parse_doubles(req.kv.at(key), 3, vals)) {
    return parsed.fail_with("--" + key + " expects x,y,z", fivebar::WorldPoint{});
  }
  return {vals[0], vals[1], vals[2]};
}

// ---- shared JSON shapes ----

json jnum(double x) {
  if (std::isfinite(x)) return x;
  return fivebar::fmt_g12(x);  // inf / -inf / nan as strings
}

json jdesign(const fivebar::DesignParams& d) {
  return {{"l0", jnum(d.l0)}, {"l1", jnum(d.l1)}, {"l2", jnum(d.l2)}};
}

json jpoint(const fivebar::WorldPoint& p) {
  return {{"x", jnum(p.x)}, {"y", jnum(p.y)}, {"z", jnum(p.z)}};
}

std::string pair_str(const fivebar::PlanarMode& mode) {
  return std::string(1, mode.eps2 > 0 ? '+' : '-') + (mode.eps3 > 0 ? '+' : '-');
}

std::string design_tag(const fivebar::DesignParams& d) {
  return fivebar::fmt_g12(d.l0) + "_" + fivebar::fmt_g12(d.l1) + "_" + fivebar::fmt_g12(d.l2);
}

std::string artifact_path(const Request& req, const std::string& command, const std::string& tag,
                          const std::string& suffix) {
  return req.get("out", "out") + "_" + command + "_" + tag + "_" + suffix;
}

int write_or_fail(const std::string& path, const std::string& content) {
  const Err err = fivebar::write_text_file(path, content);
  if (err != Err::None) return fail(err, "cannot write '" + path + "'");
  std::cerr << "wrote " << path << "\n";
  return kExitOk;
}

fivebar::GridSpec default_plane_grid(const fivebar::DesignParams& design) {
  const double r = 1.1 * (0.5 * design.l0 + design.l1 + design.l2);
  return fivebar::GridSpec::square(r, 221);
}

// ---- commands ----

int cmd_analyze(const Request& req) {
  Parsed parsed;
  const fivebar::DesignParams raw = need_design(req, parsed);
  std::vector<double> theta;
  if (!req.has("theta") || !parse_doubles(req.kv.at("theta"), 3, theta)) {
    parsed.fail_with("--theta expects theta1,theta2,theta3", 0);
  }
  const std::string assembly_text = req.get("assembly", "+");
  if (assembly_text != "+" && assembly_text != "-") parsed.fail_with("--assembly expects + or -", 0);
  if (parsed.error) return usage(*parsed.error);

  const auto design = fivebar::validate_design(raw.l0, raw.l1, raw.l2);
  if (!design) return fail(design.error(), "invalid design");
  const fivebar::AssemblyMode assembly{assembly_text == "+" ? +1 : -1};

  const auto posture = fivebar::hybrid_fk(*design, theta[0], theta[1], theta[2], assembly);
  if (!posture) return fail(posture.error(), "posture is not realizable");

  const fivebar::Jacobians jac = fivebar::jacobians(*posture);
  const fivebar::SingularityReport report = fivebar::classify(*posture);
  const auto mode = fivebar::working_mode_of(posture->joints, *design);

  json out;
  out["design"] = jdesign(*design);
  out["assembly"] = assembly_text;
  json joints;
  joints["theta1"] = jnum(posture->joints.theta1);
  joints["theta2"] = jnum(posture->joints.theta2);
  joints["theta3"] = jnum(posture->joints.theta3);
  joints["theta4"] = jnum(posture->joints.theta4);
  joints["theta5"] = jnum(posture->joints.theta5);
  out["joints"] = joints;
  out["working_mode"] = mode ? json(mode->str()) : json(nullptr);
  out["points"] = {{"c", {jnum(posture->c.u), jnum(posture->c.v)}},
                   {"d", {jnum(posture->d.u), jnum(posture->d.v)}},
                   {"p_plane", {jnum(posture->p_plane.u), jnum(posture->p_plane.v)}},
                   {"p_world", jpoint(posture->p_world)}};
  json a = json::array(), b = json::array();
  for (int r = 0; r < 3; ++r) {
    a.push_back({jnum(jac.a(r, 0)), jnum(jac.a(r, 1)), jnum(jac.a(r, 2))});
    b.push_back({jnum(jac.b(r, 0)), jnum(jac.b(r, 1)), jnum(jac.b(r, 2))});
  }
  out["jacobian_a"] = a;
  out["jacobian_b"] = b;
  out["det_a_norm"] = jnum(report.det_a_norm);
  out["det_b_norm"] = jnum(report.det_b_norm);
  out["kappa_closed"] = jnum(report.kappa);
  out["kappa_svd"] = jnum(fivebar::condition_number_svd(*posture));
  json kinds = json::array();
  for (int k = 1; k <= 5; ++k) {
    if (report.flags & (1u << k)) {
      kinds.push_back(fivebar::singularity_name(static_cast<fivebar::SingularityType>(k)));
    }
  }
  out["singularity"] = {{"kind", fivebar::singularity_name(report.kind)},
                        {"active", kinds},
                        {"delta", jnum(report.delta)}};
  out["loop_residual"] = jnum(fivebar::posture_residual(*posture));

  const std::string text = out.dump(2) + "\n";
  std::cout << text;
  if (req.has("out")) {
    return write_or_fail(artifact_path(req, "analyze", design_tag(*design), "report.json"), text);
  }
  return kExitOk;
}

int cmd_workspace(const Request& req) {
  Parsed parsed;
  const fivebar::DesignParams raw = need_design(req, parsed);
  if (parsed.error) return usage(*parsed.error);
  const auto design = fivebar::validate_design(raw.l0, raw.l1, raw.l2);
  if (!design) return fail(design.error(), "invalid design");

  const fivebar::GridSpec grid = grid_or(req, parsed, default_plane_grid(*design));
  std::optional<fivebar::WorkingMode> mode;
  if (req.has("mode")) mode = mode_or(req, parsed, "mode", {});
  const long long samples = long_or(req, parsed, "samples", 1000000);
  const long long seed = long_or(req, parsed, "seed", fivebar::kDefaultSeed);
  if (parsed.error) return usage(*parsed.error);

  const auto raster = fivebar::cross_section(*design, grid, mode);
  if (!raster) return fail(raster.error(), "cross-section failed");
  const fivebar::VolumeEstimate volume =
      fivebar::workspace_volume(*design, samples, static_cast<std::uint64_t>(seed));
  const auto operative =
      fivebar::operative_working_modes(*design, 4000, static_cast<std::uint64_t>(seed));

  json summary;
  summary["design"] = jdesign(*design);
  summary["grid"] = {{"umin", jnum(grid.umin)}, {"umax", jnum(grid.umax)},
                     {"vmin", jnum(grid.vmin)}, {"vmax", jnum(grid.vmax)}, {"n", grid.n}};
  summary["seed"] = seed;
  summary["reachable_area"] = jnum(raster->reachable_area());
  if (mode) summary["mode"] = mode->str();
  if (mode) summary["mode_area"] = jnum(raster->mode_area(*mode));
  summary["volume"] = {{"volume", jnum(volume.volume)},
                       {"std_error", jnum(volume.std_error)},
                       {"samples", volume.samples}};
  if (design->l0 == 0.0) {
    summary["closed_form_volume"] = jnum(fivebar::closed_form_volume_zero_offset(*design));
  }
  json modes = json::array();
  for (const auto& report : operative) {
    modes.push_back({{"pair", pair_str(report.mode)},
                     {"operative", report.operative},
                     {"max_abs_det", jnum(report.max_abs_det)}});
  }
  summary["operative_modes"] = modes;

  const std::string tag = design_tag(*design);
  if (int rc = write_or_fail(artifact_path(req, "workspace", tag, "raster.csv"),
                             fivebar::raster_csv(*raster))) {
    return rc;
  }
  return write_or_fail(artifact_path(req, "workspace", tag, "summary.json"),
                       summary.dump(2) + "\n");
}

int cmd_singularity_map(const Request& req) {
  Parsed parsed;
  const fivebar::DesignParams raw = need_design(req, parsed);
  const fivebar::GridSpec grid = grid_or(
      req, parsed, fivebar::GridSpec{-fivebar::kPi, fivebar::kPi, -fivebar::kPi, fivebar::kPi, 721});
  const std::string assembly_text = req.get("assembly", "+");
  if (assembly_text != "+" && assembly_text != "-") parsed.fail_with("--assembly expects + or -", 0);
  if (parsed.error) return usage(*parsed.error);
  const auto design = fivebar::validate_design(raw.l0, raw.l1, raw.l2);
  if (!design) return fail(design.error(), "invalid design");

  const auto raster =
      fivebar::joint_space_map(*design, grid, {assembly_text == "+" ? +1 : -1});
  if (!raster) return fail(raster.error(), "joint-space map failed");

  long long feasible = 0, flat = 0, coincident = 0, serial = 0;
  for (const auto& cell : raster->cells) {
    feasible += cell.feasible ? 1 : 0;
    const unsigned f = cell.flags;
    flat += (f >> static_cast<int>(fivebar::SingularityType::ParallelFlat)) & 1u;
    coincident += (f >> static_cast<int>(fivebar::SingularityType::ParallelCoincident)) & 1u;
    const unsigned serial_mask = (1u << static_cast<int>(fivebar::SingularityType::SerialLegA)) |
                                 (1u << static_cast<int>(fivebar::SingularityType::SerialLegB)) |
                                 (1u << static_cast<int>(fivebar::SingularityType::SerialAxis));
    serial += (f & serial_mask) ? 1 : 0;
  }
  json summary;
  summary["design"] = jdesign(*design);
  summary["assembly"] = assembly_text;
  summary["grid"] = {{"theta2_min", jnum(grid.umin)}, {"theta2_max", jnum(grid.umax)},
                     {"theta3_min", jnum(grid.vmin)}, {"theta3_max", jnum(grid.vmax)},
                     {"n", grid.n}};
  summary["cells_total"] = static_cast<long long>(raster->cells.size());
  summary["cells_feasible"] = feasible;
  summary["cells_parallel_flat"] = flat;
  summary["cells_parallel_coincident"] = coincident;
  summary["cells_parallel"] = flat + coincident;
  summary["cells_serial"] = serial;

  const std::string tag = design_tag(*design);
  if (int rc = write_or_fail(artifact_path(req, "singularity-map", tag, "joint.csv"),
                             fivebar::joint_csv(*raster))) {
    return rc;
  }
  return write_or_fail(artifact_path(req, "singularity-map", tag, "summary.json"),
                       summary.dump(2) + "\n");
}

int cmd_isocond(const Request& req) {
  Parsed parsed;
  const fivebar::DesignParams raw = need_design(req, parsed);
  if (!req.has("mode")) parsed.fail_with("missing --mode", 0);
  const fivebar::WorkingMode mode = mode_or(req, parsed, "mode", {});
  std::vector<double> levels{1.0, 1.5, 2.0};
  if (req.has("levels") && !parse_doubles(req.kv.at("levels"), 0, levels)) {
    parsed.fail_with("--levels expects a,b,c", 0);
  }
  if (parsed.error) return usage(*parsed.error);
  const auto design = fivebar::validate_design(raw.l0, raw.l1, raw.l2);
  if (!design) return fail(design.error(), "invalid design");
  const fivebar::GridSpec grid = grid_or(req, parsed, default_plane_grid(*design));
  if (parsed.error) return usage(*parsed.error);

  const auto field = fivebar::isoconditioning_field(*design, grid, mode);
  if (!field) return fail(field.error(), "field evaluation failed");
  const fivebar::ContourSet contours = fivebar::extract_contours(*field, levels);

  const std::string tag = design_tag(*design) + "_" + mode.str();
  if (int rc = write_or_fail(artifact_path(req, "isocond", tag, "field.csv"),
                             fivebar::field_csv(*field))) {
    return rc;
  }
  if (int rc = write_or_fail(artifact_path(req, "isocond", tag, "contours.csv"),
                             fivebar::contours_csv(contours))) {
    return rc;
  }
  return write_or_fail(artifact_path(req, "isocond", tag, "contours.svg"),
                       fivebar::contours_svg(*field, contours));
}

int cmd_optimize(const Request& req) {
  Parsed parsed;
  const double budget = double_or(req, parsed, "budget", 0.0);
  if (!req.has("budget")) parsed.fail_with("missing --budget", 0);
  const double l0_min = double_or(req, parsed, "l0-min", 0.0);
  const double l0_max = double_or(req, parsed, "l0-max", budget / 4.0);
  const long long l0_count = long_or(req, parsed, "l0-count", 5);
  const long long split_count = long_or(req, parsed, "split-count", 9);
  const long long samples = long_or(req, parsed, "samples", 200000);
  const long long seed = long_or(req, parsed, "seed", fivebar::kDefaultSeed);
  if (parsed.error) return usage(*parsed.error);

  const auto spec = fivebar::DesignSearchSpec::uniform(l0_min, l0_max, static_cast<int>(l0_count),
                                                       static_cast<int>(split_count));
  const auto result =
      fivebar::optimize_workspace(budget, spec, samples, static_cast<std::uint64_t>(seed));
  if (!result) return fail(result.error(), "design search failed");

  json best;
  best["budget"] = jnum(budget);
  best["seed"] = seed;
  best["samples"] = samples;
  best["candidates"] = static_cast<long long>(result->ranking.size());
  best["best"] = {{"design", jdesign(result->best.design)},
                  {"volume", jnum(result->best.volume.volume)},
                  {"std_error", jnum(result->best.volume.std_error)},
                  {"operative_mode_count", result->best.operative_mode_count},
                  {"rule_satisfied", result->best.design_rule_satisfied},
                  {"flat_eliminated", result->best.flat_eliminated},
                  {"coincident_eliminated", result->best.coincident_eliminated}};

  const std::string tag = "budget" + fivebar::fmt_g12(budget);
  if (int rc = write_or_fail(artifact_path(req, "optimize", tag, "ranking.csv"),
                             fivebar::ranking_csv(result->ranking))) {
    return rc;
  }
  return write_or_fail(artifact_path(req, "optimize", tag, "best.json"), best.dump(2) + "\n");
}

int cmd_plan(const Request& req) {
  Parsed parsed;
  const fivebar::DesignParams raw = need_design(req, parsed);
  const fivebar::WorldPoint start = point_or(req, parsed, "start");
  const fivebar::WorldPoint goal = point_or(req, parsed, "goal");
  if (!req.has("start-mode")) parsed.fail_with("missing --start-mode", 0);
  if (!req.has("goal-mode")) parsed.fail_with("missing --goal-mode", 0);
  const fivebar::WorkingMode start_mode = mode_or(req, parsed, "start-mode", {});
  const fivebar::WorkingMode goal_mode = mode_or(req, parsed, "goal-mode", {});
  if (parsed.error) return usage(*parsed.error);
  const auto design = fivebar::validate_design(raw.l0, raw.l1, raw.l2);
  if (!design) return fail(design.error(), "invalid design");

  const auto plan = fivebar::plan_mode_change(*design, start, start_mode, goal, goal_mode);
  if (!plan) return fail(plan.error(), "planning failed");

  json out;
  out["design"] = jdesign(*design);
  out["start"] = {{"point", jpoint(start)}, {"mode", start_mode.str()}};
  out["goal"] = {{"point", jpoint(goal)}, {"mode", goal_mode.str()}};
  out["total_length"] = jnum(plan->total_length);
  out["validation_step"] = jnum(plan->validation_step);
  json waypoints = json::array();
  for (const auto& wp : plan->waypoints) {
    waypoints.push_back({{"point", jpoint(wp.point)}, {"mode", wp.mode.str()}});
  }
  out["waypoints"] = waypoints;
  json crossings = json::array();
  for (const auto& crossing : plan->crossings) {
    crossings.push_back({{"point", jpoint(crossing.point)},
                         {"boundary", fivebar::crossing_name(crossing.boundary)}});
  }
  out["crossings"] = crossings;

  const std::string text = out.dump(2) + "\n";
  std::cout << text;
  if (req.has("out")) {
    return write_or_fail(artifact_path(req, "plan", design_tag(*design), "plan.json"), text);
  }
  return kExitOk;
}

const std::set<std::string>& keys_for(const std::string& command) {
  static const std::map<std::string, std::set<std::string>> per_command = {
      {"analyze", {"design", "theta", "assembly", "out", "config"}},
      {"workspace", {"design", "grid", "mode", "samples", "seed", "out", "config"}},
      {"singularity-map", {"design", "grid", "assembly", "out", "config"}},
      {"isocond", {"design", "grid", "mode", "levels", "out", "config"}},
      {"optimize",
       {"budget", "l0-min", "l0-max", "l0-count", "split-count", "samples", "seed", "out",
        "config"}},
      {"plan", {"design", "start", "start-mode", "goal", "goal-mode", "out", "config"}},
  };
  return per_command.at(command);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) return usage("missing command");
  const std::string command = argv[1];
  const std::set<std::string> known = {"analyze", "workspace", "singularity-map",
                                       "isocond",  "optimize", "plan"};
  if (!known.count(command)) return usage("unknown command '" + command + "'");

  std::vector<std::pair<std::string, std::string>> args;
  std::string message;
  if (!parse_args(argc, argv, args, message)) return usage(message);
  const std::set<std::string>& allowed = keys_for(command);
  for (const auto& [key, value] : args) {
    if (!allowed.count(key)) return usage("unknown flag --" + key + " for " + command);
  }

  Request req;
  for (const auto& [key, value] : args) {
    if (key == "config" && !load_config(value, allowed, req.kv, message)) return usage(message);
  }
  for (const auto& [key, value] : args) {
    if (key != "config") req.kv[key] = value;  // command line wins over config
  }

  if (command == "analyze") return cmd_analyze(req);
  if (command == "workspace") return cmd_workspace(req);
  if (command == "singularity-map") return cmd_singularity_map(req);
  if (command == "isocond") return cmd_isocond(req);
  if (command == "optimize") return cmd_optimize(req);
  return cmd_plan(req);
}
