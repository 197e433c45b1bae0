#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

namespace fivebar {

inline constexpr double kPi = std::numbers::pi;

// Relative tolerance for geometric consistency (loop closure, link lengths).
inline constexpr double kConsistencyTol = 1e-9;
// Normalized determinants / sines below this threshold count as singular.
inline constexpr double kSingularTol = 1e-9;
// |sin(delta)| below this maps the closed-form condition number to +infinity.
inline constexpr double kKappaInfSinTol = 1e-12;
// sigma_min/sigma_max below this ratio reports an infinite SVD condition number.
inline constexpr double kSvdRatioTol = 1e-14;
inline constexpr std::uint64_t kDefaultSeed = 42;

enum class Err {
  None = 0,
  NonPositiveLink,
  NegativeBase,
  NonFinite,
  Unreachable,
  OnSerialBoundary,
  OnSerialSingularity,
  AxisDegenerate,
  UnreachableAssembly,
  DegenerateAssembly,
  ParallelSingular,
  SerialSingular,
  InvalidGrid,
  EmptySearchSpace,
  NoCrossing,
  ValidationFailed,
  Io,
};

const char* err_name(Err e);

/// Value-or-error carrier for operations with enumerated failure modes.
template <typename T>
class Result {
 public:
  Result(T value) : value_(std::move(value)), err_(Err::None) {}
  Result(Err e) : err_(e) {}

  bool ok() const { return err_ == Err::None; }
  explicit operator bool() const { return ok(); }
  Err error() const { return err_; }

  const T& operator*() const { return *value_; }
  T& operator*() { return *value_; }
  const T* operator->() const { return &*value_; }
  T* operator->() { return &*value_; }
  const T& value() const { return *value_; }

 private:
  std::optional<T> value_;
  Err err_;
};

/// Link lengths of the symmetric linkage. The two proximal links share l1 and
/// the two distal links share l2; l0 is the distance between the fixed pivots.
struct DesignParams {
  double l0 = 0.0;
  double l1 = 1.0;
  double l2 = 1.0;
};

Result<DesignParams> validate_design(double l0, double l1, double l2);

/// Point in the mechanism plane. v runs along the pivot line AB, u is the
/// in-plane coordinate perpendicular to it.
struct PlanarPoint {
  double u = 0.0;
  double v = 0.0;
};

inline PlanarPoint operator+(PlanarPoint a, PlanarPoint b) { return {a.u + b.u, a.v + b.v}; }
inline PlanarPoint operator-(PlanarPoint a, PlanarPoint b) { return {a.u - b.u, a.v - b.v}; }
inline PlanarPoint operator*(double s, PlanarPoint p) { return {s * p.u, s * p.v}; }
inline double dot(PlanarPoint a, PlanarPoint b) { return a.u * b.u + a.v * b.v; }
inline double cross(PlanarPoint a, PlanarPoint b) { return a.u * b.v - a.v * b.u; }
inline double norm(PlanarPoint p) { return std::hypot(p.u, p.v); }

/// Unit vector at angle theta from the +u axis, counterclockwise.
inline PlanarPoint planar_dir(double theta) { return {std::cos(theta), std::sin(theta)}; }

/// Point in the fixed world frame. The y axis runs along the pivot line AB.
struct WorldPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

inline WorldPoint operator-(WorldPoint a, WorldPoint b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline double norm(WorldPoint p) { return std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z); }

/// Joint angles. theta1 is the base revolute about line AB; theta2/theta3 are
/// the actuated leg angles (directions A->C and B->D); theta4/theta5 are the
/// passive distal angles (directions C->P and D->P). All planar angles are
/// measured from the +u axis, counterclockwise about the plane normal.
struct JointState {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double theta3 = 0.0;
  double theta4 = 0.0;
  double theta5 = 0.0;
};

/// Wraps into (-pi, pi].
double normalize_angle(double a);
JointState normalized(const JointState& j);

/// Branch label of the inverse kinematics: signs of the three diagonal
/// entries of the inverse-kinematics map under the positive normalization
/// (u_P / l1, sin(theta2 - theta4), sin(theta3 - theta5)). The assembled B
/// matrix carries one fixed global sign relative to these; the labels are
/// sign-stable inside a working mode either way.
struct WorkingMode {
  int eps1 = +1;
  int eps2 = +1;
  int eps3 = +1;

  int index() const { return ((eps1 < 0) << 2) | ((eps2 < 0) << 1) | (eps3 < 0); }
  static WorkingMode from_index(int i);
  static std::array<WorkingMode, 8> all();
  std::string str() const;  // e.g. "+-+"
  static Result<WorkingMode> parse(std::string_view s);
  friend bool operator==(const WorkingMode&, const WorkingMode&) = default;
};

/// Planar branch pair (eps2, eps3); eps1 is irrelevant for the flat linkage.
struct PlanarMode {
  int eps2 = +1;
  int eps3 = +1;

  int index() const { return ((eps2 < 0) << 1) | (eps3 < 0); }
  static std::array<PlanarMode, 4> all();
  friend bool operator==(const PlanarMode&, const PlanarMode&) = default;
};

/// Selects which of the two forward-kinematics solutions for P is taken:
/// gamma = sign of sin(theta4 - theta5).
struct AssemblyMode {
  int gamma = +1;
};

/// A fully resolved configuration.
struct Posture {
  DesignParams design;
  JointState joints;
  PlanarPoint c, d, p_plane;
  WorldPoint p_world;
};

/// Fixed pivots on the rotation axis, in plane coordinates.
inline PlanarPoint pivot_a(const DesignParams& d) { return {0.0, -0.5 * d.l0}; }
inline PlanarPoint pivot_b(const DesignParams& d) { return {0.0, +0.5 * d.l0}; }

/// In-plane coordinate of P perpendicular to the pivot line, from the leg-A
/// chain: u_P = l1 cos(theta2) + l2 cos(theta4).
inline double u_of(const DesignParams& d, const JointState& j) {
  return d.l1 * std::cos(j.theta2) + d.l2 * std::cos(j.theta4);
}

/// Sign triple of the posture's working mode. Fails when any of the three
/// branch quantities is within tolerance of zero (a serial singularity).
Result<WorkingMode> working_mode_of(const JointState& joints, const DesignParams& design);

}  // namespace fivebar
