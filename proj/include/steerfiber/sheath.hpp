#pragma once

#include <numbers>
#include <vector>

#include "steerfiber/lie.hpp"

namespace steerfiber {

// Smallest bend radius the optical fiber tolerates (mm).
inline constexpr double kFiberMinBendRadius = 6.0;

// Geometry of an asymmetric-notch nitinol sheath. Defaults are the
// prototype values: 1.1 mm OD, 0.1 mm wall, ten notches.
struct SheathDesign {
  double notch_height = 0.19;   // h, axial height of each cut (mm)
  double cut_depth = 0.94;      // w, chordal depth from the outer surface (mm)
  double notch_spacing = 1.31;  // u, uncut length between notches (mm)
  int notch_count = 10;         // n
  double inner_radius = 0.45;   // mm
  double outer_radius = 0.55;   // mm
  double distal_offset = 1.0;   // end cap + fiber stick-out (mm)
  double precurve = 0.0;        // resting bend, rad, spread evenly over notches
  double z_travel = 17.0;       // axial translation stroke (mm)

  // Throws DomainError naming the first violated bound. With
  // allow_zero_height, h = 0 is accepted (used by the limit queries).
  void validate(bool allow_zero_height = false) const;
};

struct FiberConfig {
  double dl = 0.0;     // total tendon displacement (mm)
  double z = 0.0;      // axial translation (mm)
  double theta = 0.0;  // axial rotation (rad)
};

struct ArcParams {
  double kappa = 0.0;  // 1/mm
  double s = 0.0;      // mm

  double angle() const { return kappa * s; }
};

enum class ClosurePolicy {
  kError,  // displacement past full closure throws
  kClamp,  // displacement is clamped to closure and the result is flagged
};

// Distance (mm) from the tube axis to the centroid of the uncut cross
// section: annulus (r_i, r_o) minus a chordal cut of depth w.
double neutral_plane(const SheathDesign& design);

// Per-notch displacement at which the notch faces touch.
double closure_displacement_per_notch(const SheathDesign& design);
// Total tendon displacement at full closure.
double closure_displacement(const SheathDesign& design);

// Constant-curvature arc of one notch for a per-notch displacement.
ArcParams notch_arc(double dl_per_notch, const SheathDesign& design, ClosurePolicy policy = ClosurePolicy::kError);

// Maximum bend with all notches closed (rad). Excludes precurve.
double max_bend_angle(const SheathDesign& design);

// Bend angle the model predicts for a total displacement, including
// precurve. Exactly linear: dl / (r_i + ybar) + precurve.
double model_bend_angle(const SheathDesign& design, double dl_total);

// Section-level bend radius: bent length (n arcs and the n-1 spacers
// between them) over total bend angle. +inf when the section is straight.
double effective_bend_radius(const SheathDesign& design, double dl_total);

// effective_bend_radius at full closure.
double min_bend_radius(const SheathDesign& design);

// Total displacement producing bend angle `phi` (precurve included in phi).
double tendon_for_angle(const SheathDesign& design, double phi);

struct FiberKinematics {
  Pose tip;
  // Base frame before translation, the start of the steering section, every
  // cut/uncut boundary, four interior samples per notch and the tip.
  std::vector<Pose> backbone;
  ArcParams notch;          // arc used for every notch (precurve included)
  double bend_angle = 0.0;  // total, rad
  bool clamped = false;
};

// Pose of the fiber tip relative to the channel exit frame.
FiberKinematics forward_kinematics(const SheathDesign& design, const FiberConfig& config,
                                   ClosurePolicy policy = ClosurePolicy::kError);

// Throws DomainError naming the violated bound.
void check_admissible(const SheathDesign& design, const FiberConfig& config,
                      ClosurePolicy policy = ClosurePolicy::kError);

inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

}  // namespace steerfiber
