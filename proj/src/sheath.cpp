#include "steerfiber/sheath.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "steerfiber/errors.hpp"

namespace steerfiber {

namespace {

constexpr int kInteriorSamplesPerNotch = 4;

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(6);
  ss << v;
  return ss.str();
}

// Area and centroid distance of the circular segment of radius r lying
// beyond a chord at distance d from the centre.
struct Segment {
  double area = 0.0;
  double centroid = 0.0;
};

Segment circular_segment(double r, double d) {
  if (d >= r) return {};
  const double half_chord = std::sqrt(r * r - d * d);
  const double area = r * r * std::acos(d / r) - d * half_chord;
  return {area, 2.0 * half_chord * half_chord * half_chord / (3.0 * area)};
}

}  // namespace

void SheathDesign::validate(bool allow_zero_height) const {
  auto fail = [](const std::string& msg) { throw DomainError("sheath." + msg); };
  if (!(inner_radius > 0.0)) fail("inner_radius must be > 0 (got " + fmt(inner_radius) + ")");
  if (!(outer_radius > inner_radius)) {
    fail("outer_radius must exceed inner_radius (got " + fmt(outer_radius) + " <= " + fmt(inner_radius) + ")");
  }
  if (!(cut_depth > outer_radius)) {
    fail("cut_depth must exceed outer_radius so the cut passes the axis (got " + fmt(cut_depth) + " <= " +
         fmt(outer_radius) + ")");
  }
  if (!(cut_depth < 2.0 * outer_radius)) {
    fail("cut_depth must be < 2*outer_radius or no material remains (got " + fmt(cut_depth) + ")");
  }
  if (allow_zero_height ? !(notch_height >= 0.0) : !(notch_height > 0.0)) {
    fail("notch_height must be > 0 (got " + fmt(notch_height) + ")");
  }
  if (!(notch_spacing > 0.0)) fail("notch_spacing must be > 0 (got " + fmt(notch_spacing) + ")");
  if (notch_count < 1) fail("notch_count must be >= 1 (got " + std::to_string(notch_count) + ")");
  if (!(distal_offset >= 0.0)) fail("distal_offset must be >= 0 (got " + fmt(distal_offset) + ")");
  if (!std::isfinite(precurve)) fail("precurve must be finite");
  if (!(z_travel >= 0.0)) fail("z_travel must be >= 0 (got " + fmt(z_travel) + ")");
}

double neutral_plane(const SheathDesign& design) {
  design.validate(true);
  const double d = design.cut_depth - design.outer_radius;
  const Segment outer = circular_segment(design.outer_radius, d);
  const Segment inner = circular_segment(design.inner_radius, d);
  const double area = outer.area - inner.area;
  if (!(area > 0.0)) throw DomainError("sheath.cut_depth leaves no material in the spine");
  return (outer.centroid * outer.area - inner.centroid * inner.area) / area;
}

double closure_displacement_per_notch(const SheathDesign& design) {
  const double ybar = neutral_plane(design);
  return design.notch_height * (design.inner_radius + ybar) / (design.outer_radius + ybar);
}

double closure_displacement(const SheathDesign& design) {
  return design.notch_count * closure_displacement_per_notch(design);
}

ArcParams notch_arc(double dl_per_notch, const SheathDesign& design, ClosurePolicy policy) {
  const double ybar = neutral_plane(design);
  const double closure = closure_displacement_per_notch(design);
  if (!(dl_per_notch >= 0.0)) throw DomainError("tendon displacement must be >= 0 (got " + fmt(dl_per_notch) + ")");
  if (dl_per_notch > closure) {
    if (policy == ClosurePolicy::kError) {
      throw DomainError("per-notch displacement " + fmt(dl_per_notch) + " mm exceeds closure limit " +
                        fmt(closure) + " mm");
    }
    dl_per_notch = closure;
  }
  const double h = design.notch_height;
  const double kappa = dl_per_notch / (h * (design.inner_radius + ybar) - dl_per_notch * ybar);
  return {kappa, h / (1.0 + ybar * kappa)};
}

double max_bend_angle(const SheathDesign& design) {
  const double ybar = neutral_plane(design);
  return design.notch_count * design.notch_height / (design.outer_radius + ybar);
}

double model_bend_angle(const SheathDesign& design, double dl_total) {
  return dl_total / (design.inner_radius + neutral_plane(design)) + design.precurve;
}

double effective_bend_radius(const SheathDesign& design, double dl_total) {
  const int n = design.notch_count;
  const ArcParams arc = notch_arc(dl_total / n, design, ClosurePolicy::kClamp);
  const double angle = n * arc.angle() + design.precurve;
  if (!(std::abs(angle) > 0.0)) return std::numeric_limits<double>::infinity();
  return ((n - 1) * design.notch_spacing + n * arc.s) / std::abs(angle);
}

double min_bend_radius(const SheathDesign& design) {
  design.validate(true);
  if (design.notch_height == 0.0 && design.precurve == 0.0) return std::numeric_limits<double>::infinity();
  if (design.notch_height == 0.0) {
    return (design.notch_count - 1) * design.notch_spacing / std::abs(design.precurve);
  }
  return effective_bend_radius(design, closure_displacement(design));
}

double tendon_for_angle(const SheathDesign& design, double phi) {
  const double phi_max = max_bend_angle(design);
  const double tendon_phi = phi - design.precurve;
  if (!(tendon_phi >= 0.0) || tendon_phi > phi_max * (1.0 + 1e-12)) {
    throw DomainError("bend angle " + fmt(phi) + " rad outside reachable range [" + fmt(design.precurve) + ", " +
                      fmt(design.precurve + phi_max) + "]");
  }
  return std::min(tendon_phi * (design.inner_radius + neutral_plane(design)), closure_displacement(design));
}

void check_admissible(const SheathDesign& design, const FiberConfig& config, ClosurePolicy policy) {
  design.validate();
  if (!(config.dl >= 0.0)) throw DomainError("fiber.dl must be >= 0 mm (got " + fmt(config.dl) + ")");
  const double closure = closure_displacement(design);
  if (policy == ClosurePolicy::kError && config.dl > closure) {
    throw DomainError("fiber.dl = " + fmt(config.dl) + " mm exceeds closure limit " + fmt(closure) + " mm");
  }
  if (!(config.z >= 0.0) || config.z > design.z_travel) {
    throw DomainError("fiber.z = " + fmt(config.z) + " mm outside travel [0, " + fmt(design.z_travel) + "]");
  }
  if (!std::isfinite(config.theta)) throw DomainError("fiber.theta must be finite");
}

FiberKinematics forward_kinematics(const SheathDesign& design, const FiberConfig& config, ClosurePolicy policy) {
  check_admissible(design, config, policy);
  const int n = design.notch_count;
  const double closure = closure_displacement(design);

  FiberKinematics out;
  out.clamped = config.dl > closure;
  ArcParams arc = notch_arc(std::min(config.dl, closure) / n, design, policy);
  // The resting bend is an extra fixed angle per notch at the same arc length.
  arc.kappa += design.precurve / n / arc.s;
  out.notch = arc;
  out.bend_angle = n * arc.angle();

  const double max_step = std::max(design.notch_height, design.notch_spacing);
  const Twist straight = Twist::translation_z();
  const Twist bend = Twist::arc_y(arc.kappa);

  Pose frame = Pose::rot_z(config.theta);
  out.backbone.push_back(frame);
  auto advance_straight = [&](double length) {
    const int steps = std::max(1, static_cast<int>(std::ceil(length / max_step)));
    const Pose step = exp_twist(straight, length / steps);
    for (int k = 0; k < steps; ++k) {
      frame = frame * step;
      out.backbone.push_back(frame);
    }
  };

  if (config.z > 0.0) advance_straight(config.z);
  const Pose notch_step = exp_twist(bend, arc.s / (kInteriorSamplesPerNotch + 1));
  const Pose uncut = exp_twist(straight, design.notch_spacing);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k <= kInteriorSamplesPerNotch; ++k) {
      frame = frame * notch_step;
      out.backbone.push_back(frame);
    }
    frame = frame * uncut;
    out.backbone.push_back(frame);
  }
  if (design.distal_offset > 0.0) advance_straight(design.distal_offset);
  out.tip = frame;
  return out;
}

}  // namespace steerfiber
