#include "steerfiber/endoscope.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "steerfiber/cone.hpp"
#include "steerfiber/errors.hpp"
#include "steerfiber/raycast.hpp"

namespace steerfiber {

namespace {

constexpr int kArcSamples = 12;

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(6);
  ss << v;
  return ss.str();
}

}  // namespace

void ScopeDesign::validate() const {
  auto fail = [](const std::string& msg) { throw DomainError("scope." + msg); };
  if (!(shaft_diameter > 0.0)) fail("shaft_diameter must be > 0 (got " + fmt(shaft_diameter) + ")");
  if (!(bend_section_length > 0.0)) fail("bend_section_length must be > 0 (got " + fmt(bend_section_length) + ")");
  if (!(bend_min <= 0.0 && bend_max >= 0.0)) fail("bend range must contain 0");
  if (!(camera_fov > 0.0 && camera_fov < std::numbers::pi / 2)) fail("camera_fov must lie in (0, 90) degrees");
  if (!(camera_range > 0.0)) fail("camera_range must be > 0");
  if (!(insertion_min <= insertion_max)) fail("insertion_min must not exceed insertion_max");
  if (!channel_offset.allFinite() || !entry.allFinite()) fail("channel_offset and entry must be finite");
}

void check_admissible(const ScopeDesign& design, const ScopeConfig& config) {
  design.validate();
  if (!(config.insertion >= design.insertion_min && config.insertion <= design.insertion_max)) {
    throw DomainError("scope.insertion = " + fmt(config.insertion) + " mm outside [" + fmt(design.insertion_min) +
                      ", " + fmt(design.insertion_max) + "]");
  }
  if (!(config.tip_bend >= design.bend_min && config.tip_bend <= design.bend_max)) {
    throw DomainError("scope.tip_bend = " + fmt(rad_to_deg(config.tip_bend)) + " deg outside [" +
                      fmt(rad_to_deg(design.bend_min)) + ", " + fmt(rad_to_deg(design.bend_max)) + "]");
  }
  if (!std::isfinite(config.roll)) throw DomainError("scope.roll must be finite");
}

ScopeFrames scope_frames(const ScopeDesign& design, const ScopeConfig& config) {
  check_admissible(design, config);
  ScopeFrames out;
  out.base = Pose::translation(design.entry + Vec3(0.0, 0.0, config.insertion)) * Pose::rot_z(config.roll);
  const double length = design.bend_section_length;
  const Twist arc = Twist::arc_y(config.tip_bend / length);

  out.backbone.reserve(kArcSamples + 2);
  out.backbone.push_back(design.entry);
  out.backbone.push_back(out.base.translation());
  for (int k = 1; k <= kArcSamples; ++k) {
    out.backbone.push_back((out.base * exp_twist(arc, length * k / kArcSamples)).translation());
  }
  out.camera = out.base * exp_twist(arc, length);
  out.backbone.back() = out.camera.translation();
  out.channel_exit = out.camera * Pose::translation(Vec3(design.channel_offset.x(), design.channel_offset.y(), 0.0));
  return out;
}

std::vector<std::uint32_t> camera_visible_faces(const Pose& camera, const ScopeDesign& design, const TriMesh& mesh,
                                                std::size_t n_rays) {
  if (n_rays < 1) throw DomainError("camera ray count must be >= 1");
  const auto dirs = halton_cone(n_rays, design.camera_fov);
  return cast_cone_faces(camera, dirs, mesh, design.camera_range);
}

bool camera_sees_point(const Pose& camera, const ScopeDesign& design, const TriMesh& mesh, const Vec3& point,
                       std::uint32_t face) {
  const Vec3 v = point - camera.translation();
  const double dist = v.norm();
  if (!(dist > 0.0) || dist > design.camera_range) return false;
  const Vec3 dir = v / dist;
  if (std::atan2(camera.axis_z().cross(dir).norm(), camera.axis_z().dot(dir)) > design.camera_fov) return false;
  const auto hit = first_hit(Ray{camera.translation(), dir}, mesh);
  // A different face at the same distance means the spot sits on a shared edge.
  return hit && (hit->face == face || hit->t >= dist - 1e-6 * std::max(1.0, dist));
}

}  // namespace steerfiber
