#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "steerfiber/mesh.hpp"
#include "steerfiber/sheath.hpp"

namespace steerfiber {

// Parametric flexible endoscope: a rigid shaft advanced along world +z from
// `entry`, a single-plane constant-curvature bending section, and a camera
// at the distal face. Defaults are documented estimates, not measured data.
struct ScopeDesign {
  double shaft_diameter = 5.0;                       // mm
  Eigen::Vector2d channel_offset{1.2, 0.0};          // channel axis in the camera's tip cross-section (mm)
  double bend_section_length = 30.0;                 // mm
  double bend_min = deg_to_rad(-130.0);              // rad
  double bend_max = deg_to_rad(130.0);               // rad
  double camera_fov = deg_to_rad(45.0);              // half-angle, rad
  double camera_range = std::numeric_limits<double>::infinity();  // mm
  Vec3 entry{0.0, 0.0, -40.0};                       // shaft origin at zero insertion (mm)
  double insertion_min = 0.0;                        // mm
  double insertion_max = 20.0;                       // mm

  double radius() const { return 0.5 * shaft_diameter; }
  void validate() const;
};

struct ScopeConfig {
  double insertion = 0.0;  // mm along +z
  double roll = 0.0;       // rad about the shaft axis
  double tip_bend = 0.0;   // rad
};

struct ScopeFrames {
  Pose base;          // start of the bending section
  Pose camera;        // distal face, z = viewing direction
  Pose channel_exit;  // working-channel exit, z parallel to camera z
  std::vector<Vec3> backbone;  // entry, base, then samples along the arc
};

void check_admissible(const ScopeDesign& design, const ScopeConfig& config);

ScopeFrames scope_frames(const ScopeDesign& design, const ScopeConfig& config);

// Faces struck first by at least one of n_rays Halton-distributed rays over
// the camera cone, within camera_range.
std::vector<std::uint32_t> camera_visible_faces(const Pose& camera, const ScopeDesign& design, const TriMesh& mesh,
                                                std::size_t n_rays);

// True iff `point`, lying on `face`, is inside the camera cone and range and
// the camera's line of sight reaches it unoccluded.
bool camera_sees_point(const Pose& camera, const ScopeDesign& design, const TriMesh& mesh, const Vec3& point,
                       std::uint32_t face);

}  // namespace steerfiber
