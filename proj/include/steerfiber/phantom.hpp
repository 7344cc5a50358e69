#pragma once

#include "steerfiber/mesh.hpp"

namespace steerfiber {

// Procedural larynx-like cavity along +z: a narrow approach tube (the
// pharyngeal passage the scope travels through) open at z = -approach_length,
// widening at z = 0 into a supraglottic chamber with lateral ventricle pockets, two medial vocal folds that leave a
// slit glottis, and a narrower subglottic tube closed at z = length.
struct LarynxPhantom {
  double approach_length = 40.0;        // mm above z = 0
  double approach_radius = 5.0;         // mm
  double flare_length = 6.0;            // approach-to-chamber transition (mm)
  double length = 45.0;                 // mm below z = 0
  double supraglottic_radius = 15.0;    // mm
  double subglottic_radius = 8.0;       // mm
  double fold_z = 28.0;                 // axial centre of the vocal folds (mm)
  double fold_half_thickness = 2.5;     // axial Gaussian width of the folds (mm)
  double glottal_half_gap = 1.5;        // half-width of the glottic slit (mm)
  double ventricle_z = 23.0;            // axial centre of the ventricle pockets (mm)
  double ventricle_depth = 3.0;         // radial bulge of the pockets (mm)
  double ventricle_half_height = 2.0;   // axial Gaussian width of the pockets (mm)
  int angular_segments = 96;
  int axial_segments = 150;

  // Wall radius at polar angle `angle` (from +x) and depth z.
  double wall_radius(double angle, double z) const;
};

TriMesh make_larynx_phantom(const LarynxPhantom& params = {});

}  // namespace steerfiber
