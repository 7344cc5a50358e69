#include "steerfiber/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "steerfiber/errors.hpp"

namespace steerfiber {

double LarynxPhantom::wall_radius(double angle, double z) const {
  // Smooth step from the supraglottic to the subglottic radius below the folds.
  const double t = std::clamp((z - fold_z) / (2.0 * fold_half_thickness), 0.0, 1.0);
  const double blend = t * t * (3.0 - 2.0 * t);
  double base = supraglottic_radius + (subglottic_radius - supraglottic_radius) * blend;
  if (z < flare_length) {
    const double u = std::clamp(z / flare_length, 0.0, 1.0);
    base = approach_radius + (base - approach_radius) * u * u * (3.0 - 2.0 * u);
  }

  const double lateral = std::abs(std::cos(angle));
  const double pocket = ventricle_depth * lateral * lateral *
                        std::exp(-std::pow((z - ventricle_z) / ventricle_half_height, 2));

  // Folds close the lumen down to |x| = glottal_half_gap.
  const double slit = lateral > 1e-9 ? std::min(base, glottal_half_gap / lateral) : base;
  const double fold = std::exp(-std::pow((z - fold_z) / fold_half_thickness, 2));
  return base + pocket - fold * (base - slit);
}

TriMesh make_larynx_phantom(const LarynxPhantom& p) {
  if (p.angular_segments < 3 || p.axial_segments < 1 || !(p.length > 0.0) || !(p.approach_length >= 0.0)) {
    throw DomainError("phantom resolution and length must be positive");
  }
  const int na = p.angular_segments;
  const int nz = p.axial_segments;
  std::vector<Vec3> vertices;
  vertices.reserve(static_cast<std::size_t>(na) * (nz + 1) + 1);
  for (int k = 0; k <= nz; ++k) {
    const double z = -p.approach_length + (p.length + p.approach_length) * k / nz;
    for (int j = 0; j < na; ++j) {
      const double a = 2.0 * std::numbers::pi * j / na;
      const double r = p.wall_radius(a, z);
      vertices.emplace_back(r * std::cos(a), r * std::sin(a), z);
    }
  }
  auto at = [na](int k, int j) { return static_cast<std::uint32_t>(k * na + (j % na)); };
  std::vector<Face> faces;
  faces.reserve(static_cast<std::size_t>(2) * na * nz + na);
  for (int k = 0; k < nz; ++k) {
    for (int j = 0; j < na; ++j) {
      // Wound so normals point into the lumen.
      faces.push_back({at(k, j), at(k + 1, j), at(k + 1, j + 1)});
      faces.push_back({at(k, j), at(k + 1, j + 1), at(k, j + 1)});
    }
  }
  const auto apex = static_cast<std::uint32_t>(vertices.size());
  vertices.emplace_back(0.0, 0.0, p.length);
  for (int j = 0; j < na; ++j) faces.push_back({at(nz, j), apex, at(nz, j + 1)});
  return TriMesh(std::move(vertices), std::move(faces));
}

}  // namespace steerfiber
