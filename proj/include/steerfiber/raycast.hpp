#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "steerfiber/mesh.hpp"

namespace steerfiber {

// Hits at t <= kRayEpsilon (mm) are ignored.
inline constexpr double kRayEpsilon = 1e-9;
// Hits within this distance of the nearest are ties; the lowest face wins.
inline constexpr double kTieTolerance = 1e-9;

struct Ray {
  Vec3 origin = Vec3::Zero();
  Vec3 direction = Vec3::UnitZ();  // unit length

  // Normalizes `direction`; throws DomainError for a zero vector.
  static Ray toward(const Vec3& origin, const Vec3& direction);
};

struct Hit {
  std::uint32_t face = 0;
  double t = 0.0;  // mm along the ray
  double u = 0.0;  // barycentric weight of corner 1
  double v = 0.0;  // barycentric weight of corner 2
};

struct TriangleHit {
  double t, u, v;
};

// Moller-Trumbore without backface culling.
std::optional<TriangleHit> intersect_triangle(const Ray& ray, const Vec3& a, const Vec3& b, const Vec3& c);

// Returns nullopt for degenerate faces.
std::optional<Hit> intersect(const Ray& ray, const TriMesh& mesh, std::uint32_t face);

// Nearest hit through the mesh BVH. Face choice equals first_hit_exhaustive.
std::optional<Hit> first_hit(const Ray& ray, const TriMesh& mesh);

// Reference implementation: linear scan over every face.
std::optional<Hit> first_hit_exhaustive(const Ray& ray, const TriMesh& mesh);

// Batch kernels. The serial version is the reference for the OpenMP one.
std::vector<std::optional<Hit>> cast_rays_serial(std::span<const Ray> rays, const TriMesh& mesh);
std::vector<std::optional<Hit>> cast_rays_parallel(std::span<const Ray> rays, const TriMesh& mesh);

}  // namespace steerfiber
