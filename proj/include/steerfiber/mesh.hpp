#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <memory>
#include <vector>

#include "steerfiber/lie.hpp"

namespace steerfiber {

using Face = std::array<std::uint32_t, 3>;

// Faces below this area are excluded from all geometric queries.
inline constexpr double kDegenerateArea = 1e-12;

struct Aabb {
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 hi = Vec3::Constant(-std::numeric_limits<double>::infinity());

  void expand(const Vec3& p) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  void expand(const Aabb& b) {
    lo = lo.cwiseMin(b.lo);
    hi = hi.cwiseMax(b.hi);
  }
  Aabb inflated(double r) const { return {lo.array() - r, hi.array() + r}; }
  bool empty() const { return (lo.array() > hi.array()).any(); }
  bool overlaps(const Aabb& b) const {
    return (lo.array() <= b.hi.array()).all() && (b.lo.array() <= hi.array()).all();
  }
  Vec3 extent() const { return hi - lo; }
  Vec3 center() const { return 0.5 * (lo + hi); }
};

class Bvh;

// Indexed triangle mesh in millimetres. Immutable once built; derived face
// data and the acceleration structure are computed in the constructor, so
// a const TriMesh can be shared across threads.
class TriMesh {
 public:
  TriMesh();
  // Throws Error if any face index is out of range.
  TriMesh(std::vector<Vec3> vertices, std::vector<Face> faces);

  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<Face>& faces() const { return faces_; }
  std::size_t face_count() const { return faces_.size(); }
  bool empty() const { return faces_.empty(); }

  const Vec3& corner(std::size_t face, int k) const { return vertices_[faces_[face][k]]; }
  double face_area(std::size_t face) const { return areas_[face]; }
  const std::vector<double>& face_areas() const { return areas_; }
  const Vec3& face_normal(std::size_t face) const { return normals_[face]; }
  Vec3 face_centroid(std::size_t face) const;
  bool is_degenerate(std::size_t face) const { return areas_[face] < kDegenerateArea; }
  std::size_t degenerate_count() const;

  double total_area() const;
  const Aabb& bounds() const { return bounds_; }
  const Bvh& bvh() const { return *bvh_; }

 private:
  std::vector<Vec3> vertices_;
  std::vector<Face> faces_;
  std::vector<double> areas_;
  std::vector<Vec3> normals_;
  Aabb bounds_;
  std::shared_ptr<const Bvh> bvh_;
};

}  // namespace steerfiber
