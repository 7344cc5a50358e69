#pragma once

#include <span>
#include <vector>

#include "steerfiber/mesh.hpp"

namespace steerfiber {

// Polyline swept by a sphere of `radius` (a chain of capsules).
struct Backbone {
  std::vector<Vec3> points;
  double radius = 0.0;
};

Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

double segment_segment_distance(const Vec3& p0, const Vec3& p1, const Vec3& q0, const Vec3& q1);

// Exact Euclidean distance between segment [p0, p1] and triangle abc.
double segment_triangle_distance(const Vec3& p0, const Vec3& p1, const Vec3& a, const Vec3& b, const Vec3& c);

// True iff every capsule (radius + clearance) is disjoint from every
// non-degenerate mesh face.
bool collision_free(std::span<const Backbone> backbones, const TriMesh& mesh, double clearance);

}  // namespace steerfiber
