#include "steerfiber/collision.hpp"

#include <algorithm>
#include <cmath>

#include "steerfiber/bvh.hpp"
#include "steerfiber/errors.hpp"

namespace steerfiber {

Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  // Voronoi-region walk over vertices, edges and the face interior.
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return a;

  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return b;

  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + (d1 / (d1 - d3)) * ab;

  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return c;

  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + (d2 / (d2 - d6)) * ac;

  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    return b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b);
  }
  const double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

double segment_segment_distance(const Vec3& p0, const Vec3& p1, const Vec3& q0, const Vec3& q1) {
  const Vec3 d1 = p1 - p0, d2 = q1 - q0, r = p0 - q0;
  const double a = d1.squaredNorm(), e = d2.squaredNorm(), f = d2.dot(r);
  constexpr double kTiny = 1e-300;
  double s = 0.0, t = 0.0;
  if (a <= kTiny && e <= kTiny) return r.norm();
  if (a <= kTiny) {
    t = std::clamp(f / e, 0.0, 1.0);
  } else {
    const double c = d1.dot(r);
    if (e <= kTiny) {
      s = std::clamp(-c / a, 0.0, 1.0);
    } else {
      const double b = d1.dot(d2);
      const double denom = a * e - b * b;
      s = denom > 0.0 ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
      t = (b * s + f) / e;
      if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-c / a, 0.0, 1.0);
      } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((b - c) / a, 0.0, 1.0);
      }
    }
  }
  return ((p0 + d1 * s) - (q0 + d2 * t)).norm();
}

namespace {

bool segment_crosses_triangle(const Vec3& p0, const Vec3& p1, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 dir = p1 - p0;
  const Vec3 e1 = b - a, e2 = c - a;
  const Vec3 h = dir.cross(e2);
  const double det = e1.dot(h);
  if (std::abs(det) <= 1e-14 * e1.norm() * e2.norm() * dir.norm()) return false;
  const double inv = 1.0 / det;
  const Vec3 s = p0 - a;
  const double u = s.dot(h) * inv;
  if (u < 0.0 || u > 1.0) return false;
  const Vec3 q = s.cross(e1);
  const double v = dir.dot(q) * inv;
  if (v < 0.0 || u + v > 1.0) return false;
  const double t = e2.dot(q) * inv;
  return t >= 0.0 && t <= 1.0;
}

}  // namespace

double segment_triangle_distance(const Vec3& p0, const Vec3& p1, const Vec3& a, const Vec3& b, const Vec3& c) {
  if (segment_crosses_triangle(p0, p1, a, b, c)) return 0.0;
  double d = std::min((p0 - closest_point_on_triangle(p0, a, b, c)).norm(),
                      (p1 - closest_point_on_triangle(p1, a, b, c)).norm());
  d = std::min(d, segment_segment_distance(p0, p1, a, b));
  d = std::min(d, segment_segment_distance(p0, p1, b, c));
  d = std::min(d, segment_segment_distance(p0, p1, c, a));
  return d;
}

bool collision_free(std::span<const Backbone> backbones, const TriMesh& mesh, double clearance) {
  if (!(clearance >= 0.0)) throw DomainError("clearance must be >= 0");
  const Bvh& bvh = mesh.bvh();
  for (const Backbone& bb : backbones) {
    const double r = bb.radius + clearance;
    const std::size_t n = bb.points.size();
    const std::size_t segments = n > 1 ? n - 1 : n;
    for (std::size_t i = 0; i < segments; ++i) {
      const Vec3& p0 = bb.points[i];
      const Vec3& p1 = bb.points[n > 1 ? i + 1 : i];
      Aabb box;
      box.expand(p0);
      box.expand(p1);
      const bool hit = bvh.any_overlap(box.inflated(r), [&](std::uint32_t f) {
        return segment_triangle_distance(p0, p1, mesh.corner(f, 0), mesh.corner(f, 1), mesh.corner(f, 2)) <= r;
      });
      if (hit) return false;
    }
  }
  return true;
}

}  // namespace steerfiber
