#include "steerfiber/raycast.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "steerfiber/bvh.hpp"
#include "steerfiber/errors.hpp"

namespace steerfiber {

Ray Ray::toward(const Vec3& origin, const Vec3& direction) {
  const double n = direction.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("ray direction must be a nonzero finite vector");
  return {origin, direction / n};
}

std::optional<TriangleHit> intersect_triangle(const Ray& ray, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 e1 = b - a;
  const Vec3 e2 = c - a;
  const Vec3 p = ray.direction.cross(e2);
  const double det = e1.dot(p);
  // Parallel (or coplanar) ray: scale-aware threshold.
  if (std::abs(det) <= 1e-14 * e1.norm() * e2.norm()) return std::nullopt;
  const double inv = 1.0 / det;
  const Vec3 s = ray.origin - a;
  const double u = s.dot(p) * inv;
  if (u < 0.0 || u > 1.0) return std::nullopt;
  const Vec3 q = s.cross(e1);
  const double v = ray.direction.dot(q) * inv;
  if (v < 0.0 || u + v > 1.0) return std::nullopt;
  const double t = e2.dot(q) * inv;
  if (!(t > kRayEpsilon)) return std::nullopt;
  return TriangleHit{t, u, v};
}

std::optional<Hit> intersect(const Ray& ray, const TriMesh& mesh, std::uint32_t face) {
  if (mesh.is_degenerate(face)) return std::nullopt;
  auto h = intersect_triangle(ray, mesh.corner(face, 0), mesh.corner(face, 1), mesh.corner(face, 2));
  if (!h) return std::nullopt;
  return Hit{face, h->t, h->u, h->v};
}

namespace {

// Collects hits inside the tie window of the running minimum and resolves
// the final choice as: lowest face index among hits with t <= t_min + tol.
class NearestCollector {
 public:
  double bound() const { return best_t_ + kTieTolerance; }

  void offer(const Hit& h) {
    if (h.t > bound()) return;
    if (h.t < best_t_) {
      best_t_ = h.t;
      prune();
    }
    if (size_ < buf_.size()) {
      buf_[size_++] = h;
    } else {
      overflow_.push_back(h);
    }
  }

  std::optional<Hit> result() const {
    std::optional<Hit> out;
    auto consider = [&](const Hit& h) {
      if (h.t <= best_t_ + kTieTolerance && (!out || h.face < out->face)) out = h;
    };
    for (std::size_t i = 0; i < size_; ++i) consider(buf_[i]);
    for (const Hit& h : overflow_) consider(h);
    return out;
  }

 private:
  void prune() {
    std::size_t w = 0;
    for (std::size_t i = 0; i < size_; ++i) {
      if (buf_[i].t <= bound()) buf_[w++] = buf_[i];
    }
    size_ = w;
    std::erase_if(overflow_, [&](const Hit& h) { return h.t > bound(); });
  }

  double best_t_ = std::numeric_limits<double>::infinity();
  std::array<Hit, 16> buf_{};
  std::size_t size_ = 0;
  std::vector<Hit> overflow_;
};

// Slab test; returns the entry parameter or +inf on a miss. Zero direction
// components are handled explicitly so no NaN can arise.
double box_entry(const Aabb& box, const Vec3& origin, const Vec3& inv_dir, const Vec3& dir, double t_max) {
  double t0 = 0.0;
  double t1 = t_max;
  for (int a = 0; a < 3; ++a) {
    if (dir[a] == 0.0) {
      if (origin[a] < box.lo[a] || origin[a] > box.hi[a]) return std::numeric_limits<double>::infinity();
      continue;
    }
    double tn = (box.lo[a] - origin[a]) * inv_dir[a];
    double tf = (box.hi[a] - origin[a]) * inv_dir[a];
    if (tn > tf) std::swap(tn, tf);
    t0 = std::max(t0, tn);
    t1 = std::min(t1, tf);
    if (t0 > t1) return std::numeric_limits<double>::infinity();
  }
  return t0;
}

}  // namespace

std::optional<Hit> first_hit_exhaustive(const Ray& ray, const TriMesh& mesh) {
  NearestCollector nearest;
  for (std::uint32_t f = 0; f < mesh.face_count(); ++f) {
    if (auto h = intersect(ray, mesh, f)) nearest.offer(*h);
  }
  return nearest.result();
}

std::optional<Hit> first_hit(const Ray& ray, const TriMesh& mesh) {
  const Bvh& bvh = mesh.bvh();
  if (bvh.empty()) return std::nullopt;
  const auto& nodes = bvh.nodes();
  const auto& order = bvh.face_order();
  const Vec3 inv = ray.direction.cwiseInverse();
  constexpr double kInf = std::numeric_limits<double>::infinity();

  NearestCollector nearest;
  struct Entry {
    std::uint32_t node;
    double t;
  };
  Entry stack[128];
  int top = 0;
  const double root_t = box_entry(nodes[0].box, ray.origin, inv, ray.direction, kInf);
  if (root_t == kInf) return std::nullopt;
  stack[top++] = {0, root_t};
  while (top > 0) {
    const Entry e = stack[--top];
    if (e.t > nearest.bound()) continue;
    const Bvh::Node& node = nodes[e.node];
    if (node.count > 0) {
      for (std::uint32_t i = 0; i < node.count; ++i) {
        const std::uint32_t f = order[node.first + i];
        auto h = intersect_triangle(ray, mesh.corner(f, 0), mesh.corner(f, 1), mesh.corner(f, 2));
        if (h) nearest.offer(Hit{f, h->t, h->u, h->v});
      }
      continue;
    }
    const double bound = nearest.bound();
    const double tl = box_entry(nodes[node.first].box, ray.origin, inv, ray.direction, bound);
    const double tr = box_entry(nodes[node.first + 1].box, ray.origin, inv, ray.direction, bound);
    // Push the farther child first so the nearer one is processed next.
    if (tl <= tr) {
      if (tr != kInf) stack[top++] = {node.first + 1, tr};
      if (tl != kInf) stack[top++] = {node.first, tl};
    } else {
      if (tl != kInf) stack[top++] = {node.first, tl};
      if (tr != kInf) stack[top++] = {node.first + 1, tr};
    }
  }
  return nearest.result();
}

std::vector<std::optional<Hit>> cast_rays_serial(std::span<const Ray> rays, const TriMesh& mesh) {
  std::vector<std::optional<Hit>> out(rays.size());
  for (std::size_t i = 0; i < rays.size(); ++i) out[i] = first_hit(rays[i], mesh);
  return out;
}

std::vector<std::optional<Hit>> cast_rays_parallel(std::span<const Ray> rays, const TriMesh& mesh) {
  std::vector<std::optional<Hit>> out(rays.size());
  const auto n = static_cast<std::int64_t>(rays.size());
#pragma omp parallel for schedule(dynamic, 256)
  for (std::int64_t i = 0; i < n; ++i) out[i] = first_hit(rays[i], mesh);
  return out;
}

}  // namespace steerfiber
