#include "steerfiber/bvh.hpp"

#include <algorithm>
#include <numeric>

namespace steerfiber {

Bvh::Bvh(const TriMesh& mesh) {
  face_boxes_.resize(mesh.face_count());
  std::vector<Vec3> centroids(mesh.face_count());
  for (std::size_t f = 0; f < mesh.face_count(); ++f) {
    Aabb box;
    for (int k = 0; k < 3; ++k) box.expand(mesh.corner(f, k));
    face_boxes_[f] = box.inflated(kBoxPadding);
    centroids[f] = mesh.face_centroid(f);
    if (!mesh.is_degenerate(f)) order_.push_back(static_cast<std::uint32_t>(f));
  }
  if (order_.empty()) return;
  nodes_.reserve(2 * order_.size() / kLeafSize + 2);
  nodes_.emplace_back();
  build(0, static_cast<std::uint32_t>(order_.size()), centroids);
}

std::uint32_t Bvh::build(std::uint32_t begin, std::uint32_t end, const std::vector<Vec3>& centroids) {
  // Root is pre-allocated; children are allocated in pairs by the parent.
  std::uint32_t index = 0;
  struct Task {
    std::uint32_t node, begin, end;
  };
  std::vector<Task> tasks{{index, begin, end}};
  while (!tasks.empty()) {
    Task t = tasks.back();
    tasks.pop_back();
    Aabb box, cbox;
    for (std::uint32_t i = t.begin; i < t.end; ++i) {
      box.expand(face_boxes_[order_[i]]);
      cbox.expand(centroids[order_[i]]);
    }
    nodes_[t.node].box = box;
    const std::uint32_t count = t.end - t.begin;
    int axis = 0;
    cbox.extent().maxCoeff(&axis);
    if (count <= kLeafSize || cbox.extent()[axis] <= 0.0) {
      nodes_[t.node].first = t.begin;
      nodes_[t.node].count = count;
      continue;
    }
    const std::uint32_t mid = t.begin + count / 2;
    std::nth_element(order_.begin() + t.begin, order_.begin() + mid, order_.begin() + t.end,
                     [&](std::uint32_t a, std::uint32_t b) {
                       const double ca = centroids[a][axis], cb = centroids[b][axis];
                       return ca < cb || (ca == cb && a < b);
                     });
    const auto left = static_cast<std::uint32_t>(nodes_.size());
    nodes_.emplace_back();
    nodes_.emplace_back();
    nodes_[t.node].first = left;
    nodes_[t.node].count = 0;
    tasks.push_back({left, t.begin, mid});
    tasks.push_back({left + 1, mid, t.end});
  }
  return index;
}

}  // namespace steerfiber
