#pragma once

#include <cstdint>
#include <vector>

#include "steerfiber/mesh.hpp"

namespace steerfiber {

// Bounding-volume hierarchy over the non-degenerate faces of a mesh.
// Median split on the longest centroid axis; boxes are padded slightly so
// that traversal is conservative with respect to the triangle tests.
class Bvh {
 public:
  static constexpr std::uint32_t kLeafSize = 4;
  static constexpr double kBoxPadding = 1e-7;

  struct Node {
    Aabb box;
    std::uint32_t first = 0;  // first child index, or first slot in face_order
    std::uint32_t count = 0;  // 0 for interior nodes
  };

  Bvh() = default;
  explicit Bvh(const TriMesh& mesh);

  bool empty() const { return nodes_.empty(); }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<std::uint32_t>& face_order() const { return order_; }

  // Calls fn(face) for every face whose padded box overlaps `query`.
  template <class Fn>
  void for_each_overlap(const Aabb& query, Fn&& fn) const {
    if (nodes_.empty()) return;
    std::uint32_t stack[64];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
      const Node& node = nodes_[stack[--top]];
      if (!node.box.overlaps(query)) continue;
      if (node.count > 0) {
        for (std::uint32_t i = 0; i < node.count; ++i) {
          if (face_boxes_[order_[node.first + i]].overlaps(query)) fn(order_[node.first + i]);
        }
      } else {
        stack[top++] = node.first;
        stack[top++] = node.first + 1;
      }
    }
  }

  // Like for_each_overlap but stops as soon as fn returns true; returns
  // whether it did.
  template <class Pred>
  bool any_overlap(const Aabb& query, Pred&& pred) const {
    if (nodes_.empty()) return false;
    std::uint32_t stack[64];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
      const Node& node = nodes_[stack[--top]];
      if (!node.box.overlaps(query)) continue;
      if (node.count > 0) {
        for (std::uint32_t i = 0; i < node.count; ++i) {
          const std::uint32_t f = order_[node.first + i];
          if (face_boxes_[f].overlaps(query) && pred(f)) return true;
        }
      } else {
        stack[top++] = node.first;
        stack[top++] = node.first + 1;
      }
    }
    return false;
  }

 private:
  std::uint32_t build(std::uint32_t begin, std::uint32_t end, const std::vector<Vec3>& centroids);

  std::vector<Node> nodes_;
  std::vector<std::uint32_t> order_;
  std::vector<Aabb> face_boxes_;
};

}  // namespace steerfiber
