#include "steerfiber/mesh.hpp"

#include <string>

#include "steerfiber/bvh.hpp"
#include "steerfiber/errors.hpp"

namespace steerfiber {

TriMesh::TriMesh() : bvh_(std::make_shared<const Bvh>()) {}

TriMesh::TriMesh(std::vector<Vec3> vertices, std::vector<Face> faces)
    : vertices_(std::move(vertices)), faces_(std::move(faces)) {
  areas_.resize(faces_.size());
  normals_.resize(faces_.size());
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    for (int k = 0; k < 3; ++k) {
      if (faces_[f][k] >= vertices_.size()) {
        throw Error("face " + std::to_string(f) + " references vertex " + std::to_string(faces_[f][k]) +
                    " but mesh has " + std::to_string(vertices_.size()) + " vertices");
      }
    }
    const Vec3 n = (corner(f, 1) - corner(f, 0)).cross(corner(f, 2) - corner(f, 0));
    const double len = n.norm();
    areas_[f] = 0.5 * len;
    normals_[f] = len > 0.0 ? Vec3(n / len) : Vec3::Zero();
  }
  for (const Vec3& v : vertices_) bounds_.expand(v);
  bvh_ = std::make_shared<const Bvh>(*this);
}

Vec3 TriMesh::face_centroid(std::size_t face) const {
  return (corner(face, 0) + corner(face, 1) + corner(face, 2)) / 3.0;
}

std::size_t TriMesh::degenerate_count() const {
  std::size_t n = 0;
  for (std::size_t f = 0; f < faces_.size(); ++f) n += is_degenerate(f) ? 1 : 0;
  return n;
}

double TriMesh::total_area() const {
  double sum = 0.0;
  for (double a : areas_) sum += a;
  return sum;
}

}  // namespace steerfiber
