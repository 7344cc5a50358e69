#include "steerfiber/cone.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "steerfiber/raycast.hpp"

namespace steerfiber {

Vec3 cone_direction(double u1, double u2, double half_angle) {
  const double cos_max = std::cos(half_angle);
  const double c = 1.0 - u1 * (1.0 - cos_max);
  const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
  const double phi = 2.0 * std::numbers::pi * u2;
  return {s * std::cos(phi), s * std::sin(phi), c};
}

double radical_inverse(std::uint64_t index, std::uint32_t base) {
  double result = 0.0;
  double f = 1.0 / base;
  while (index > 0) {
    result += f * static_cast<double>(index % base);
    index /= base;
    f /= base;
  }
  return result;
}

std::vector<Vec3> halton_cone(std::size_t count, double half_angle) {
  std::vector<Vec3> dirs(count);
  for (std::size_t i = 0; i < count; ++i) {
    dirs[i] = cone_direction(radical_inverse(i + 1, 2), radical_inverse(i + 1, 3), half_angle);
  }
  return dirs;
}

std::vector<Vec3> random_cone(std::size_t count, double half_angle, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  // 53-bit mantissa conversion keeps the stream identical across libraries.
  auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  std::vector<Vec3> dirs(count);
  for (auto& d : dirs) {
    const double u1 = uniform();
    const double u2 = uniform();
    d = cone_direction(u1, u2, half_angle);
  }
  return dirs;
}

std::vector<std::uint32_t> cast_cone_hits(const Pose& apex, std::span<const Vec3> local_dirs, const TriMesh& mesh,
                                          double max_range) {
  std::vector<std::uint32_t> faces;
  faces.reserve(local_dirs.size());
  for (const Vec3& d : local_dirs) {
    const Ray ray{apex.translation(), (apex.rotation() * d).normalized()};
    if (auto h = first_hit(ray, mesh); h && h->t <= max_range) faces.push_back(h->face);
  }
  return faces;
}

std::vector<std::uint32_t> cast_cone_faces(const Pose& apex, std::span<const Vec3> local_dirs, const TriMesh& mesh,
                                           double max_range) {
  std::vector<std::uint32_t> faces = cast_cone_hits(apex, local_dirs, mesh, max_range);
  std::sort(faces.begin(), faces.end());
  faces.erase(std::unique(faces.begin(), faces.end()), faces.end());
  return faces;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace steerfiber
