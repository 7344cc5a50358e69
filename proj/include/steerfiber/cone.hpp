#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "steerfiber/mesh.hpp"

namespace steerfiber {

// Unit direction in a cone of half-angle `half_angle` about +z, uniform in
// solid angle for (u1, u2) uniform in [0,1)^2: cos(polar) is uniform on
// [cos(half_angle), 1] and the azimuth uniform on [0, 2pi).
Vec3 cone_direction(double u1, double u2, double half_angle);

// Radical inverse of `index` in `base` (Halton sequence component).
double radical_inverse(std::uint64_t index, std::uint32_t base);

// First `count` cone directions from the (2,3) Halton sequence. Prefix
// stable: the first k directions do not depend on count.
std::vector<Vec3> halton_cone(std::size_t count, double half_angle);

// First `count` cone directions drawn from a mt19937_64 stream seeded with
// `seed`. Prefix stable in the same sense.
std::vector<Vec3> random_cone(std::size_t count, double half_angle, std::uint64_t seed);

// Face struck first by each ray that hits within max_range, in ray order
// (duplicates kept).
std::vector<std::uint32_t> cast_cone_hits(const Pose& apex, std::span<const Vec3> local_dirs, const TriMesh& mesh,
                                          double max_range);

// Casts one ray per local direction from the apex frame and returns the
// sorted, unique faces struck first within max_range.
std::vector<std::uint32_t> cast_cone_faces(const Pose& apex, std::span<const Vec3> local_dirs, const TriMesh& mesh,
                                           double max_range);

// SplitMix64 finalizer; used to derive independent per-config seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace steerfiber
