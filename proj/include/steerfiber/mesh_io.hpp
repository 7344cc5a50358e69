#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "steerfiber/mesh.hpp"

namespace steerfiber {

// Vertices closer than this (mm) are merged on load.
inline constexpr double kWeldTolerance = 1e-6;

// Parses binary or ASCII STL. `scale` multiplies every coordinate (for files
// not authored in millimetres). Throws ParseError with a byte offset on
// malformed input and Error on a mesh with no facets.
TriMesh parse_stl(std::string_view bytes, double scale = 1.0);
TriMesh load_mesh(const std::filesystem::path& path, double scale = 1.0);

// Builds a mesh from a triangle soup, welding vertices within `tolerance`.
TriMesh weld_triangles(const std::vector<std::array<Vec3, 3>>& triangles, double tolerance = kWeldTolerance);

std::string encode_stl_binary(const TriMesh& mesh, std::string_view header = "steerfiber");
void save_stl(const TriMesh& mesh, const std::filesystem::path& path);

// Face labels: nonzero = reachable. Colors are fixed per label.
struct Rgb {
  std::uint8_t r, g, b;
  bool operator==(const Rgb&) const = default;
};
inline constexpr Rgb kReachableColor{214, 39, 40};
inline constexpr Rgb kUnreachableColor{190, 190, 190};

std::string encode_colored_ply(const TriMesh& mesh, const std::vector<std::uint8_t>& face_labels);
void save_colored_mesh(const TriMesh& mesh, const std::vector<std::uint8_t>& face_labels,
                       const std::filesystem::path& path);

struct LabeledMesh {
  TriMesh mesh;
  std::vector<std::uint8_t> face_labels;
};

// Reads back the ASCII PLY written by save_colored_mesh.
LabeledMesh parse_colored_ply(std::string_view text);
LabeledMesh load_colored_mesh(const std::filesystem::path& path);

}  // namespace steerfiber
