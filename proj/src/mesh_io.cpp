#include "steerfiber/mesh_io.hpp"

#include <charconv>
#include <cmath>
#include <cstring>
#include <unordered_map>

#include "steerfiber/errors.hpp"
#include "steerfiber/fileio.hpp"

namespace steerfiber {

namespace {

struct CellKey {
  std::int64_t x, y, z;
  bool operator==(const CellKey&) const = default;
};

struct CellHash {
  std::size_t operator()(const CellKey& k) const noexcept {
    std::uint64_t h = 0x9E3779B97F4A7C15ull;
    for (std::int64_t c : {k.x, k.y, k.z}) {
      h ^= static_cast<std::uint64_t>(c) + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

class VertexWelder {
 public:
  explicit VertexWelder(double tol) : tol_(tol) {}

  std::uint32_t add(const Vec3& p) {
    const CellKey c = cell(p);
    std::uint32_t best = kNone;
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        for (std::int64_t dz = -1; dz <= 1; ++dz) {
          auto it = grid_.find({c.x + dx, c.y + dy, c.z + dz});
          if (it == grid_.end()) continue;
          for (std::uint32_t idx : it->second) {
            if ((vertices_[idx] - p).norm() <= tol_ && idx < best) best = idx;
          }
        }
      }
    }
    if (best != kNone) return best;
    const auto idx = static_cast<std::uint32_t>(vertices_.size());
    vertices_.push_back(p);
    grid_[c].push_back(idx);
    return idx;
  }

  std::vector<Vec3> take() { return std::move(vertices_); }

 private:
  static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

  CellKey cell(const Vec3& p) const {
    return {static_cast<std::int64_t>(std::floor(p.x() / tol_)), static_cast<std::int64_t>(std::floor(p.y() / tol_)),
            static_cast<std::int64_t>(std::floor(p.z() / tol_))};
  }

  double tol_;
  std::vector<Vec3> vertices_;
  std::unordered_map<CellKey, std::vector<std::uint32_t>, CellHash> grid_;
};

// Whitespace tokenizer that remembers where each token starts.
class Tokenizer {
 public:
  explicit Tokenizer(std::string_view text) : text_(text) {}

  bool done() {
    skip();
    return pos_ >= text_.size();
  }
  std::size_t offset() {
    skip();
    return pos_;
  }

  std::string_view next(const char* expecting) {
    skip();
    if (pos_ >= text_.size()) throw ParseError(std::string("unexpected end of file, expected ") + expecting, pos_);
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return text_.substr(start, pos_ - start);
  }

  void expect(std::string_view word) {
    const std::size_t at = offset();
    std::string_view tok = next(std::string(word).c_str());
    if (tok != word) throw ParseError("expected '" + std::string(word) + "', found '" + std::string(tok) + "'", at);
  }

  double number() {
    const std::size_t at = offset();
    std::string_view tok = next("a number");
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(value)) {
      throw ParseError("invalid number '" + std::string(tok) + "'", at);
    }
    return value;
  }

  void skip_line() {
    while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
  }

 private:
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::vector<std::array<Vec3, 3>> parse_ascii_stl(std::string_view text, double scale) {
  Tokenizer tok(text);
  tok.expect("solid");
  tok.skip_line();
  std::vector<std::array<Vec3, 3>> tris;
  while (true) {
    const std::size_t at = tok.offset();
    std::string_view word = tok.next("'facet' or 'endsolid'");
    if (word == "endsolid") break;
    if (word != "facet") throw ParseError("expected 'facet' or 'endsolid', found '" + std::string(word) + "'", at);
    tok.expect("normal");
    for (int k = 0; k < 3; ++k) tok.number();
    tok.expect("outer");
    tok.expect("loop");
    std::array<Vec3, 3> tri;
    for (auto& v : tri) {
      tok.expect("vertex");
      const double x = tok.number(), y = tok.number(), z = tok.number();
      v = Vec3(x, y, z) * scale;
    }
    tok.expect("endloop");
    tok.expect("endfacet");
    tris.push_back(tri);
  }
  return tris;
}

template <class T>
T read_le(std::string_view bytes, std::size_t at) {
  T value;
  std::memcpy(&value, bytes.data() + at, sizeof(T));
  return value;
}

std::vector<std::array<Vec3, 3>> parse_binary_stl(std::string_view bytes, double scale) {
  if (bytes.size() < 84) throw ParseError("binary STL shorter than its 84-byte header", bytes.size());
  const auto count = read_le<std::uint32_t>(bytes, 80);
  const std::size_t expected = 84 + std::size_t{50} * count;
  if (bytes.size() < expected) {
    throw ParseError("binary STL declares " + std::to_string(count) + " facets but is truncated", bytes.size());
  }
  if (bytes.size() > expected) throw ParseError("trailing bytes after last facet", expected);
  std::vector<std::array<Vec3, 3>> tris(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::size_t base = 84 + std::size_t{50} * i + 12;
    for (int k = 0; k < 3; ++k) {
      Vec3 v;
      for (int c = 0; c < 3; ++c) {
        const float f = read_le<float>(bytes, base + 12 * k + 4 * c);
        if (!std::isfinite(f)) throw ParseError("non-finite coordinate", base + 12 * k + 4 * c);
        v[c] = static_cast<double>(f) * scale;
      }
      tris[i][k] = v;
    }
  }
  return tris;
}

bool looks_ascii(std::string_view bytes) {
  std::size_t i = 0;
  while (i < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[i]))) ++i;
  if (bytes.substr(i, 5) != "solid") return false;
  // Some binary exporters also start the header with "solid".
  if (bytes.size() >= 84) {
    const auto count = read_le<std::uint32_t>(bytes, 80);
    if (84 + std::size_t{50} * count == bytes.size()) return false;
  }
  return true;
}

void append_le_float(std::string& out, float f) {
  char buf[4];
  std::memcpy(buf, &f, 4);
  out.append(buf, 4);
}

}  // namespace

TriMesh weld_triangles(const std::vector<std::array<Vec3, 3>>& triangles, double tolerance) {
  VertexWelder welder(tolerance);
  std::vector<Face> faces;
  faces.reserve(triangles.size());
  for (const auto& tri : triangles) faces.push_back({welder.add(tri[0]), welder.add(tri[1]), welder.add(tri[2])});
  return TriMesh(welder.take(), std::move(faces));
}

TriMesh parse_stl(std::string_view bytes, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw ConfigError("mesh scale must be positive and finite");
  auto tris = looks_ascii(bytes) ? parse_ascii_stl(bytes, scale) : parse_binary_stl(bytes, scale);
  if (tris.empty()) throw Error("STL contains no facets");
  return weld_triangles(tris);
}

TriMesh load_mesh(const std::filesystem::path& path, double scale) {
  return parse_stl(read_file(path), scale);
}

std::string encode_stl_binary(const TriMesh& mesh, std::string_view header) {
  std::string out(80, '\0');
  // Must not begin with "solid" or readers may take it for ASCII.
  std::memcpy(out.data(), header.data(), std::min<std::size_t>(header.size(), 80));
  const auto count = static_cast<std::uint32_t>(mesh.face_count());
  char cbuf[4];
  std::memcpy(cbuf, &count, 4);
  out.append(cbuf, 4);
  for (std::size_t f = 0; f < mesh.face_count(); ++f) {
    const Vec3& n = mesh.face_normal(f);
    for (int c = 0; c < 3; ++c) append_le_float(out, static_cast<float>(n[c]));
    for (int k = 0; k < 3; ++k) {
      for (int c = 0; c < 3; ++c) append_le_float(out, static_cast<float>(mesh.corner(f, k)[c]));
    }
    out.append(2, '\0');
  }
  return out;
}

void save_stl(const TriMesh& mesh, const std::filesystem::path& path) {
  write_file_atomic(path, encode_stl_binary(mesh));
}

std::string encode_colored_ply(const TriMesh& mesh, const std::vector<std::uint8_t>& face_labels) {
  if (face_labels.size() != mesh.face_count()) {
    throw Error("label count " + std::to_string(face_labels.size()) + " does not match face count " +
                std::to_string(mesh.face_count()));
  }
  std::string out;
  out += "ply\nformat ascii 1.0\ncomment steerfiber reachability map\n";
  out += "element vertex " + std::to_string(mesh.vertices().size()) + "\n";
  out += "property double x\nproperty double y\nproperty double z\n";
  out += "element face " + std::to_string(mesh.face_count()) + "\n";
  out += "property list uchar int vertex_indices\n";
  out += "property uchar red\nproperty uchar green\nproperty uchar blue\nend_header\n";
  char buf[128];
  for (const Vec3& v : mesh.vertices()) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", v.x(), v.y(), v.z());
    out += buf;
  }
  for (std::size_t f = 0; f < mesh.face_count(); ++f) {
    const Rgb c = face_labels[f] ? kReachableColor : kUnreachableColor;
    const Face& face = mesh.faces()[f];
    std::snprintf(buf, sizeof buf, "3 %u %u %u %u %u %u\n", face[0], face[1], face[2], unsigned{c.r}, unsigned{c.g},
                  unsigned{c.b});
    out += buf;
  }
  return out;
}

void save_colored_mesh(const TriMesh& mesh, const std::vector<std::uint8_t>& face_labels,
                       const std::filesystem::path& path) {
  write_file_atomic(path, encode_colored_ply(mesh, face_labels));
}

LabeledMesh parse_colored_ply(std::string_view text) {
  Tokenizer tok(text);
  tok.expect("ply");
  tok.expect("format");
  tok.expect("ascii");
  tok.expect("1.0");
  std::size_t n_vertices = 0, n_faces = 0;
  while (true) {
    const std::size_t at = tok.offset();
    std::string_view word = tok.next("header line");
    if (word == "end_header") break;
    if (word == "comment" || word == "property") {
      tok.skip_line();
    } else if (word == "element") {
      std::string_view kind = tok.next("element name");
      const double count = tok.number();
      if (count < 0 || count != std::floor(count)) throw ParseError("invalid element count", at);
      if (kind == "vertex") {
        n_vertices = static_cast<std::size_t>(count);
      } else if (kind == "face") {
        n_faces = static_cast<std::size_t>(count);
      } else {
        throw ParseError("unsupported element '" + std::string(kind) + "'", at);
      }
    } else {
      throw ParseError("unexpected header token '" + std::string(word) + "'", at);
    }
  }
  std::vector<Vec3> vertices(n_vertices);
  for (auto& v : vertices) {
    const double x = tok.number(), y = tok.number(), z = tok.number();
    v = Vec3(x, y, z);
  }
  std::vector<Face> faces(n_faces);
  std::vector<std::uint8_t> labels(n_faces);
  for (std::size_t f = 0; f < n_faces; ++f) {
    const std::size_t at = tok.offset();
    if (tok.number() != 3.0) throw ParseError("only triangular faces are supported", at);
    for (auto& idx : faces[f]) {
      const std::size_t iat = tok.offset();
      const double d = tok.number();
      if (d < 0 || d >= static_cast<double>(n_vertices) || d != std::floor(d)) {
        throw ParseError("vertex index out of range", iat);
      }
      idx = static_cast<std::uint32_t>(d);
    }
    const std::size_t cat = tok.offset();
    Rgb c{static_cast<std::uint8_t>(tok.number()), static_cast<std::uint8_t>(tok.number()),
          static_cast<std::uint8_t>(tok.number())};
    if (c == kReachableColor) {
      labels[f] = 1;
    } else if (c == kUnreachableColor) {
      labels[f] = 0;
    } else {
      throw ParseError("face color is not a known label", cat);
    }
  }
  if (!tok.done()) throw ParseError("trailing data after last face", tok.offset());
  return {TriMesh(std::move(vertices), std::move(faces)), std::move(labels)};
}

LabeledMesh load_colored_mesh(const std::filesystem::path& path) { return parse_colored_ply(read_file(path)); }

}  // namespace steerfiber
