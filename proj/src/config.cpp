#include "steerfiber/config.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include "steerfiber/errors.hpp"
#include "steerfiber/fileio.hpp"

namespace steerfiber {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(std::string_view key, std::string_view v) {
  if (v == "inf" || v == "infinity") return std::numeric_limits<double>::infinity();
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || std::isnan(out)) {
    throw ConfigError("config key '" + std::string(key) + "': expected a number, got '" + std::string(v) + "'");
  }
  return out;
}

std::uint64_t parse_uint(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError("config key '" + std::string(key) + "': expected a non-negative integer, got '" +
                      std::string(v) + "'");
  }
  return out;
}

struct KeySpec {
  const char* unit;
  std::function<void(RunConfig&, std::string_view key, std::string_view value)> apply;
};

template <class Get>
KeySpec real(const char* unit, Get get) {
  return {unit, [get](RunConfig& c, std::string_view k, std::string_view v) { get(c) = parse_double(k, v); }};
}

template <class Get>
KeySpec degrees(Get get) {
  return {"deg", [get](RunConfig& c, std::string_view k, std::string_view v) {
            get(c) = deg_to_rad(parse_double(k, v));
          }};
}

template <class Get>
KeySpec count(const char* unit, Get get) {
  return {unit, [get](RunConfig& c, std::string_view k, std::string_view v) {
            get(c) = static_cast<std::remove_reference_t<decltype(get(c))>>(parse_uint(k, v));
          }};
}

const std::map<std::string, KeySpec, std::less<>>& key_table() {
  static const std::map<std::string, KeySpec, std::less<>> table = {
      {"sheath.h", real("mm", [](RunConfig& c) -> double& { return c.sheath.notch_height; })},
      {"sheath.w", real("mm", [](RunConfig& c) -> double& { return c.sheath.cut_depth; })},
      {"sheath.u", real("mm", [](RunConfig& c) -> double& { return c.sheath.notch_spacing; })},
      {"sheath.n", count("notches", [](RunConfig& c) -> int& { return c.sheath.notch_count; })},
      {"sheath.r_i", real("mm", [](RunConfig& c) -> double& { return c.sheath.inner_radius; })},
      {"sheath.r_o", real("mm", [](RunConfig& c) -> double& { return c.sheath.outer_radius; })},
      {"sheath.distal_offset", real("mm", [](RunConfig& c) -> double& { return c.sheath.distal_offset; })},
      {"sheath.precurve_deg", degrees([](RunConfig& c) -> double& { return c.sheath.precurve; })},
      {"sheath.z_travel", real("mm", [](RunConfig& c) -> double& { return c.sheath.z_travel; })},
      {"scope.shaft_diameter", real("mm", [](RunConfig& c) -> double& { return c.scope.shaft_diameter; })},
      {"scope.channel_offset_x", real("mm", [](RunConfig& c) -> double& { return c.scope.channel_offset.x(); })},
      {"scope.channel_offset_y", real("mm", [](RunConfig& c) -> double& { return c.scope.channel_offset.y(); })},
      {"scope.bend_section_length", real("mm", [](RunConfig& c) -> double& { return c.scope.bend_section_length; })},
      {"scope.bend_min_deg", degrees([](RunConfig& c) -> double& { return c.scope.bend_min; })},
      {"scope.bend_max_deg", degrees([](RunConfig& c) -> double& { return c.scope.bend_max; })},
      {"scope.camera_fov_deg", degrees([](RunConfig& c) -> double& { return c.scope.camera_fov; })},
      {"scope.camera_range", real("mm", [](RunConfig& c) -> double& { return c.scope.camera_range; })},
      {"scope.entry_x", real("mm", [](RunConfig& c) -> double& { return c.scope.entry.x(); })},
      {"scope.entry_y", real("mm", [](RunConfig& c) -> double& { return c.scope.entry.y(); })},
      {"scope.entry_z", real("mm", [](RunConfig& c) -> double& { return c.scope.entry.z(); })},
      {"scope.insertion_min", real("mm", [](RunConfig& c) -> double& { return c.scope.insertion_min; })},
      {"scope.insertion_max", real("mm", [](RunConfig& c) -> double& { return c.scope.insertion_max; })},
      {"beam.divergence_deg", degrees([](RunConfig& c) -> double& { return c.beam.divergence; })},
      {"beam.rays", count("rays", [](RunConfig& c) -> std::size_t& { return c.beam.rays_per_config; })},
      {"beam.max_range", real("mm", [](RunConfig& c) -> double& { return c.beam.max_range; })},
      {"sampling.n", count("configs", [](RunConfig& c) -> std::size_t& { return c.sampling.n_configs; })},
      {"sampling.seed", count("", [](RunConfig& c) -> std::uint64_t& { return c.sampling.seed; })},
      {"sampling.clearance", real("mm", [](RunConfig& c) -> double& { return c.sampling.clearance; })},
      {"sampling.step_fraction", real("", [](RunConfig& c) -> double& { return c.sampling.step_fraction; })},
      {"sampling.budget_factor",
       count("attempts per node", [](RunConfig& c) -> std::size_t& { return c.sampling.budget_factor; })},
      {"sampling.weights",
       {"6 comma-separated weights (insertion, roll, tip_bend, dl, z, theta)",
        [](RunConfig& c, std::string_view k, std::string_view v) {
          JointVector w{};
          std::size_t i = 0;
          while (true) {
            const auto comma = v.find(',');
            if (i >= w.size()) throw ConfigError("config key '" + std::string(k) + "': expected 6 values");
            w[i++] = parse_double(k, trim(v.substr(0, comma)));
            if (comma == std::string_view::npos) break;
            v.remove_prefix(comma + 1);
          }
          if (i != w.size()) throw ConfigError("config key '" + std::string(k) + "': expected 6 values");
          c.sampling.metric_weights = w;
        }}},
      {"map.camera_rays", count("rays", [](RunConfig& c) -> std::size_t& { return c.map.camera_rays; })},
      {"map.visibility",
       {"joint|pooled",
        [](RunConfig& c, std::string_view k, std::string_view v) {
          if (v == "joint") {
            c.map.visibility = VisibilityMode::kJoint;
          } else if (v == "pooled") {
            c.map.visibility = VisibilityMode::kPooled;
          } else {
            throw ConfigError("config key '" + std::string(k) + "': expected joint or pooled");
          }
        }}},
      {"map.camera_test",
       {"spot|sampled",
        [](RunConfig& c, std::string_view k, std::string_view v) {
          if (v == "spot") {
            c.map.camera_test = CameraTest::kSpot;
          } else if (v == "sampled") {
            c.map.camera_test = CameraTest::kSampled;
          } else {
            throw ConfigError("config key '" + std::string(k) + "': expected spot or sampled");
          }
        }}},
      {"map.mode",
       {"steerable|straight",
        [](RunConfig& c, std::string_view k, std::string_view v) {
          if (v == "steerable") {
            c.mode = FiberMode::kSteerable;
          } else if (v == "straight") {
            c.mode = FiberMode::kStraight;
          } else {
            throw ConfigError("config key '" + std::string(k) + "': expected steerable or straight");
          }
        }}},
      {"io.mesh", {"path", [](RunConfig& c, std::string_view, std::string_view v) { c.mesh_path = v; }}},
      {"io.scale", real("mm per file unit", [](RunConfig& c) -> double& { return c.mesh_scale; })},
      {"io.out_dir", {"path", [](RunConfig& c, std::string_view, std::string_view v) { c.out_dir = v; }}},
  };
  return table;
}

}  // namespace

void RunConfig::set(std::string_view key, std::string_view value) {
  const auto& table = key_table();
  auto it = table.find(key);
  if (it == table.end()) throw ConfigError("unknown config key '" + std::string(key) + "'");
  it->second.apply(*this, key, trim(value));
}

void RunConfig::validate() const {
  try {
    sheath.validate();
    scope.validate();
    beam.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  if (!(sampling.clearance >= 0.0)) throw ConfigError("sampling.clearance must be >= 0");
  if (!(sampling.step_fraction > 0.0 && sampling.step_fraction <= 1.0)) {
    throw ConfigError("sampling.step_fraction must lie in (0, 1]");
  }
  for (double w : sampling.metric_weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw ConfigError("sampling.weights must be finite and >= 0");
  }
  if (sampling.budget_factor < 1) throw ConfigError("sampling.budget_factor must be >= 1");
  if (map.camera_rays < 1) throw ConfigError("map.camera_rays must be >= 1");
  if (!(mesh_scale > 0.0) || !std::isfinite(mesh_scale)) throw ConfigError("io.scale must be positive");
}

RunConfig parse_config(std::string_view text, RunConfig base) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string_view key = trim(line.substr(0, eq));
    try {
      base.set(key, line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(std::string(e.what()) + " (line " + std::to_string(line_no) + ")");
    }
  }
  return base;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return parse_config(text, std::move(base));
}

std::string config_keys_help() {
  std::ostringstream ss;
  for (const auto& [key, spec] : key_table()) {
    ss << "  " << key;
    if (*spec.unit) ss << " [" << spec.unit << "]";
    ss << "\n";
  }
  return ss.str();
}

}  // namespace steerfiber
